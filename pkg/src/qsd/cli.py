"""Command-line front end.

Each subcommand writes its artifacts into ``<out>/<command>-<timestamp>/``
together with ``manifest.json``.  Exit status: 0 success, 1 invalid input,
2 numerical failure (an ``error.json`` is written in both failure cases).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

import matplotlib
import numpy as np
import scipy

from . import __version__
from .config import DEFAULTS
from .curves import (
    cdf_demand,
    cdf_supply,
    conditional_demand_curve,
    conditional_supply_curve,
    monotonicity_report,
    region_intervals_on_slice,
)
from .duality import (
    CONVENTION,
    fisher_ft_invariance,
    fourier_transform_values,
    ft_eigen_defect,
    self_dual_grid,
    strategy_ft_eval,
    uncertainty_product,
)
from .eigen import build_hamiltonian, eigen_grid, el_residual, lowest_eigenpairs, perturbation_check
from .errors import NumericalError, QSDError, ValidationError
from .estimation import cramer_rao_monte_carlo, estimate_moments, fit_minimal_strategy, parse_transactions
from .fisher import (
    cramer_rao_product,
    fisher_information_closed,
    fisher_information_grid,
    surprisal_derivative,
)
from .grid import GridFunction
from .io import write_columns, write_curve, write_json, write_phase
from .plotting import render_ladder, render_plot, render_profile
from .strategy import Strategy, strategy_eval, strategy_moments, strategy_pdf
from .wigner import (
    PhaseGridSpec,
    boundary_radii,
    negative_regions,
    wigner_marginal_defect,
    wigner_numeric,
)

COMMANDS = ("strategy", "fisher", "eigensolve", "duality", "wigner", "curves", "fit", "montecarlo")
OUT_ENV = "QSD_OUT_DIR"


@dataclass
class RunConfig:
    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_dir: Path = Path("qsd-out")
    seed: int | None = None


# -- validation ---------------------------------------------------------------


def _positive(name: str, v) -> None:
    if v is None or not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
        raise ValidationError(f"--{name.replace('_', '-')} must be a positive number, got {v!r}")


def validate(cfg: RunConfig) -> None:
    if cfg.command not in COMMANDS:
        raise ValidationError(f"unknown command {cfg.command!r}")
    p = cfg.parameters
    _positive("mu", p["mu"])
    if not math.isfinite(p["m"]):
        raise ValidationError("--m must be finite")
    if p["n"] < 0:
        raise ValidationError("--n must be >= 0")
    if p["grid_points"] < 16:
        raise ValidationError("--grid-points must be >= 16")
    _positive("grid_span_sigmas", p["grid_span_sigmas"])
    if cfg.command == "eigensolve":
        if not 1 <= p["k"] <= 20:
            raise ValidationError("--k must be in 1..20")
        if p["trials"] < 10:
            raise ValidationError("--trials must be >= 10 for the perturbation check")
    if cfg.command == "montecarlo":
        if p["trials"] < 100:
            raise ValidationError("--trials must be >= 100")
        if p["samples"] < 1:
            raise ValidationError("--samples must be >= 1")
    if cfg.command == "fit" and not p.get("input"):
        raise ValidationError("fit needs --input <transactions.csv>")


def _strategy(p: dict) -> Strategy:
    if p.get("strategy"):
        try:
            text = Path(p["strategy"]).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read strategy descriptor: {exc}") from exc
        return Strategy.from_json(text)
    if p.get("coeffs"):
        return Strategy(p["mu"], p["m"], tuple(p["coeffs"]))
    return Strategy.pure(p["n"], p["mu"], p["m"])


def _grid(s: Strategy, p: dict):
    return s.default_grid(p["grid_span_sigmas"], p["grid_points"])


# -- commands -------------------------------------------------------------------


def run_strategy(p: dict, out: Path) -> list[Path]:
    s = _strategy(p)
    f = strategy_pdf(s, _grid(s, p))
    mom = strategy_moments(s)
    files = [
        write_json(out / "strategy.json", s.to_dict()),
        write_columns(out / "pdf.csv", {"x": f.nodes, "psi": strategy_eval(s, f.nodes), "pdf": f.values}),
        write_json(out / "moments.json", {"mean": mom.mean, "risk": mom.risk, "integral": f.integral()}),
    ]
    if p["plot"]:
        files.append(render_profile(f.nodes, {"psi": strategy_eval(s, f.nodes), "psi^2": f.values},
                                    out / "strategy.svg"))
    return files


def run_fisher(p: dict, out: Path) -> list[Path]:
    s = _strategy(p)
    f = strategy_pdf(s, _grid(s, p))
    grid_report = fisher_information_grid(f)
    result = {
        "quadrature": grid_report.as_dict(),
        "closed_form": fisher_information_closed(s).as_dict() if s.pure_index is not None else None,
        "cramer_rao_product": cramer_rao_product(f),
    }
    g = surprisal_derivative(f)
    files = [
        write_json(out / "fisher.json", result),
        write_columns(out / "surprisal.csv", {"x": g.nodes, "dS_dx": g.values, "support": g.support}),
    ]
    if p["plot"]:
        files.append(render_profile(g.nodes[g.support], {"dS/dx": g.values[g.support]}, out / "surprisal.svg"))
    return files


def run_eigensolve(p: dict, out: Path) -> list[Path]:
    mu, m, k = p["mu"], p["m"], p["k"]
    grid = eigen_grid(mu, m, k - 1, p["grid_points"], p["grid_span_sigmas"])
    H = build_hamiltonian(grid, mu, m, k - 1)
    sols = lowest_eigenpairs(H, k)
    fisher = [
        fisher_information_grid(GridFunction(grid, e.eigenvector.values**2)).value for e in sols
    ]
    residuals = [
        el_residual(GridFunction(grid, strategy_eval(Strategy.pure(e.index, mu, m), grid.nodes)),
                    e.index + 0.5, mu, m)
        for e in sols
    ]
    seed = p["seed"] if p["seed"] is not None else 0
    pert = perturbation_check(Strategy.pure(min(p["n"], k - 1), mu, m), p["trials"], seed)
    result = {
        "eigenvalues": [e.eigenvalue for e in sols],
        "discrete_eigenvalues": [e.discrete_eigenvalue for e in sols],
        "expected": [j + 0.5 for j in range(k)],
        "h": grid.h,
        "grid": grid.as_dict(),
        "fisher_of_eigenvectors": fisher,
        "closed_form_residuals": residuals,
        "residual_constants": [r / grid.h**2 for r in residuals],
        "perturbation": pert.as_dict(),
    }
    cols = {"x": grid.nodes}
    cols.update({f"psi_{e.index}": e.eigenvector.values for e in sols})
    files = [write_json(out / "eigenvalues.json", result), write_columns(out / "eigenvectors.csv", cols)]
    if p["plot"]:
        files.append(render_ladder(grid.nodes, [e.eigenvalue for e in sols],
                                   [e.eigenvector.values for e in sols], mu, m, out / "ladder.svg"))
    return files


def run_duality(p: dict, out: Path) -> list[Path]:
    s = _strategy(p)
    grid = self_dual_grid(s.mu, s.m, DEFAULTS.dual_points)
    psi = strategy_eval(s, grid.nodes)
    dual = fourier_transform_values(psi, grid)
    n = s.pure_index
    result = {
        "convention": CONVENTION,
        "uncertainty_product": uncertainty_product(s),
        "parseval_defect": abs(float(np.sum(dual.modulus**2)) * dual.spec.h - float(np.sum(psi**2)) * grid.h),
        "analytic_defect": float(np.max(np.abs(dual.values - strategy_ft_eval(s, dual.nodes)))),
        "note": "the unitary convention gives Delta x * Delta y = n + 1/2, so 0.5 for n = 0",
    }
    if n is not None:
        supply, demand = fisher_ft_invariance(n)
        result["ft_eigen_defect"] = ft_eigen_defect(n)
        result["fisher_supply"], result["fisher_demand"] = supply, demand
    keep = dual.modulus > 1e-300
    keep = np.flatnonzero(keep)
    sl = slice(keep[0], keep[-1] + 1) if keep.size else slice(0, 0)
    files = [
        write_json(out / "duality.json", result),
        write_columns(out / "dual.csv", {"y": dual.nodes[sl], "re": dual.values_re[sl],
                                         "im": dual.values_im[sl], "modulus": dual.modulus[sl]}),
    ]
    if p["plot"]:
        window = np.abs(grid.nodes - s.m) <= 6 * s.spread
        files.append(render_profile(grid.nodes[window], {"|psi|": np.abs(psi[window]),
                                                          "|psi_hat|": np.abs(dual.at(grid.nodes[window] - s.m))},
                                    out / "duality.svg", xlabel="x, y"))
    return files


def run_wigner(p: dict, out: Path) -> list[Path]:
    s = _strategy(p)
    spec = PhaseGridSpec.for_strategy(s)
    f = wigner_numeric(s, spec)
    dx, dy = wigner_marginal_defect(f, s)
    n = s.pure_index
    info: dict[str, Any] = {
        "strategy": s.to_dict(),
        "grid": spec.as_dict(),
        "integral": f.integral(),
        "min": float(f.values.min()),
        "marginal_defect_x": dx,
        "marginal_defect_y": dy,
    }
    if n is not None:
        regs = negative_regions(n)
        info.update({
            "n": n,
            "regions": [r.as_dict() for r in regs],
            "boundary_radii": boundary_radii(n),
            "count": len(regs),
            "claimed_count": (n // 2) if n % 2 == 0 else (1 if n else 0),
        })
    files = [write_phase(f, out / "phase.csv"), write_json(out / "negative_regions.json", info)]
    if p["plot"]:
        files.append(render_plot(f, out / "wigner.svg", title=f"phase-space function, n = {n}" if n is not None else None))
    return files


def run_curves(p: dict, out: Path) -> list[Path]:
    s = _strategy(p)
    f = strategy_pdf(s, _grid(s, p))
    phase = wigner_numeric(s)
    x_fixed = p["x_fixed"] if p["x_fixed"] is not None else s.m
    y_fixed = p["y_fixed"] if p["y_fixed"] is not None else 0.0
    curves = {
        "supply": cdf_supply(f),
        "demand": cdf_demand(f),
        "conditional_demand": conditional_demand_curve(phase, x_fixed),
        "conditional_supply": conditional_supply_curve(phase, y_fixed),
    }
    regs = negative_regions(s.pure_index) if s.pure_index is not None else []
    projections = {
        "conditional_demand": region_intervals_on_slice(regs, s.mu, s.m, x_fixed=x_fixed),
        "conditional_supply": region_intervals_on_slice(regs, s.mu, s.m, y_fixed=y_fixed),
    }
    files: list[Path] = []
    giffen = {}
    for name, c in curves.items():
        files += write_curve(c, out / f"{name}.csv")
        giffen[name] = monotonicity_report(c).as_dict()
        if name in projections:
            giffen[name]["negative_region_projection"] = [list(iv) for iv in projections[name]]
        if p["plot"]:
            files.append(render_plot(c, out / f"{name}.svg"))
    files.append(write_json(out / "giffen.json", {"x_fixed": x_fixed, "y_fixed": y_fixed, "curves": giffen}))
    return files


def run_fit(p: dict, out: Path) -> list[Path]:
    try:
        with open(p["input"], newline="") as fh:
            sample = parse_transactions(fh, source=str(p["input"]))
    except OSError as exc:
        raise ValidationError(f"cannot read {p['input']}: {exc}") from exc
    groups = {"pooled": sample}
    if p["split_sides"]:
        groups.update({side: sample.side(side) for side in ("buy", "sell")})
    result = {}
    for name, smp in groups.items():
        est = estimate_moments(smp)
        fitted = fit_minimal_strategy(est.mean, est.risk, p["n"])
        result[name] = {"moments": est.as_dict(), "strategy": fitted.to_dict()}
    files = [write_json(out / "fit.json", result), write_json(out / "strategy.json", result["pooled"]["strategy"])]
    if p["plot"]:
        fitted = Strategy.from_dict(result["pooled"]["strategy"])
        f = strategy_pdf(fitted, _grid(fitted, p))
        files.append(render_plot(cdf_supply(f), out / "fit_supply.svg"))
    return files


def run_montecarlo(p: dict, out: Path) -> list[Path]:
    s = _strategy(p)
    seed = p["seed"] if p["seed"] is not None else 0
    rep = cramer_rao_monte_carlo(s, p["samples"], p["trials"], seed)
    return [write_json(out / "report.json", rep.as_dict())]


RUNNERS = {
    "strategy": run_strategy,
    "fisher": run_fisher,
    "eigensolve": run_eigensolve,
    "duality": run_duality,
    "wigner": run_wigner,
    "curves": run_curves,
    "fit": run_fit,
    "montecarlo": run_montecarlo,
}


def versions() -> dict[str, str]:
    return {
        "qsd": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
        "python": platform.python_version(),
    }


def _run_dir(root: Path, command: str) -> Path:
    stamp = datetime.now().strftime("%Y%m%dT%H%M%S")
    base = root / f"{command}-{stamp}"
    path, i = base, 1
    while path.exists():
        path = base.with_name(f"{base.name}-{i}")
        i += 1
    path.mkdir(parents=True)
    return path


def execute(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; returns (exit status, manifest or error record)."""
    out: Path | None = None
    try:
        validate(cfg)
        try:
            out = _run_dir(Path(cfg.output_dir), cfg.command)
        except OSError as exc:
            raise ValidationError(f"output directory not writable: {exc}") from exc
        files = RUNNERS[cfg.command](cfg.parameters, out)
        manifest = {
            "command": cfg.command,
            "parameters": cfg.parameters,
            "seed": cfg.seed,
            "defaults": DEFAULTS.as_dict(),
            "versions": versions(),
            "files": sorted(f.name for f in files),
        }
        write_json(out / "manifest.json", manifest)
        manifest["run_dir"] = str(out)
        return 0, manifest
    except QSDError as exc:
        status = 2 if isinstance(exc, NumericalError) else 1
        record = {"status": status, "command": cfg.command, **exc.to_dict()}
        if out is not None:
            write_json(out / "error.json", record)
            record["run_dir"] = str(out)
        return status, record


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float, default=1.0, help="inverse-variance scale (default 1)")
    common.add_argument("--m", type=float, default=0.0, help="mean log-price (default 0)")
    common.add_argument("--n", type=int, default=0, help="basis index of a pure strategy (default 0)")
    common.add_argument("--coeffs", type=_floats, default=None, help="superposition coefficients a,b,c")
    common.add_argument("--strategy", default=None, help="strategy descriptor JSON file")
    common.add_argument("--grid-points", type=int, default=DEFAULTS.grid_points)
    common.add_argument("--grid-span-sigmas", type=float, default=DEFAULTS.grid_span_sigmas)
    common.add_argument("--k", type=int, default=4, help="number of eigenpairs (eigensolve)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--trials", type=int, default=None,
                        help="Monte-Carlo trials (default 10000) or perturbation trials (default 100)")
    common.add_argument("--samples", type=int, default=100, help="samples per Monte-Carlo trial")
    common.add_argument("--input", default=None, help="transaction CSV for fit")
    common.add_argument("--split-sides", action="store_true", help="also fit buy and sell separately")
    common.add_argument("--x-fixed", type=float, default=None, help="slice for the conditional demand curve")
    common.add_argument("--y-fixed", type=float, default=None, help="slice for the conditional supply curve")
    common.add_argument("--out", default=None, help=f"output root (default ${OUT_ENV} or ./qsd-out)")
    common.add_argument("--plot", action="store_true", help="also write SVG figures")

    parser = argparse.ArgumentParser(prog="qsd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qsd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "strategy": "sample a strategy amplitude and density",
        "fisher": "Fisher information, surprisal gradient, Cramer-Rao product",
        "eigensolve": "finite-difference eigenpairs of the risk-balance operator",
        "duality": "supply/demand Fourier duality checks",
        "wigner": "phase-space function and its negative regions",
        "curves": "supply/demand and conditional curves with Giffen detection",
        "fit": "fit a minimal-information strategy to transactions",
        "montecarlo": "Monte-Carlo Cramer-Rao check",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    trials = args.trials
    if trials is None:
        trials = 10000 if args.command == "montecarlo" else 100
    params = {
        "mu": args.mu, "m": args.m, "n": args.n, "coeffs": args.coeffs, "strategy": args.strategy,
        "grid_points": args.grid_points, "grid_span_sigmas": args.grid_span_sigmas, "k": args.k,
        "seed": args.seed, "trials": trials, "samples": args.samples, "input": args.input,
        "split_sides": args.split_sides, "x_fixed": args.x_fixed, "y_fixed": args.y_fixed,
        "plot": args.plot,
    }
    out = args.out or os.environ.get(OUT_ENV) or "qsd-out"
    return RunConfig(args.command, params, Path(out), args.seed)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    status, record = execute(config_from_args(args))
    if status == 0:
        print(record["run_dir"])
    else:
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
