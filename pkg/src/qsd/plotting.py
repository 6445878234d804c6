"""SVG figures: CDF curves, Wigner heatmaps and the Fisher-minimum ladder.

Figures are built with the object-oriented matplotlib API (no pyplot global
state) and written with a fixed hash salt and no date stamp, so identical
inputs produce identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib as mpl
import numpy as np
from matplotlib.colors import TwoSlopeNorm
from matplotlib.axes import Axes
from matplotlib.figure import Figure

from .curves import Curve, monotonicity_report
from .errors import IoFailure, ValidationError
from .wigner import PhaseFunction

STYLE = {
    "font.size": 10,
    "axes.linewidth": 0.8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "qsd",
    "svg.fonttype": "path",
}
CURVE_COLOR = "#33638d"
VIOLATION_COLOR = "#e5575a"
DIVERGING = "RdBu_r"

CURVE_LABELS = {
    "supply": "supply CDF",
    "demand": "demand CDF",
    "conditional_supply": "conditional supply CDF",
    "conditional_demand": "conditional demand CDF",
}


def _save(fig: Figure, path: Path) -> Path:
    path = Path(path)
    try:
        with mpl.rc_context(STYLE):
            fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def _new_figure(size=(5.0, 3.4)) -> tuple[Figure, Axes]:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=size)
        ax = fig.add_subplot()
    return fig, ax


def _plot_curve(c: Curve, path: Path, title: str | None) -> Path:
    if len(c) < 2:
        raise ValidationError("cannot plot a curve with fewer than two points")
    with mpl.rc_context(STYLE):
        fig, ax = _new_figure()
        report = monotonicity_report(c)
        for lo, hi in report.violations:
            ax.axvspan(lo, hi, color=VIOLATION_COLOR, alpha=0.2, lw=0)
        ax.plot(c.abscissa, c.ordinate, color=CURVE_COLOR, lw=1.4)
        ax.set_xlabel("ln c")
        ax.set_ylabel("CDF")
        ax.set_title(title or CURVE_LABELS[c.kind] + ("" if report.monotone else "  (non-monotone)"))
        fig.tight_layout()
    return _save(fig, path)


def _plot_phase(f: PhaseFunction, path: Path, title: str | None) -> Path:
    v = f.values
    lim = float(np.max(np.abs(v))) or 1.0
    norm = TwoSlopeNorm(vcenter=0.0, vmin=-lim, vmax=lim)
    s = f.spec
    with mpl.rc_context(STYLE):
        fig, ax = _new_figure((4.6, 4.0))
        im = ax.imshow(
            v.T, origin="lower", extent=(s.x_min, s.x_max, s.y_min, s.y_max),
            cmap=DIVERGING, norm=norm, aspect="auto", interpolation="nearest",
        )
        fig.colorbar(im, ax=ax, label="f(x, y)")
        ax.set_xlabel("x (buy log-price)")
        ax.set_ylabel("y (sell log-price)")
        ax.set_title(title or "phase-space function")
        fig.tight_layout()
    return _save(fig, path)


def render_plot(data: Curve | PhaseFunction, path: Path, title: str | None = None) -> Path:
    """Write ``data`` as an SVG.

    Curves become polylines (violation intervals shaded); phase functions a
    diverging heatmap with zero pinned to the neutral colour.
    """
    if isinstance(data, Curve):
        return _plot_curve(data, path, title)
    if isinstance(data, PhaseFunction):
        return _plot_phase(data, path, title)
    raise ValidationError(f"cannot plot {type(data).__name__}")


def render_profile(x: np.ndarray, series: dict[str, np.ndarray], path: Path,
                   xlabel: str = "x (log-price)", title: str | None = None) -> Path:
    with mpl.rc_context(STYLE):
        fig, ax = _new_figure()
        for label, y in series.items():
            ax.plot(x, y, lw=1.3, label=label)
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_xlabel(xlabel)
        ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        fig.tight_layout()
    return _save(fig, path)


def render_ladder(x: np.ndarray, levels: Sequence[float], amplitudes: Sequence[np.ndarray],
                  mu: float, m: float, path: Path) -> Path:
    """Eigen-amplitudes drawn at the height of their risk level, over the
    quadratic risk potential."""
    with mpl.rc_context(STYLE):
        fig, ax = _new_figure((5.0, 4.0))
        potential = 0.5 * mu * (x - m) ** 2
        top = max(levels) + 1.0
        keep = potential <= top
        ax.plot(x[keep], potential[keep], color="0.5", lw=1.0)
        peak = max(float(np.max(np.abs(a))) for a in amplitudes) or 1.0
        for eps, amp in zip(levels, amplitudes):
            ax.axhline(eps, color="0.85", lw=0.6)
            ax.plot(x, eps + 0.4 * amp / peak, color=CURVE_COLOR, lw=1.1)
        ax.set_xlim(x[keep][0], x[keep][-1])
        ax.set_ylim(0.0, top)
        ax.set_xlabel("x (log-price)")
        ax.set_ylabel("risk level")
        ax.set_title("local minima of Fisher information")
        fig.tight_layout()
    return _save(fig, path)
