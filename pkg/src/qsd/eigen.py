"""Finite-difference check of the risk-balance eigenproblem.

The operator  -(1/2mu) d^2/dx^2 + (mu/2)(x-m)^2  is discretized with the
three-point Laplacian and Dirichlet ends, giving a symmetric tridiagonal
matrix.  Its lowest eigenvalues come from Sturm-count bisection, eigenvectors
from inverse iteration.  Constrained random perturbations probe whether the
Hermite-Gaussian amplitudes are (local) minimizers of the Fisher information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .config import DEFAULTS
from .errors import ConvergenceFailure, DomainTooNarrow, NotNormalized, ValidationError
from .fisher import fisher_information_grid
from .grid import GridFunction, GridSpec, trapezoid
from .strategy import Strategy, basis_matrix, density_moments, strategy_eval


@dataclass(frozen=True)
class TridiagonalOperator:
    diag: np.ndarray
    off: np.ndarray
    spec: GridSpec
    mu: float
    m: float

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


@dataclass(frozen=True)
class EigenSolution:
    """One eigenpair.

    ``eigenvalue`` carries the leading h^2 correction of the three-point
    stencil; ``discrete_eigenvalue`` is the raw matrix eigenvalue.
    """

    eigenvalue: float
    eigenvector: GridFunction
    index: int
    discrete_eigenvalue: float


def eigen_grid(
    mu: float,
    m: float,
    k_max: int,
    points: int = DEFAULTS.grid_points,
    span: float = DEFAULTS.grid_span_sigmas,
) -> GridSpec:
    """[m - span*sigma_K, m + span*sigma_K] with sigma_K = sqrt((K+1/2)/mu)."""
    return GridSpec.centered(m, span * math.sqrt((k_max + 0.5) / mu), points)


def build_hamiltonian(grid: GridSpec, mu: float, m: float, k_max: int = 0) -> TridiagonalOperator:
    if mu <= 0:
        raise ValidationError(f"mu must be positive, got {mu}")
    need = DEFAULTS.grid_span_sigmas * math.sqrt((k_max + 0.5) / mu)
    slack = 1e-9 * need
    if grid.x_min > m - need + slack or grid.x_max < m + need - slack:
        raise DomainTooNarrow(
            f"grid [{grid.x_min:.4g}, {grid.x_max:.4g}] does not cover m +/- {need:.4g}"
        )
    return _operator_no_check(grid, mu, m)


def sturm_count(diag: np.ndarray, off2: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift (LDL^T pivot signs)."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    tiny = np.finfo(float).tiny ** 0.5
    q = diag[0] - shifts
    q = np.where(q == 0.0, -tiny, q)
    count = (q < 0).astype(int)
    for i in range(1, diag.size):
        q = diag[i] - shifts - off2[i - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def _bisect_eigenvalues(H: TridiagonalOperator, k: int) -> np.ndarray:
    d, e = H.diag, H.off
    radius = np.abs(np.concatenate(([0.0], e))) + np.abs(np.concatenate((e, [0.0])))
    lo = np.full(k, float(np.min(d - radius)))
    hi = np.full(k, float(np.max(d + radius)))
    target = np.arange(k)
    off2 = e * e
    for _ in range(DEFAULTS.eigen_max_bisections):
        width = hi - lo
        scale = np.maximum(np.abs(lo), np.abs(hi))
        if np.all(width <= DEFAULTS.eigen_rel_tol * scale + 1e-300):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        below = sturm_count(d, off2, mid)
        # eigenvalue j lies below mid iff more than j eigenvalues are below mid
        left = below > target
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
    bad = int(np.argmax(hi - lo > DEFAULTS.eigen_rel_tol * np.maximum(np.abs(lo), np.abs(hi))))
    raise ConvergenceFailure(f"bisection did not converge for eigenvalue {bad}", index=bad)


def _inverse_iteration(H: TridiagonalOperator, lam: float, index: int) -> np.ndarray:
    n = H.diag.size
    shift = lam - 1e-10 * max(abs(lam), 1.0)
    ab = np.zeros((3, n))
    ab[0, 1:] = H.off
    ab[1] = H.diag - shift
    ab[2, :-1] = H.off
    # deterministic start vector with components along every eigenvector
    v = 1.0 + 0.01 * np.cos(np.arange(n) * 0.7)
    v /= np.linalg.norm(v)
    for _ in range(DEFAULTS.inverse_iterations):
        w = solve_banded((1, 1), ab, v)
        nrm = np.linalg.norm(w)
        if not np.isfinite(nrm) or nrm == 0.0:
            raise ConvergenceFailure(f"inverse iteration broke down for eigenvector {index}", index=index)
        v = w / nrm
    resid = np.linalg.norm(H.matvec(v) - lam * v)
    if resid > 1e-6 * max(abs(lam), 1.0) * math.sqrt(n):
        raise ConvergenceFailure(
            f"eigenvector {index} residual {resid:.3g} after inverse iteration", index=index
        )
    return v


def _orient(v: np.ndarray) -> np.ndarray:
    # psi_n is positive as x -> +inf (H_n has positive leading coefficient)
    big = np.flatnonzero(np.abs(v) >= 1e-3 * np.max(np.abs(v)))
    return v if v[big[-1]] >= 0 else -v


def _laplacian(v: np.ndarray, h: float) -> np.ndarray:
    # Dirichlet: v vanishes just outside the grid
    lap = np.empty_like(v)
    lap[1:-1] = v[2:] - 2.0 * v[1:-1] + v[:-2]
    lap[0] = v[1] - 2.0 * v[0]
    lap[-1] = v[-2] - 2.0 * v[-1]
    return lap / (h * h)


def _correct_vector(H: TridiagonalOperator, lam: float, v: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    h = H.spec.h
    ab = np.zeros((3, v.size))
    ab[0, 1:] = H.off
    ab[1] = H.diag - lam
    ab[2, :-1] = H.off
    delta = solve_banded((1, 1), ab, rhs - trapezoid(rhs * v, h) * v)
    # the operator is singular along v; that component is arbitrary
    delta -= trapezoid(delta * v, h) * v
    if not np.all(np.isfinite(delta)):
        return v
    w = v + delta
    return w / math.sqrt(trapezoid(w * w, h))


def lowest_eigenpairs(H: TridiagonalOperator, k: int) -> list[EigenSolution]:
    if not 1 <= k <= 20:
        raise ValidationError(f"k must be in 1..20, got {k}")
    if k > H.diag.size:
        raise ValidationError("k exceeds the matrix size")
    h = H.spec.h
    values = _bisect_eigenvalues(H, k)
    out = []
    for j, lam in enumerate(values):
        v = _orient(_inverse_iteration(H, float(lam), j))
        v = v / math.sqrt(trapezoid(v * v, h))
        # three-point Laplacian error: H_h = H - (h^2 / 24 mu) d^4, so to first
        # order eps = eps_h + <P> and psi = psi_h + delta with
        # (H_h - eps_h) delta = -(P - <P>) psi_h,  P = (h^2 / 24 mu) d^4
        lap = _laplacian(v, h)
        p_v = h * h / (24.0 * H.mu) * _laplacian(lap, h)
        shift = trapezoid(v * p_v, h)
        corrected = float(lam) + shift
        v = _correct_vector(H, float(lam), v, -(p_v - shift * v))
        out.append(EigenSolution(corrected, GridFunction(H.spec, v), j, float(lam)))
    return out


def el_residual(psi: GridFunction, eps: float, mu: float, m: float) -> float:
    """Grid L2 norm of (H - eps) psi for the three-point operator on psi's grid."""
    if not np.any(psi.values):
        return 0.0
    norm2 = trapezoid(psi.values**2, psi.spec.h)
    if abs(norm2 - 1.0) > DEFAULTS.pdf_norm_tol:
        raise NotNormalized(f"amplitude has squared norm {norm2:.6g}")
    H = _operator_no_check(psi.spec, mu, m)
    r = H.matvec(np.array(psi.values)) - eps * psi.values
    return math.sqrt(trapezoid(r * r, psi.spec.h))


def _operator_no_check(grid: GridSpec, mu: float, m: float) -> TridiagonalOperator:
    h = grid.h
    diag = 1.0 / (mu * h * h) + 0.5 * mu * (grid.nodes - m) ** 2
    off = np.full(grid.points - 1, -1.0 / (2.0 * mu * h * h))
    return TridiagonalOperator(diag, off, grid, float(mu), float(m))


@dataclass(frozen=True)
class PerturbationReport:
    """Outcome of constrained random perturbations around a pure strategy.

    ``mode`` is ``"minimum"`` for n = 0 (every perturbed value must stay above
    the baseline) and ``"stationary"`` for n >= 1 (changes must be second order
    in ``delta``).
    """

    n: int
    trials: int
    seed: int
    delta: float
    mode: str
    baseline: float
    values: tuple[float, ...]
    tolerance: float
    failures: tuple[int, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def min_excess(self) -> float:
        return min(self.values) - self.baseline

    @property
    def max_abs_change(self) -> float:
        return max(abs(v - self.baseline) for v in self.values)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "delta": self.delta,
            "mode": self.mode,
            "baseline": self.baseline,
            "min_excess": self.min_excess,
            "max_abs_change": self.max_abs_change,
            "tolerance": self.tolerance,
            "failures": list(self.failures),
            "passed": self.passed,
        }


def constrained_perturbation(
    s: Strategy, direction: np.ndarray, delta: float, grid: GridSpec
) -> GridFunction:
    """Density of psi + delta * sum_j direction[j] psi_j, pulled back onto the
    mean and risk of ``s`` (shift, affine x-rescale, renormalize)."""
    n_dir = direction.size - 1

    def amp(x):
        return strategy_eval(s, x) + delta * (direction @ basis_matrix(n_dir, s.mu, s.m, x))

    x, h = grid.nodes, grid.h
    raw = amp(x) ** 2
    mass = trapezoid(raw, h)
    mom = density_moments(GridFunction(grid, raw / mass))
    target_r = (s.pure_index + 0.5) / s.mu
    scale = math.sqrt(mom.risk / target_r)
    values = math.sqrt(scale) * amp(mom.mean + (x - s.m) * scale)
    pdf = values**2 / mass
    pdf /= trapezoid(pdf, h)
    return GridFunction(grid, pdf)


def perturbation_check(
    s: Strategy,
    trials: int,
    seed: int,
    delta: float = DEFAULTS.perturbation_delta,
    modes: int = DEFAULTS.perturbation_modes,
) -> PerturbationReport:
    n = s.pure_index
    if n is None:
        raise ValidationError("perturbation_check needs a pure strategy e_n")
    if trials < 10:
        raise ValidationError(f"need at least 10 trials, got {trials}")
    modes = max(modes, n + 2)
    grid = eigen_grid(s.mu, s.m, modes)
    baseline = fisher_information_grid(constrained_perturbation(s, np.zeros(1), 0.0, grid)).value
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(trials):
        a = rng.standard_normal(modes + 1)
        a /= np.linalg.norm(a)
        values.append(fisher_information_grid(constrained_perturbation(s, a, delta, grid)).value)
    if n == 0:
        mode, tol = "minimum", 1e-9
        failures = tuple(i for i, v in enumerate(values) if v < baseline - tol)
    else:
        mode, tol = "stationary", DEFAULTS.stationarity_factor * delta**2
        failures = tuple(i for i, v in enumerate(values) if abs(v - baseline) > tol)
    return PerturbationReport(n, trials, seed, delta, mode, baseline, tuple(values), tol, failures)
