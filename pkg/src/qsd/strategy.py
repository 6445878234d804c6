"""Hermite-Gaussian strategy amplitudes.

A strategy is a real amplitude psi(x) over the log-price x, expanded in the
minimal-information family

    psi_n(x) = sqrt(sqrt(mu) / (2^n n! sqrt(pi))) exp(-mu (x-m)^2 / 2) H_n(sqrt(mu) (x-m))

with scale ``mu`` and centre ``m``.  The density is f = psi**2.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULTS
from .errors import BadWeights, DomainTooNarrow, InvalidStrategy, NotNormalized
from .grid import GridFunction, GridSpec, trapezoid

PI_QUARTER = math.pi ** -0.25


def hermite_eval(n: int, u):
    """Physicists' Hermite polynomial H_n(u) by the three-term recurrence."""
    if n < 0:
        raise ValueError("Hermite index must be >= 0")
    u = np.asarray(u, dtype=float)
    h_prev = np.ones_like(u)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * u
    for k in range(1, n):
        h_prev, h = h, 2.0 * u * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def hermite_functions(n_max: int, u) -> np.ndarray:
    """Orthonormal Hermite functions phi_0..phi_{n_max} at ``u``.

    Uses the normalized recurrence
    phi_{k+1} = sqrt(2/(k+1)) u phi_k - sqrt(k/(k+1)) phi_{k-1},
    which never forms 2^n n! and so is safe for large n.  Shape is
    ``(n_max + 1,) + u.shape``.
    """
    u = np.asarray(u, dtype=float)
    out = np.empty((n_max + 1,) + u.shape)
    out[0] = PI_QUARTER * np.exp(-0.5 * u * u)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * u * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def psi_pure_eval(n: int, mu: float, m: float, x):
    if mu <= 0:
        raise InvalidStrategy(f"mu must be positive, got {mu}")
    x = np.asarray(x, dtype=float)
    u = math.sqrt(mu) * (x - m)
    if n <= DEFAULTS.hermite_direct_max:
        norm = math.sqrt(math.sqrt(mu) / (2.0**n * math.factorial(n) * math.sqrt(math.pi)))
        val = norm * np.exp(-0.5 * u * u) * hermite_eval(n, u)
    else:
        val = mu**0.25 * hermite_functions(n, u)[n]
    return val if np.ndim(val) else float(val)


@dataclass(frozen=True)
class Strategy:
    """Amplitude sum_k coeffs[k] * psi_k(x; mu, m).

    Coefficient vectors off unit norm by at most 1e-6 are rescaled (with a
    warning); anything further off is rejected.
    """

    mu: float
    m: float
    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise InvalidStrategy(f"mu must be positive and finite, got {self.mu}")
        if not np.isfinite(self.m):
            raise InvalidStrategy("m must be finite")
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise InvalidStrategy("coefficients must be a non-empty finite sequence")
        norm2 = float(c @ c)
        if abs(norm2 - 1.0) > 1e-12:
            if abs(norm2 - 1.0) > DEFAULTS.coeff_rescale_tol:
                raise InvalidStrategy(f"coefficients have squared norm {norm2!r}, expected 1")
            warnings.warn(f"rescaling coefficients with squared norm {norm2!r}", stacklevel=3)
            c = c / math.sqrt(norm2)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "coeffs", tuple(float(v) for v in c))

    @classmethod
    def pure(cls, n: int, mu: float = 1.0, m: float = 0.0) -> Strategy:
        if n < 0:
            raise InvalidStrategy("basis index must be >= 0")
        c = [0.0] * (n + 1)
        c[n] = 1.0
        return cls(mu, m, tuple(c))

    @property
    def order(self) -> int:
        """Highest basis index carried."""
        return len(self.coeffs) - 1

    @property
    def pure_index(self) -> int | None:
        """n if the coefficients are the unit vector e_n, else None."""
        c = np.abs(np.asarray(self.coeffs))
        k = int(np.argmax(c))
        if abs(c[k] - 1.0) <= 1e-12 and np.all(np.delete(c, k) <= 1e-12):
            return k
        return None

    @property
    def spread(self) -> float:
        """sigma_N = sqrt((N + 1/2) / mu), the width used for default grids."""
        return math.sqrt((self.order + 0.5) / self.mu)

    def default_grid(
        self,
        span: float = DEFAULTS.grid_span_sigmas,
        points: int = DEFAULTS.grid_points,
    ) -> GridSpec:
        return GridSpec.centered(self.m, span * self.spread, points)

    def __call__(self, x):
        return strategy_eval(self, x)

    def to_dict(self) -> dict:
        return {"mu": self.mu, "m": self.m, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, d: dict) -> Strategy:
        try:
            return cls(float(d["mu"]), float(d["m"]), tuple(float(c) for c in d["coeffs"]))
        except (KeyError, TypeError) as exc:
            raise InvalidStrategy(f"bad strategy descriptor: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> Strategy:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidStrategy(f"strategy descriptor is not JSON: {exc}") from exc


@dataclass(frozen=True)
class Moments:
    mean: float
    risk: float

    def __post_init__(self):
        if self.risk < 0:
            raise ValueError("risk must be non-negative")


def basis_matrix(n_max: int, mu: float, m: float, x) -> np.ndarray:
    """Rows psi_0..psi_{n_max} evaluated at ``x``."""
    return mu**0.25 * hermite_functions(n_max, math.sqrt(mu) * (np.asarray(x, dtype=float) - m))


def strategy_eval(s: Strategy, x):
    x = np.asarray(x, dtype=float)
    val = np.tensordot(np.asarray(s.coeffs), basis_matrix(s.order, s.mu, s.m, x), axes=1)
    return val if np.ndim(val) else float(val)


def strategy_pdf(s: Strategy, grid: GridSpec | None = None) -> GridFunction:
    grid = grid or s.default_grid()
    values = strategy_eval(s, grid.nodes) ** 2
    total = trapezoid(values, grid.h)
    if total < 1.0 - DEFAULTS.pdf_norm_tol:
        raise DomainTooNarrow(
            f"grid [{grid.x_min}, {grid.x_max}] captures only {total:.6g} of the probability"
        )
    return GridFunction(grid, values)


def density_moments(f: GridFunction) -> Moments:
    x, h = f.nodes, f.spec.h
    mass = trapezoid(f.values, h)
    mean = trapezoid(x * f.values, h) / mass
    var = trapezoid((x - mean) ** 2 * f.values, h) / mass
    return Moments(mean, max(var, 0.0))


def strategy_moments(s: Strategy) -> Moments:
    return density_moments(strategy_pdf(s))


@dataclass(frozen=True)
class Projection:
    coeffs: np.ndarray
    residual: float  # L2 norm of f - sum c_k psi_k on the grid


def project_onto_basis(f: GridFunction, mu: float, m: float, n_max: int) -> Projection:
    """Expand an amplitude sampled on a grid in the psi_k(mu, m) basis."""
    h = f.spec.h
    norm2 = trapezoid(f.values**2, h)
    if abs(norm2 - 1.0) > DEFAULTS.pdf_norm_tol:
        raise NotNormalized(f"amplitude has squared norm {norm2:.6g}")
    basis = basis_matrix(n_max, mu, m, f.nodes)
    coeffs = np.array([trapezoid(f.values * row, h) for row in basis])
    resid = f.values - coeffs @ basis
    return Projection(coeffs, math.sqrt(max(trapezoid(resid**2, h), 0.0)))


def mixture_entropy(weights: Sequence[float]) -> float:
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or np.any(~np.isfinite(w)) or np.any(w < 0):
        raise BadWeights("weights must be finite and non-negative")
    if abs(w.sum() - 1.0) > 1e-12:
        raise BadWeights(f"weights sum to {w.sum()!r}, expected 1")
    nz = w[w > 0]
    return float(-(nz * np.log(nz)).sum()) + 0.0
