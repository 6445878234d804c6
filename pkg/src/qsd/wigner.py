"""Wigner phase-space functions over the (buy log-price x, sell log-price y) plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import bisect

from .config import DEFAULTS
from .duality import strategy_ft_eval
from .errors import DomainTooNarrow, ValidationError
from .grid import trapezoid
from .strategy import Strategy, strategy_eval


@dataclass(frozen=True)
class PhaseGridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int = DEFAULTS.phase_points
    ny: int = DEFAULTS.phase_points

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValidationError("phase grid bounds out of order")
        if self.nx < 16 or self.ny < 16:
            raise ValidationError("phase grid needs at least 16 nodes per axis")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    @classmethod
    def for_strategy(
        cls,
        s: Strategy,
        span: float = DEFAULTS.phase_span_sigmas,
        points: int = DEFAULTS.phase_points,
    ) -> PhaseGridSpec:
        """+/- span sigma on each axis; sigma_y = sqrt((N + 1/2) mu)."""
        sx = s.spread
        sy = math.sqrt((s.order + 0.5) * s.mu)
        return cls(s.m - span * sx, s.m + span * sx, -span * sy, span * sy, points, points)

    def as_dict(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max,
            "y_min": self.y_min, "y_max": self.y_max,
            "nx": self.nx, "ny": self.ny,
        }


@dataclass(frozen=True)
class PhaseFunction:
    spec: PhaseGridSpec
    values: np.ndarray  # shape (nx, ny), values[i, j] = f(x_i, y_j)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.spec.nx, self.spec.ny):
            raise ValidationError(f"phase values have shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("phase values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return trapezoid(trapezoid_rows(self.values, self.spec.hy), self.spec.hx)

    def x_marginal(self) -> np.ndarray:
        return trapezoid_rows(self.values, self.spec.hy)

    def y_marginal(self) -> np.ndarray:
        return trapezoid_rows(self.values.T, self.spec.hx)


def trapezoid_rows(a: np.ndarray, h: float) -> np.ndarray:
    return h * (a.sum(axis=1) - 0.5 * (a[:, 0] + a[:, -1]))


@dataclass(frozen=True)
class RadialRegion:
    """Negative region rho_lo < rho < rho_hi, rho^2 = mu (x-m)^2 + y^2 / mu.

    ``rho_lo == 0`` is a disk, otherwise an annulus.
    """

    rho_lo: float
    rho_hi: float
    sign: Literal["negative"] = "negative"

    def __post_init__(self):
        if not (0.0 <= self.rho_lo < self.rho_hi):
            raise ValidationError(f"need 0 <= rho_lo < rho_hi, got ({self.rho_lo}, {self.rho_hi})")
        if self.sign != "negative":
            raise ValidationError(f"unsupported region sign {self.sign!r}")

    @property
    def is_disk(self) -> bool:
        return self.rho_lo == 0.0

    def as_dict(self) -> dict:
        return {"rho_lo": self.rho_lo, "rho_hi": self.rho_hi, "sign": self.sign,
                "shape": "disk" if self.is_disk else "annulus"}


def laguerre_eval(n: int, u):
    """Laguerre polynomial L_n(u) via (k+1) L_{k+1} = (2k+1-u) L_k - k L_{k-1}."""
    u = np.asarray(u, dtype=float)
    prev = np.ones_like(u)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 - u
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - u) * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def wigner_closed(n: int, mu: float, m: float, x, y):
    """((-1)^n / pi) exp(-rho^2) L_n(2 rho^2) for the pure strategy e_n."""
    if mu <= 0:
        raise ValidationError("mu must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rho2 = mu * (x - m) ** 2 + y * y / mu
    val = (-1) ** n / math.pi * np.exp(-rho2) * laguerre_eval(n, 2.0 * rho2)
    return val if np.ndim(val) else float(val)


def wigner_numeric(s: Strategy, spec: PhaseGridSpec | None = None) -> PhaseFunction:
    """(1/2pi) int psi(x + t/2) psi(x - t/2) cos(t y) dt by the trapezoid rule.

    The lag t runs over [-S, S] with S = 2 (x_max - x_min).  Its step is set so
    that the aliases of the y-spectrum, which sit 2 pi / dt away, land beyond
    the grid edge plus the tail of the phase-space function.
    """
    spec = spec or PhaseGridSpec.for_strategy(s)
    x, y = spec.x, spec.y
    lag_max = 2.0 * (spec.x_max - spec.x_min)
    y_tail = math.sqrt(s.mu) * (math.sqrt(2 * s.order + 1) + 8.0)
    y_reach = max(abs(spec.y_min), abs(spec.y_max)) + y_tail
    half = int(math.ceil(lag_max * y_reach / (2.0 * math.pi)))
    t = np.linspace(-lag_max, lag_max, 2 * half + 1)
    dt = t[1] - t[0]
    w = np.full(t.size, dt)
    w[0] = w[-1] = 0.5 * dt
    rows = strategy_eval(s, x[:, None] + 0.5 * t[None, :]) * strategy_eval(
        s, x[:, None] - 0.5 * t[None, :]
    )
    values = (rows * w) @ np.cos(np.outer(t, y)) / (2.0 * math.pi)
    f = PhaseFunction(spec, values)
    total = f.integral()
    if abs(total - 1.0) > DEFAULTS.pdf_norm_tol:
        raise DomainTooNarrow(f"phase grid captures {total:.6g} of the probability")
    return f


def wigner_closed_grid(n: int, mu: float, m: float, spec: PhaseGridSpec) -> PhaseFunction:
    return PhaseFunction(spec, wigner_closed(n, mu, m, spec.x[:, None], spec.y[None, :]))


def _radial_profile(n: int, rho):
    """Sign-carrying radial factor (-1)^n L_n(2 rho^2)."""
    return (-1) ** n * laguerre_eval(n, 2.0 * np.asarray(rho) ** 2)


def boundary_radii(n: int) -> list[float]:
    """Radii where f_n changes sign, ascending."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    rho_max = math.sqrt(2 * n + 3) + 2.0
    rho = np.linspace(0.0, rho_max, 2000 * (n + 1) + 1)
    prof = _radial_profile(n, rho)
    roots = []
    for i in np.flatnonzero(np.sign(prof[:-1]) * np.sign(prof[1:]) < 0):
        roots.append(
            bisect(lambda r: float(_radial_profile(n, r)), rho[i], rho[i + 1],
                   xtol=DEFAULTS.root_tol, rtol=4 * np.finfo(float).eps)
        )
    return roots


def negative_regions(n: int) -> list[RadialRegion]:
    """Maximal radial intervals on which f_n < 0."""
    roots = boundary_radii(n)
    edges = [0.0] + roots + [math.inf]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi) if math.isfinite(hi) else lo + 1.0
        if _radial_profile(n, mid) < 0:
            out.append(RadialRegion(lo, hi))
    return out


def wigner_marginal_defect(f: PhaseFunction, s: Strategy) -> tuple[float, float]:
    """(max_x |int f dy - psi^2|, max_y |int f dx - |psi_hat|^2|)."""
    px = strategy_eval(s, f.spec.x) ** 2
    py = np.abs(strategy_ft_eval(s, f.spec.y)) ** 2
    return (
        float(np.max(np.abs(f.x_marginal() - px))),
        float(np.max(np.abs(f.y_marginal() - py))),
    )
