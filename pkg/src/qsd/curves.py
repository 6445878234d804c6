"""Supply and demand curves as cumulative distributions, and Giffen detection.

Unconditional curves come from a log-price density:
    supply(x) = int_{-inf}^{x} f_1,   demand(x) = int_{x}^{inf} f_2.
Conditional curves integrate one slice of a phase-space function.  The
conditional supply curve integrates in x up to ln(1/c) = -ln c, so it is
reported against ln c = -(upper limit) and, for a positive slice, falls as
ln c grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .config import DEFAULTS
from .errors import SliceDegenerate, ValidationError
from .fisher import check_density
from .grid import GridFunction
from .wigner import PhaseFunction, RadialRegion

CurveKind = Literal["supply", "demand", "conditional_supply", "conditional_demand"]

# direction a well-behaved curve of each kind moves along increasing abscissa
DIRECTION = {
    "supply": +1,
    "demand": -1,
    "conditional_demand": +1,
    "conditional_supply": -1,
}


@dataclass(frozen=True)
class Curve:
    abscissa: np.ndarray  # ln c
    ordinate: np.ndarray
    kind: CurveKind

    def __post_init__(self):
        a = np.asarray(self.abscissa, dtype=float)
        o = np.asarray(self.ordinate, dtype=float)
        if self.kind not in DIRECTION:
            raise ValidationError(f"unknown curve kind {self.kind!r}")
        if a.shape != o.shape or a.ndim != 1:
            raise ValidationError("abscissa and ordinate must be 1-D and equally long")
        if a.size and np.any(np.diff(a) <= 0):
            raise ValidationError("abscissa must be strictly increasing")
        if not np.all(np.isfinite(o)):
            raise ValidationError("ordinates must be finite")
        if self.kind in ("supply", "demand") and o.size:
            if o.min() < -1e-12 or o.max() > 1 + 1e-12:
                raise ValidationError("CDF ordinates must lie in [0, 1]")
        object.__setattr__(self, "abscissa", a)
        object.__setattr__(self, "ordinate", o)

    def __len__(self) -> int:
        return self.abscissa.size

    @property
    def direction(self) -> int:
        return DIRECTION[self.kind]

    def at(self, lnc) -> np.ndarray:
        return np.interp(lnc, self.abscissa, self.ordinate)


@dataclass(frozen=True)
class GiffenReport:
    monotone: bool
    violations: list[tuple[float, float]] = field(default_factory=list)
    max_dip: float = 0.0

    def as_dict(self) -> dict:
        return {
            "monotone": self.monotone,
            "violations": [list(v) for v in self.violations],
            "max_dip": self.max_dip,
        }


def _cumulative(values: np.ndarray, h: float) -> np.ndarray:
    return cumulative_trapezoid(values, dx=h, initial=0.0)


def cdf_supply(f: GridFunction) -> Curve:
    mass = check_density(f)
    cum = _cumulative(f.values, f.spec.h) / mass
    return Curve(f.nodes, np.clip(cum, 0.0, 1.0), "supply")


def cdf_demand(f: GridFunction) -> Curve:
    mass = check_density(f)
    tail = _cumulative(f.values[::-1], f.spec.h)[::-1] / mass
    return Curve(f.nodes, np.clip(tail, 0.0, 1.0), "demand")


def supply_demand_pair(f_supply: GridFunction, f_demand: GridFunction | None = None) -> tuple[Curve, Curve]:
    """Both curves; the demand density defaults to the supply density."""
    return cdf_supply(f_supply), cdf_demand(f_demand if f_demand is not None else f_supply)


def _slice(values: np.ndarray, axis_nodes: np.ndarray, at: float) -> np.ndarray:
    """Row of ``values`` at coordinate ``at`` along axis 0, linearly interpolated."""
    if not axis_nodes[0] <= at <= axis_nodes[-1]:
        raise ValidationError(f"slice coordinate {at} outside [{axis_nodes[0]}, {axis_nodes[-1]}]")
    j = int(np.clip(np.searchsorted(axis_nodes, at) - 1, 0, axis_nodes.size - 2))
    t = (at - axis_nodes[j]) / (axis_nodes[j + 1] - axis_nodes[j])
    return (1.0 - t) * values[j] + t * values[j + 1]


def _normalized_cumulative(row: np.ndarray, h: float) -> np.ndarray:
    cum = _cumulative(row, h)
    total = cum[-1]
    if abs(total) < DEFAULTS.slice_floor:
        raise SliceDegenerate(f"slice integral {total:.3g} is too small to normalize")
    return cum / total


def conditional_demand_curve(f: PhaseFunction, x_fixed: float) -> Curve:
    """CDF in y of the slice f(x_fixed, .), normalized by the slice integral."""
    row = _slice(f.values, f.spec.x, x_fixed)
    return Curve(f.spec.y, _normalized_cumulative(row, f.spec.hy), "conditional_demand")


def conditional_supply_curve(f: PhaseFunction, y_fixed: float) -> Curve:
    """CDF in x of the slice f(., y_fixed) up to ln(1/c), plotted against ln c."""
    col = _slice(f.values.T, f.spec.y, y_fixed)
    cum = _normalized_cumulative(col, f.spec.hx)
    return Curve(-f.spec.x[::-1], cum[::-1], "conditional_supply")


def monotonicity_report(c: Curve, threshold: float = DEFAULTS.giffen_threshold) -> GiffenReport:
    """Flag every step that moves against the curve's expected direction."""
    if len(c) < 2:
        return GiffenReport(True, [], 0.0)
    against = -c.direction * np.diff(c.ordinate)
    bad = np.flatnonzero(against > threshold)
    intervals: list[tuple[float, float]] = []
    for i in bad:
        lo, hi = float(c.abscissa[i]), float(c.abscissa[i + 1])
        if intervals and intervals[-1][1] == lo:
            intervals[-1] = (intervals[-1][0], hi)
        else:
            intervals.append((lo, hi))
    return GiffenReport(not intervals, intervals, float(max(against.max(), 0.0)))


def region_intervals_on_slice(
    regions: list[RadialRegion], mu: float, m: float, *, x_fixed: float | None = None, y_fixed: float | None = None
) -> list[tuple[float, float]]:
    """Project negative regions onto a slice line, in that curve's abscissa.

    A vertical slice (``x_fixed``) is parametrized by y; a horizontal slice
    (``y_fixed``) by ln c = -x.
    """
    if (x_fixed is None) == (y_fixed is None):
        raise ValidationError("give exactly one of x_fixed, y_fixed")
    if x_fixed is not None:
        offset, to_coord = mu * (x_fixed - m) ** 2, lambda r2: math.sqrt(mu * r2)
    else:
        offset, to_coord = y_fixed**2 / mu, lambda r2: math.sqrt(r2 / mu)
    out = []
    for reg in regions:
        hi2 = reg.rho_hi**2 - offset
        if hi2 <= 0:
            continue
        lo2 = reg.rho_lo**2 - offset
        outer = to_coord(hi2)
        if lo2 <= 0:
            segs = [(-outer, outer)]
        else:
            inner = to_coord(lo2)
            segs = [(-outer, -inner), (inner, outer)]
        for a, b in segs:
            if x_fixed is not None:
                out.append((a, b))
            else:
                # coordinate along the slice is x = m + s; abscissa is -x
                out.append((-(m + b), -(m + a)))
    return sorted(out)


def intervals_intersect(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]
