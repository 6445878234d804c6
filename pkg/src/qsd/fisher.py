"""Fisher information, surprisal gradient and the Cramer-Rao uncertainty product."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .config import DEFAULTS
from .errors import NotADensity, NotPure
from .grid import GridFunction, GridSpec, derivative, trapezoid
from .strategy import Strategy, density_moments


@dataclass(frozen=True)
class FisherReport:
    value: float
    method: Literal["closed_form", "quadrature"]
    grid: GridSpec | None = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("Fisher information cannot be negative")

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "grid": self.grid.as_dict() if self.grid else None,
        }


def check_density(f: GridFunction, tol: float = DEFAULTS.pdf_norm_tol) -> float:
    """Return the trapezoid mass of ``f`` or raise NotADensity."""
    v = f.values
    scale = max(float(np.max(np.abs(v))), 1e-300)
    if np.min(v) < -1e-12 * scale:
        raise NotADensity(f"density takes negative value {np.min(v):.3g}")
    mass = f.integral()
    if abs(mass - 1.0) > tol:
        raise NotADensity(f"density integrates to {mass:.8g}")
    return mass


def signed_amplitude(density: np.ndarray, floor: float = DEFAULTS.fisher_integrand_floor) -> np.ndarray:
    """Recover a smooth real amplitude psi from samples of f = psi**2.

    sqrt(f) equals |psi| and has a kink wherever psi crosses zero.  At every
    interior local minimum of sqrt(f) we pick whichever of {no flip, flip
    before the node, flip after the node} gives the smoothest local second
    differences; a genuine positive minimum keeps its sign, a simple zero of
    psi gets the sign change back.
    """
    a = np.sqrt(np.clip(np.asarray(density, dtype=float), 0.0, None))
    n = a.size
    sign = np.ones(n)
    # strict on the left so a two-node plateau (zero midway between nodes)
    # is handled once
    idx = np.flatnonzero((a[1:-1] < a[:-2]) & (a[1:-1] <= a[2:])) + 1
    for i in idx:
        if max(a[i - 1], a[i + 1]) ** 2 < floor:
            continue
        lo, hi = max(i - 2, 0), min(i + 3, n)
        w = a[lo:hi]
        best, best_cut = None, None
        for cut in (None, i, i + 1):
            s = w.copy()
            if cut is not None:
                s[cut - lo:] *= -1.0
            rough = np.abs(np.diff(s, 2)).sum()
            if best is None or rough < best - 1e-15 * w.max():
                best, best_cut = rough, cut
        if best_cut is not None and best_cut < n:
            sign[best_cut:] *= -1.0
    return sign * a


def fisher_information_grid(f: GridFunction) -> FisherReport:
    """I_F = 4 * integral (d psi/dx)^2 with psi the real amplitude of ``f``."""
    check_density(f)
    h = f.spec.h
    psi = signed_amplitude(f.values)
    dpsi = derivative(psi, h)
    integrand = 4.0 * dpsi**2
    # the floor trims tails; an isolated node sitting on a zero of psi keeps
    # its (finite, often maximal) contribution
    v = f.values
    local = np.maximum(v, np.maximum(np.roll(v, 1), np.roll(v, -1)))
    local[0], local[-1] = max(v[0], v[1]), max(v[-1], v[-2])
    integrand[local < DEFAULTS.fisher_integrand_floor] = 0.0
    return FisherReport(trapezoid(integrand, h), "quadrature", f.spec)


def fisher_information_closed(s: Strategy) -> FisherReport:
    n = s.pure_index
    if n is None:
        raise NotPure("closed-form Fisher information needs a pure strategy e_n")
    return FisherReport(4.0 * s.mu * (n + 0.5), "closed_form", None)


@dataclass(frozen=True)
class SurprisalGradient:
    """dS/dx = -f'/f on a grid; ``support`` marks the nodes where it is defined."""

    spec: GridSpec
    values: np.ndarray
    support: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return self.spec.nodes

    def as_grid_function(self) -> GridFunction:
        """Zero-filled outside the support."""
        return GridFunction(self.spec, np.where(self.support, self.values, 0.0))


def surprisal_derivative(f: GridFunction) -> SurprisalGradient:
    check_density(f)
    v = f.values
    support = v >= DEFAULTS.surprisal_support_floor
    if not support.any():
        raise NotADensity("density never exceeds the support floor")
    fp = derivative(v, f.spec.h)
    out = np.zeros_like(v)
    out[support] = -fp[support] / v[support]
    return SurprisalGradient(f.spec, out, support)


def cramer_rao_product(f: GridFunction) -> float:
    """std(dS/dx) * std(x) under f; bounded below by 1."""
    g = surprisal_derivative(f)
    h = f.spec.h
    w = np.where(g.support, f.values, 0.0)
    mass = trapezoid(w, h)
    mean_g = trapezoid(w * g.values, h) / mass
    var_g = trapezoid(w * (g.values - mean_g) ** 2, h) / mass
    return math.sqrt(var_g) * math.sqrt(density_moments(f).risk)
