"""Supply/demand Fourier duality.

Convention: psi_hat(y) = (2 pi)^(-1/2) * integral psi(x) exp(-i x y) dx, the
unitary angular transform, under which the mu = 1 Hermite functions are
eigenfunctions with eigenvalue (-i)^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .errors import LeakyDomain
from .fisher import fisher_information_grid
from .grid import GridFunction, GridSpec
from .strategy import Strategy, hermite_functions, psi_pure_eval, strategy_eval

CONVENTION = "unitary angular: (2*pi)^(-1/2) * int psi(x) exp(-i x y) dx"


@dataclass(frozen=True)
class DualGridFunction:
    spec: GridSpec
    values_re: np.ndarray
    values_im: np.ndarray
    interpolated: bool = False

    @property
    def nodes(self) -> np.ndarray:
        return self.spec.nodes

    @property
    def values(self) -> np.ndarray:
        return self.values_re + 1j * self.values_im

    @property
    def modulus(self) -> np.ndarray:
        return np.hypot(self.values_re, self.values_im)

    def density(self) -> GridFunction:
        return GridFunction(self.spec, self.values_re**2 + self.values_im**2)

    def at(self, y) -> np.ndarray:
        """Linear interpolation onto arbitrary y (returns complex samples)."""
        nodes = self.nodes
        return np.interp(y, nodes, self.values_re, 0.0, 0.0) + 1j * np.interp(
            y, nodes, self.values_im, 0.0, 0.0
        )


def dual_spec(spec: GridSpec) -> GridSpec:
    """DFT-conjugate grid: spacing 2 pi / (N h), nodes spanning [-pi/h, pi/h)."""
    n, h = spec.points, spec.h
    dy = 2.0 * math.pi / (n * h)
    y0 = -(n // 2) * dy
    return GridSpec(y0, y0 + (n - 1) * dy, n)


def fourier_transform_values(values: np.ndarray, spec: GridSpec, decay_tol: float = 1e-10) -> DualGridFunction:
    """Continuum-scaled DFT of (possibly complex) samples on ``spec``."""
    v = np.asarray(values)
    peak = float(np.max(np.abs(v)))
    if peak > 0 and max(abs(v[0]), abs(v[-1])) > decay_tol * max(peak, 1.0):
        raise LeakyDomain(
            f"samples do not decay at the boundary ({max(abs(v[0]), abs(v[-1])):.3g})"
        )
    h = spec.h
    out = dual_spec(spec)
    y = out.nodes
    # x_k = x_min + k h, y_j = j dy with j in [-N/2, N/2)
    spectrum = np.fft.fftshift(np.fft.fft(v))
    psi_hat = h / math.sqrt(2.0 * math.pi) * np.exp(-1j * spec.x_min * y) * spectrum
    return DualGridFunction(out, psi_hat.real.copy(), psi_hat.imag.copy())


def fourier_transform_grid(f: GridFunction) -> DualGridFunction:
    return fourier_transform_values(f.values, f.spec)


def strategy_ft_eval(s: Strategy, y) -> np.ndarray:
    """Analytic transform of a strategy amplitude.

    FT psi_k(x; mu, m) = exp(-i m y) (-i)^k mu^(-1/4) phi_k(y / sqrt(mu)).
    """
    y = np.asarray(y, dtype=float)
    phi = hermite_functions(s.order, y / math.sqrt(s.mu))
    phase = (-1j) ** np.arange(s.order + 1)
    total = np.tensordot(np.asarray(s.coeffs) * phase, phi, axes=1)
    return np.exp(-1j * s.m * y) * s.mu**-0.25 * total


def self_dual_grid(mu: float = 1.0, m: float = 0.0, points: int = DEFAULTS.dual_points) -> GridSpec:
    """Grid centred on m with h = sqrt(2 pi / (N mu)).

    The conjugate grid then has spacing mu * h, so the x and y sides of a
    scale-mu strategy are resolved equally well.
    """
    h = math.sqrt(2.0 * math.pi / (points * mu))
    return GridSpec.centered(m, 0.5 * (points - 1) * h, points)


def ft_eigen_defect(n: int, grid: GridSpec | None = None) -> float:
    """max_j | |psi_hat_n(y_j)| - |psi_n(y_j)| | with mu = 1, m = 0."""
    grid = grid or self_dual_grid()
    samples = psi_pure_eval(n, 1.0, 0.0, grid.nodes)
    dual = fourier_transform_values(samples, grid)
    return float(np.max(np.abs(dual.modulus - np.abs(psi_pure_eval(n, 1.0, 0.0, dual.nodes)))))


def _std(values: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    mass = weights.sum()
    mean = (values * weights).sum() / mass
    return float(mean), float(math.sqrt(((values - mean) ** 2 * weights).sum() / mass))


def uncertainty_product(s: Strategy, points: int = DEFAULTS.dual_points) -> float:
    """Delta x * Delta y; equals n + 1/2 for a pure e_n in this convention."""
    grid = self_dual_grid(s.mu, s.m, points)
    psi = strategy_eval(s, grid.nodes)
    dual = fourier_transform_values(psi, grid)
    _, dx = _std(grid.nodes, psi**2)
    _, dy = _std(dual.nodes, dual.modulus**2)
    return dx * dy


def fisher_ft_invariance(n: int, points: int = DEFAULTS.dual_points) -> tuple[float, float]:
    """(I_F of psi_n^2, I_F of |psi_hat_n|^2) at mu = 1, m = 0."""
    grid = self_dual_grid(1.0, 0.0, points)
    psi = psi_pure_eval(n, 1.0, 0.0, grid.nodes)
    dual = fourier_transform_values(psi, grid)
    supply = fisher_information_grid(GridFunction(grid, psi**2)).value
    demand = fisher_information_grid(dual.density()).value
    return supply, demand
