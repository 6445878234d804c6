"""Numerical defaults shared by the library and echoed into every CLI manifest."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Defaults:
    grid_points: int = 1024
    grid_span_sigmas: float = 8.0
    # Hermite functions: closed formula up to here, normalized recurrence above
    hermite_direct_max: int = 30
    # coefficient vectors within this of unit norm are rescaled, beyond rejected
    coeff_rescale_tol: float = 1e-6
    pdf_norm_tol: float = 1e-4
    fisher_integrand_floor: float = 1e-14
    surprisal_support_floor: float = 1e-12
    eigen_rel_tol: float = 1e-10
    eigen_max_bisections: int = 200
    inverse_iterations: int = 4
    # self-dual FFT grid used for duality checks
    dual_points: int = 16384
    phase_points: int = 256
    phase_span_sigmas: float = 6.0
    root_tol: float = 1e-10
    giffen_threshold: float = 1e-9
    slice_floor: float = 1e-12
    perturbation_modes: int = 12
    perturbation_delta: float = 1e-2
    stationarity_factor: float = 100.0

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULTS = Defaults()
