"""Minimal-Fisher-information strategies for subjective supply and demand.

Hermite-Gaussian strategy amplitudes, their Fisher information, the
finite-difference eigenproblem they solve, supply/demand Fourier duality,
Wigner phase-space functions with their negative (Giffen) regions, CDF curves
and transaction-data fitting.
"""

__version__ = "0.1.0"

from .curves import (
    Curve,
    GiffenReport,
    cdf_demand,
    cdf_supply,
    conditional_demand_curve,
    conditional_supply_curve,
    monotonicity_report,
)
from .duality import (
    DualGridFunction,
    fisher_ft_invariance,
    fourier_transform_grid,
    ft_eigen_defect,
    uncertainty_product,
)
from .eigen import (
    EigenSolution,
    TridiagonalOperator,
    build_hamiltonian,
    el_residual,
    lowest_eigenpairs,
    perturbation_check,
)
from .estimation import (
    MomentEstimate,
    TransactionSample,
    cramer_rao_monte_carlo,
    estimate_moments,
    fit_minimal_strategy,
    parse_transactions,
    sample_strategy,
)
from .fisher import (
    FisherReport,
    cramer_rao_product,
    fisher_information_closed,
    fisher_information_grid,
    surprisal_derivative,
)
from .grid import GridFunction, GridSpec
from .strategy import (
    Moments,
    Strategy,
    hermite_eval,
    mixture_entropy,
    project_onto_basis,
    psi_pure_eval,
    strategy_eval,
    strategy_moments,
    strategy_pdf,
)
from .wigner import (
    PhaseFunction,
    PhaseGridSpec,
    RadialRegion,
    negative_regions,
    wigner_closed,
    wigner_marginal_defect,
    wigner_numeric,
)
