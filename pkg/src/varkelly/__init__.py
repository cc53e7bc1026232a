"""Growth-optimal bet sizing when the win payoff is random.

The classical fixed-payoff betting fraction generalizes to games where
the payoff b is drawn from a distribution: the optimum solves
p * E[b / (1 + b f)] = (1 - p) / (1 - f) and is never larger than the
fixed-payoff fraction computed at the mean payoff. This package provides
the distribution types, the solver, a Monte Carlo cross-check, trade-log
ingestion, and a CLI (``varkelly``).
"""

from .distributions import (
    Atoms,
    Dirac,
    Histogram,
    Mixture,
    Pareto,
    PayoffDistribution,
    Uniform,
    ValidationReport,
    from_spec,
    mixture_linearity_check,
)
from .errors import (
    ConsistencyError,
    DegenerateSampleError,
    EmptyFileError,
    InfiniteMeanError,
    InfiniteMeanFitError,
    InsufficientTailError,
    NonConvergenceError,
    NotFavorableError,
    TradeParseError,
    VarKellyError,
)
from .ingest import (
    EmpiricalSummary,
    TradeRecord,
    build_empirical,
    fit_pareto_tail,
    load_trades,
)
from .kelly import (
    EdgeReport,
    GameSpec,
    GrowthCurve,
    JensenComparison,
    KellySolution,
    classical_fraction,
    edge,
    growth_curve,
    growth_derivative,
    growth_rate,
    jensen_compare,
    solve_kelly,
)
from .montecarlo import GridScan, SimConfig, SimResult, grid_argmax, grid_scan, simulate
from .quadrature import integrate

__version__ = "0.1.0"

__all__ = [
    "Atoms",
    "ConsistencyError",
    "DegenerateSampleError",
    "Dirac",
    "EdgeReport",
    "EmptyFileError",
    "EmpiricalSummary",
    "GameSpec",
    "GridScan",
    "GrowthCurve",
    "Histogram",
    "InfiniteMeanError",
    "InfiniteMeanFitError",
    "InsufficientTailError",
    "JensenComparison",
    "KellySolution",
    "Mixture",
    "NonConvergenceError",
    "NotFavorableError",
    "Pareto",
    "PayoffDistribution",
    "SimConfig",
    "SimResult",
    "TradeParseError",
    "TradeRecord",
    "Uniform",
    "ValidationReport",
    "VarKellyError",
    "build_empirical",
    "classical_fraction",
    "edge",
    "fit_pareto_tail",
    "from_spec",
    "grid_argmax",
    "grid_scan",
    "growth_curve",
    "growth_derivative",
    "growth_rate",
    "integrate",
    "jensen_compare",
    "load_trades",
    "mixture_linearity_check",
    "simulate",
    "solve_kelly",
]
