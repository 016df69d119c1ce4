"""Guard-channel cell with a finite retrial orbit: stationary analysis and capacity planning."""

from .errors import (
    CapacityError,
    ConfigurationError,
    DomainError,
    RetrialCapError,
    SolverError,
    StructuralError,
)
from .generator import SparseGenerator, build_generator, check_structure, extract_level_blocks
from .measures import PerformanceMeasures, evaluate, measures_from
from .model import DEFAULT_RATES, ModelParams, State, StateSpace, enumerate_transitions
from .optimize import (
    OptimizationResult,
    QosTargets,
    solve_o1_algI,
    solve_o1_algII,
    solve_o2_algIII,
    solve_o3,
    solve_o4_algV,
)
from .solver import Method, StationaryDistribution, solve_stationary

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigurationError",
    "DEFAULT_RATES",
    "DomainError",
    "Method",
    "ModelParams",
    "OptimizationResult",
    "PerformanceMeasures",
    "QosTargets",
    "RetrialCapError",
    "SolverError",
    "SparseGenerator",
    "State",
    "StateSpace",
    "StationaryDistribution",
    "StructuralError",
    "build_generator",
    "check_structure",
    "enumerate_transitions",
    "evaluate",
    "extract_level_blocks",
    "measures_from",
    "solve_o1_algI",
    "solve_o1_algII",
    "solve_o2_algIII",
    "solve_o3",
    "solve_o4_algV",
    "solve_stationary",
]
