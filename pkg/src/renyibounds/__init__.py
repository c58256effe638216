"""Bounds on the entanglement Renyi-alpha entropy from concurrence."""
from .concurrence import ConcurrenceBracket, concurrence_bracket, concurrence_pure, max_concurrence
from .curves import StationaryPattern, curve_values, extremal_curve
from .hulls import BoundsReport, HullCache, HullFunction, bounds_from_concurrence, build_hull, evaluate_bounds
from .qstate import (
    DensityMatrix,
    NumericalError,
    PureState,
    SchmidtVector,
    StateError,
    Tolerances,
    load_state,
    renyi_entropy,
    save_state,
    schmidt_vector,
    validate_density,
)
from .states import convex_roof_upper_estimate, example2_state, random_density, random_pure, werner

__version__ = "0.1.0"

__all__ = [
    "BoundsReport", "ConcurrenceBracket", "DensityMatrix", "HullCache", "HullFunction",
    "NumericalError", "PureState", "SchmidtVector", "StateError", "StationaryPattern",
    "Tolerances", "bounds_from_concurrence", "build_hull", "concurrence_bracket",
    "concurrence_pure", "convex_roof_upper_estimate", "curve_values", "evaluate_bounds",
    "example2_state", "extremal_curve", "load_state", "max_concurrence", "random_density",
    "random_pure", "renyi_entropy", "save_state", "schmidt_vector", "validate_density", "werner",
]
