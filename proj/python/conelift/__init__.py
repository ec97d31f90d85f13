"""Cone-valued right inverses, openness and conormality constants."""

from ._core import (
    Cone,
    ConeMap,
    DimensionError,
    DomainError,
    GaugeNorm,
    InfeasibleError,
    NotGeneratingError,
    OrderedSpace,
    RightInverse,
    SolverError,
    achievable_alpha,
    ando_decompose,
    conormality_constant,
    conormality_value,
    interior_radius,
    is_surjective,
    lift,
    min_preimage,
    openness_constant,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
