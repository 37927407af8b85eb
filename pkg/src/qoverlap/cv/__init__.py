"""Continuous-variable characteristic functions and phase-space overlap estimation."""

from .montecarlo import (
    DistributedPlan,
    HypersphereSpec,
    MonteCarloResult,
    distributed_plan,
    energy_diagnostic,
    hypersphere_volume,
    log_hypersphere_volume,
    mc_overlap,
    sample_hypersphere,
)
from .oracle import displacement_matrix
from .states import (
    CvState,
    Coherent,
    EvenCat,
    FockNumber,
    SqueezedVacuum,
    char_fn,
    is_self_reflective,
    state_from_descriptor,
)

__all__ = [
    "Coherent",
    "CvState",
    "DistributedPlan",
    "EvenCat",
    "FockNumber",
    "HypersphereSpec",
    "MonteCarloResult",
    "SqueezedVacuum",
    "char_fn",
    "displacement_matrix",
    "distributed_plan",
    "energy_diagnostic",
    "hypersphere_volume",
    "is_self_reflective",
    "log_hypersphere_volume",
    "mc_overlap",
    "sample_hypersphere",
    "state_from_descriptor",
]
