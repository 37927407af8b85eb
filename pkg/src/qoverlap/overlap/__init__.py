"""Overlap estimators, simulated experiments and sample-complexity calculators."""

from .estimators import (
    DEFAULT_DELTA,
    OverlapEstimate,
    ParityTally,
    bunching_probability,
    coincidence_estimator,
    exact_overlap,
    helstrom_lower_bound,
    hoeffding_radius,
    hoeffding_samples,
    parity_estimator,
)
from .experiment import (
    circuit_fidelity,
    circuit_unitary,
    coincidence_distribution,
    output_fidelity,
    parity_shots,
    pnrd_overlap,
    sample_coincidences,
    simulate_overlap_experiment,
    two_photon_distribution,
)

__all__ = [
    "DEFAULT_DELTA",
    "OverlapEstimate",
    "ParityTally",
    "bunching_probability",
    "circuit_fidelity",
    "circuit_unitary",
    "coincidence_distribution",
    "coincidence_estimator",
    "exact_overlap",
    "helstrom_lower_bound",
    "hoeffding_radius",
    "hoeffding_samples",
    "output_fidelity",
    "parity_estimator",
    "parity_shots",
    "pnrd_overlap",
    "sample_coincidences",
    "simulate_overlap_experiment",
    "two_photon_distribution",
]
