"""Model of the 10-mode programmable chip."""

from .calibration import (
    CalibrationResult,
    SimulatedChip,
    calibrate_chip,
    calibrate_meta_mzi,
    fit_sinusoid,
    simulate_internal_sweep,
)
from .circuit import (
    DEFAULT_ANGLES,
    DEFAULT_QUDIT,
    QuditSpec,
    amplitudes_from_angles,
    build_overlap_circuit,
    qudit_overlap,
)
from .crosstalk import CrosstalkModel, apply_crosstalk, neighbor_order

__all__ = [
    "CalibrationResult",
    "CrosstalkModel",
    "DEFAULT_ANGLES",
    "DEFAULT_QUDIT",
    "QuditSpec",
    "SimulatedChip",
    "amplitudes_from_angles",
    "apply_crosstalk",
    "build_overlap_circuit",
    "calibrate_chip",
    "calibrate_meta_mzi",
    "fit_sinusoid",
    "neighbor_order",
    "qudit_overlap",
    "simulate_internal_sweep",
]
