"""Linear-optics core: transfer matrices, mesh composition, permanents, Fock evolution."""

from .fock import PhotonicState, brute_force_evolve, evolve_fock, fock_basis
from .mesh import (
    MeshSettings,
    compose_from_phases,
    compose_mesh,
    mzi_addresses,
    uniform_settings,
)
from .permanent import permanent, permanent_naive
from .transfer import arm_phases, check_unitary, dc_transfer, ideal_mzi, mzi_transfer

__all__ = [
    "MeshSettings",
    "PhotonicState",
    "arm_phases",
    "brute_force_evolve",
    "check_unitary",
    "compose_from_phases",
    "compose_mesh",
    "dc_transfer",
    "evolve_fock",
    "fock_basis",
    "ideal_mzi",
    "mzi_addresses",
    "mzi_transfer",
    "permanent",
    "permanent_naive",
    "uniform_settings",
]
