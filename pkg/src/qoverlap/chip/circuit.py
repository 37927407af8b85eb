"""Two-qudit overlap circuit on the 10-mode mesh.

Two photons enter modes 4 and 5. Columns 0-4 route them straight through
(bar state). Columns 5-8 fan each photon out into a four-mode qudit: the
theta photon ends on modes 1, 3, 5, 7 and the phi photon on modes 2, 4, 6, 8.
Column 9 interferes mode pairs (1,2), (3,4), (5,6), (7,8) on balanced
splitters, after which the parity of the coincidence encodes the overlap.

Relative phases are referenced to mode 5 (theta qudit) and mode 4 (phi
qudit), so the reference MZI (4,8) stays at low power. Six MZI phases carry
the encoding: (0,8), (2,8), (1,7), (6,8), (8,8), (7,7).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ConfigurationError, ParameterError
from ..optics.mesh import MeshSettings, compose_mesh, mzi_addresses

DEFAULT_ANGLES = (0.86231713, 1.34230503, 1.66199945)
INPUT_MODES = (4, 5)
THETA_MODES = (1, 3, 5, 7)
PHI_MODES = (2, 4, 6, 8)
DETECTED_MODES = tuple(range(1, 9))
BAR = np.pi / 2
BALANCED = np.pi / 4

ROUTE_BAR = ((4, 0), (3, 1), (5, 1), (4, 2), (3, 3), (5, 3), (4, 4))
ROUTE_CROSS = ((2, 6), (4, 6), (6, 6), (2, 8), (6, 8))
ROUTE_BAR_LATE = ((0, 8), (4, 8), (8, 8))
OUTPUT_SPLITTERS = ((1, 9), (3, 9), (5, 9), (7, 9))
ENCODING_MZIS = ((0, 8), (2, 8), (1, 7), (6, 8), (8, 8), (7, 7))


@dataclass(frozen=True)
class QuditSpec:
    """Real, non-negative, normalised amplitudes ``A0..A3`` of a phase qudit."""

    amplitudes: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.amplitudes)
        if len(a) != 4:
            raise ConfigurationError("a qudit needs exactly four amplitudes")
        if min(a) < 0:
            raise ParameterError("amplitudes must be non-negative")
        if abs(sum(x * x for x in a) - 1.0) > 1e-12:
            raise ParameterError("amplitudes must satisfy sum A_i^2 = 1")
        object.__setattr__(self, "amplitudes", a)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def state(self, phases):
        """Single-photon amplitudes ``A_k exp(i Theta_k)`` with cumulative phases."""
        return qudit_vector(self.amplitudes, phases)


def amplitudes_from_angles(phi1, phi2, phi3):
    """Hyperspherical parametrisation of four non-negative amplitudes."""
    for v in (phi1, phi2, phi3):
        if not 0 < v < np.pi + 1e-12:
            raise ParameterError(f"angle {v} outside (0, pi)")
    c1, c2 = np.cos(phi1 / 2), np.cos(phi2 / 2)
    a = (np.sin(phi1 / 2), c1 * np.sin(phi2 / 2), c1 * c2 * np.sin(phi3 / 2), c1 * c2 * np.cos(phi3 / 2))
    a = np.clip(a, 0.0, None)
    return QuditSpec(tuple(a / np.linalg.norm(a)))


DEFAULT_QUDIT = amplitudes_from_angles(*DEFAULT_ANGLES)


def cumulative_phases(phases):
    """``(0, t1, t1+t2, t1+t2+t3)`` for a 3-vector of encoding phases."""
    p = np.asarray(phases, dtype=float)
    if p.shape != (3,):
        raise ConfigurationError("encoding phases must be a 3-vector")
    return np.concatenate([[0.0], np.cumsum(p)])


def qudit_vector(amplitudes, phases):
    return np.asarray(amplitudes, dtype=float) * np.exp(1j * cumulative_phases(phases))


def qudit_overlap(theta, phi, amplitudes=DEFAULT_QUDIT):
    """Exact ``|<psi(theta)|psi(phi)>|^2`` of two phase qudits."""
    a = np.asarray(amplitudes, dtype=float)
    return float(abs(np.vdot(qudit_vector(a, theta), qudit_vector(a, phi))) ** 2)


def _split(top, bottom):
    # internal phase giving |sin d| : |cos d| = top : bottom
    return float(np.arctan2(top, bottom))


def _skeleton(amplitudes):
    a0, a1, a2, a3 = amplitudes
    head = np.hypot(a0, a1)
    tail = np.hypot(a2, a3)
    s = {addr: (0.0, 0.0) for addr in mzi_addresses()}
    for addr in ROUTE_BAR + ROUTE_BAR_LATE:
        s[addr] = (0.0, BAR)
    for addr in ROUTE_CROSS:
        s[addr] = (0.0, 0.0)
    # theta photon enters the lower port of (3,5); phi the upper port of (5,5)
    s[(3, 5)] = (0.0, _split(tail, head))
    s[(5, 5)] = (0.0, _split(head, tail))
    s[(1, 7)] = (0.0, _split(a1, a0))
    s[(3, 7)] = (0.0, _split(a1, a0))
    s[(5, 7)] = (0.0, _split(a2, a3))
    s[(7, 7)] = (0.0, _split(a2, a3))
    for addr in OUTPUT_SPLITTERS:
        s[addr] = (0.0, BALANCED)
    return s


@lru_cache(maxsize=32)
def _offsets(amplitudes):
    """Relative output phases with every encoding MZI at zero."""
    u = compose_mesh(MeshSettings(_skeleton(amplitudes)), columns=range(9))
    t = np.angle(u[list(THETA_MODES), INPUT_MODES[0]])
    p = np.angle(u[list(PHI_MODES), INPUT_MODES[1]])
    # theta: modes 1,3,7 relative to mode 5; phi: modes 2,6,8 relative to mode 4
    return t[0] - t[2], t[1] - t[2], t[3] - t[2], p[0] - p[1], p[2] - p[1], p[3] - p[1]


def build_overlap_circuit(theta, phi, amplitudes=DEFAULT_QUDIT):
    """Mesh settings that encode ``|psi(theta)>`` and ``|psi(phi)>`` and interfere them.

    Parameters
    ----------
    theta, phi : array_like, shape (3,)
        Encoding phases of the two qudits.
    amplitudes : QuditSpec or array_like
        Shared amplitude profile ``A0..A3``.

    Returns
    -------
    MeshSettings
        All 45 MZIs. MZIs off the photon route are left undriven
        (``sigma = delta = 0``).
    """
    amps = tuple(float(x) for x in np.asarray(amplitudes, dtype=float))
    QuditSpec(amps)
    t1, t2, t3 = (float(x) for x in np.asarray(theta, dtype=float))
    p1, p2, p3 = (float(x) for x in np.asarray(phi, dtype=float))
    if not np.all(np.isfinite([t1, t2, t3, p1, p2, p3])):
        raise ParameterError("encoding phases must be finite")
    c1, c3, c7, d2, d6, d8 = _offsets(amps)
    # each MZI adds its sigma to both outputs, so solve along the routes
    s68 = t3 - c7
    s28 = -p1 - d2
    s17 = -t2 - c3 - s28
    s08 = -(t1 + t2) - c1 - s17
    s77 = p2 - d6 - s68
    s88 = p2 + p3 - d8 - s77
    s = _skeleton(amps)
    for addr, sigma in zip(ENCODING_MZIS, (s08, s28, s17, s68, s88, s77)):
        s[addr] = (sigma, s[addr][1])
    return MeshSettings(s)


def detection_pairs():
    """Distinct-mode detector pairs ``(k, l)``, ``k < l``, over modes 1..8."""
    return [(k, l) for k in DETECTED_MODES for l in DETECTED_MODES if k < l]


def is_odd_pair(k, l):
    """Cross-register coincidence: one photon in each of {1,3,5,7} and {2,4,6,8}."""
    return (k + l) % 2 == 1
