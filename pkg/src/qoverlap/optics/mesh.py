"""Bell-scheme mesh layout, MZI settings and mesh composition.

The chip has 10 waveguide modes and 10 MZI columns. MZI ``(i, j)`` exists
when ``i + j`` is even and ``i <= 8``; it couples modes ``i`` and ``i + 1``.
Its upper arm is phaseshifter ``(i, j)`` and its lower arm is phaseshifter
``(i + 1, j)``. In odd columns the shifters ``(0, j)`` and ``(9, j)`` sit
outside any MZI and only add phases that photon counting cannot see, so
they are left out of the composed unitary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from ..errors import ConfigurationError
from .transfer import check_unitary

N_MODES = 10
N_COLUMNS = 10
TWO_PI = 2.0 * np.pi


def is_mzi_address(i, j):
    return 0 <= i <= N_MODES - 2 and 0 <= j < N_COLUMNS and (i + j) % 2 == 0


def mzi_addresses():
    """All 45 MZI addresses, ordered by column then row."""
    return [(i, j) for j in range(N_COLUMNS) for i in range(N_MODES - 1) if (i + j) % 2 == 0]


def column_addresses(j):
    return [(i, j) for i in range(N_MODES - 1) if (i + j) % 2 == 0]


def external_shifters():
    """Phaseshifters not belonging to any MZI."""
    return [(i, j) for j in range(1, N_COLUMNS, 2) for i in (0, N_MODES - 1)]


def _wrap_sigma(sigma):
    return float(np.mod(sigma, TWO_PI))


def _wrap_delta(delta):
    # map into [-pi, pi] while keeping pi itself representable
    d = float(np.mod(delta + np.pi, TWO_PI) - np.pi)
    if d == -np.pi and delta > 0:
        d = np.pi
    return d


@dataclass(frozen=True)
class MeshSettings:
    """Per-MZI ``(sigma, delta)`` pairs: MZI phase and internal phase.

    Values are normalised on construction to ``sigma in [0, 2pi)`` and
    ``delta in [-pi, pi]``. The arm phases are ``sigma +/- delta``.
    Instances are read-only.
    """

    phases: Mapping = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for addr, (sigma, delta) in dict(self.phases).items():
            i, j = int(addr[0]), int(addr[1])
            if not is_mzi_address(i, j):
                raise ConfigurationError(f"({i},{j}) is not an MZI address")
            if not (np.isfinite(sigma) and np.isfinite(delta)):
                raise ConfigurationError(f"non-finite phase at MZI ({i},{j})")
            norm[(i, j)] = (_wrap_sigma(sigma), _wrap_delta(delta))
        object.__setattr__(self, "phases", MappingProxyType(dict(sorted(norm.items(), key=lambda kv: (kv[0][1], kv[0][0])))))

    def __getitem__(self, addr):
        return self.phases[tuple(addr)]

    def __contains__(self, addr):
        return tuple(addr) in self.phases

    def __len__(self):
        return len(self.phases)

    def replace(self, updates: Mapping):
        """Return new settings with ``updates`` (address -> (sigma, delta)) applied."""
        merged = dict(self.phases)
        merged.update({tuple(k): v for k, v in updates.items()})
        return MeshSettings(merged)

    def missing(self):
        return [a for a in mzi_addresses() if a not in self.phases]

    def require_complete(self):
        missing = self.missing()
        if missing:
            i, j = missing[0]
            raise ConfigurationError(f"mesh settings missing MZI ({i},{j})" + (f" and {len(missing) - 1} more" if len(missing) > 1 else ""))

    def shifter_phases(self, wrap=True):
        """10x10 array of intended phaseshifter phases; shifters without an MZI entry are 0."""
        out = np.zeros((N_MODES, N_COLUMNS))
        for (i, j), (sigma, delta) in self.phases.items():
            out[i, j] = sigma + delta
            out[i + 1, j] = sigma - delta
        return np.mod(out, TWO_PI) if wrap else out

    @classmethod
    def from_shifter_phases(cls, phases):
        """Inverse of :meth:`shifter_phases` for the MZI shifters."""
        phases = np.asarray(phases, dtype=float)
        if phases.shape != (N_MODES, N_COLUMNS):
            raise ConfigurationError(f"phaseshifter array must be {N_MODES}x{N_COLUMNS}")
        return cls({(i, j): ((phases[i, j] + phases[i + 1, j]) / 2, (phases[i, j] - phases[i + 1, j]) / 2) for i, j in mzi_addresses()})

    def to_text(self):
        """Flat ``i,j,sigma,delta`` table, one MZI per line."""
        return "".join(f"{i},{j},{s!r},{d!r}\n" for (i, j), (s, d) in self.phases.items())

    @classmethod
    def from_text(cls, text):
        rows = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("i,"):
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ConfigurationError(f"line {lineno}: expected 'i,j,sigma,delta'")
            try:
                i, j, s, d = int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3])
            except ValueError as exc:
                raise ConfigurationError(f"line {lineno}: {exc}") from None
            rows[(i, j)] = (s, d)
        return cls(rows)


def uniform_settings(sigma, delta):
    """Every MZI at the same ``(sigma, delta)``; ``delta = pi/2`` is the all-bar mesh."""
    return MeshSettings({a: (sigma, delta) for a in mzi_addresses()})


def mzi_blocks(theta1, theta2, alpha, beta):
    """Vectorised :func:`~qoverlap.optics.transfer.mzi_transfer`; returns the four entries."""
    e1, e2 = np.exp(1j * np.asarray(theta1)), np.exp(1j * np.asarray(theta2))
    ca, sa = np.cos(np.pi / 4 + alpha), np.sin(np.pi / 4 + alpha)
    cb, sb = np.cos(np.pi / 4 + beta), np.sin(np.pi / 4 + beta)
    m00 = cb * ca * e1 - sb * sa * e2
    m01 = 1j * (cb * sa * e1 + sb * ca * e2)
    m10 = 1j * (sb * ca * e1 + cb * sa * e2)
    m11 = -sb * sa * e1 + cb * ca * e2
    return m00, m01, m10, m11


_COLUMN_ROWS = [np.array([i for i, _ in column_addresses(j)]) for j in range(N_COLUMNS)]


def _error_arrays(dc_errors):
    alpha = np.zeros((N_MODES, N_COLUMNS))
    beta = np.zeros((N_MODES, N_COLUMNS))
    for (i, j), (a, b) in dict(dc_errors or {}).items():
        alpha[i, j], beta[i, j] = a, b
    return alpha, beta


def _compose(upper, lower, dc_errors, columns):
    """Propagate through the listed columns; ``upper``/``lower`` are 10x10 arm-phase grids."""
    alpha, beta = _error_arrays(dc_errors)
    u = np.eye(N_MODES, dtype=np.complex128)
    for j in columns:
        rows = _COLUMN_ROWS[j]
        m00, m01, m10, m11 = mzi_blocks(upper[rows, j], lower[rows, j], alpha[rows, j], beta[rows, j])
        top, bottom = u[rows], u[rows + 1]
        u[rows] = m00[:, None] * top + m01[:, None] * bottom
        u[rows + 1] = m10[:, None] * top + m11[:, None] * bottom
    return u


def compose_mesh(settings: MeshSettings, dc_errors: Mapping | None = None, columns: Iterable[int] | None = None):
    """Unitary of the mesh, columns applied left to right as light propagates.

    Parameters
    ----------
    settings : MeshSettings
        Must cover all 45 MZIs.
    dc_errors : mapping, optional
        ``(i, j) -> (alpha_err, beta_err)`` for the two couplers of each MZI;
        missing entries are ideal.
    columns : iterable of int, optional
        Restrict to a subset of columns (in the given order). Default all.

    Returns
    -------
    ndarray, shape (10, 10)
    """
    settings.require_complete()
    cols = range(N_COLUMNS) if columns is None else list(columns)
    phases = settings.shifter_phases(wrap=False)
    u = _compose(phases, np.roll(phases, -1, axis=0), dc_errors, cols)
    return check_unitary(u)


def compose_from_phases(phases, dc_errors: Mapping | None = None, columns: Iterable[int] | None = None):
    """Mesh unitary from a 10x10 array of actual phaseshifter phases."""
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (N_MODES, N_COLUMNS):
        raise ConfigurationError(f"phaseshifter array must be {N_MODES}x{N_COLUMNS}")
    cols = range(N_COLUMNS) if columns is None else list(columns)
    u = _compose(phases, np.roll(phases, -1, axis=0), dc_errors, cols)
    return check_unitary(u)
