"""Fock bases and multi-photon evolution under a linear-optical unitary."""

from collections import defaultdict
from dataclasses import dataclass
from math import comb, factorial, prod, sqrt

import numpy as np

from ..errors import CapacityError, ConfigurationError, DimensionError
from .permanent import permanent

MAX_BASIS = 10**6
MAX_ORACLE_BASIS = 5000
MAX_EVOLVE_PHOTONS = 6
NORM_ATOL = 1e-9


def fock_basis(n_modes, n_photons, cap=MAX_BASIS):
    """Occupation tuples of ``n_photons`` over ``n_modes``, lexicographically descending.

    Examples
    --------
    >>> fock_basis(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    if n_modes < 1 or n_photons < 0:
        raise ConfigurationError("need n_modes >= 1 and n_photons >= 0")
    size = comb(n_modes + n_photons - 1, n_photons)
    if size > cap:
        raise CapacityError(f"Fock basis of size {size} exceeds cap {cap}")

    def rec(modes, photons):
        if modes == 1:
            yield (photons,)
            return
        for first in range(photons, -1, -1):
            for rest in rec(modes - 1, photons - first):
                yield (first,) + rest

    return list(rec(n_modes, n_photons))


def _check_occupation(occ, n_modes=None):
    occ = tuple(int(x) for x in occ)
    if any(x < 0 for x in occ):
        raise ConfigurationError(f"negative occupation in {occ}")
    if n_modes is not None and len(occ) != n_modes:
        raise DimensionError(f"occupation has {len(occ)} modes, unitary has {n_modes}")
    return occ


@dataclass(frozen=True)
class PhotonicState:
    """Pure state over a fixed-(M, K) Fock basis.

    Attributes
    ----------
    basis : tuple of tuple of int
        Canonical (lexicographic descending) basis.
    amplitudes : ndarray of complex
    """

    basis: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        amps.setflags(write=False)
        if amps.shape != (len(self.basis),):
            raise DimensionError("amplitude vector does not match basis size")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ConfigurationError(f"state norm {norm:.12f} differs from 1")
        object.__setattr__(self, "basis", tuple(tuple(b) for b in self.basis))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def amplitude(self, occupation):
        return self.amplitudes[self.basis.index(tuple(occupation))]

    def as_dict(self):
        return dict(zip(self.basis, self.amplitudes))


def _multiset_indices(occ):
    return [mode for mode, n in enumerate(occ) for _ in range(n)]


def evolve_fock(u, occupation):
    """Evolve a Fock input through unitary ``u`` via permanents.

    The amplitude of output ``n`` is
    ``perm(U[rows(n), cols(m)]) / sqrt(prod n_i! prod m_j!)`` where rows and
    columns are repeated according to the occupations.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"unitary must be square, got shape {u.shape}")
    occ = _check_occupation(occupation, u.shape[0])
    k = sum(occ)
    if k > MAX_EVOLVE_PHOTONS:
        raise CapacityError(f"{k} photons exceeds the cap of {MAX_EVOLVE_PHOTONS}")
    basis = fock_basis(u.shape[0], k)
    cols = _multiset_indices(occ)
    norm_in = prod(factorial(x) for x in occ)
    sub = u[:, cols]
    amps = np.empty(len(basis), dtype=np.complex128)
    for idx, out in enumerate(basis):
        rows = _multiset_indices(out)
        amps[idx] = permanent(sub[rows, :]) / sqrt(norm_in * prod(factorial(x) for x in out))
    return PhotonicState(basis, amps)


def brute_force_evolve(u, occupation):
    """Reference evolution by expanding creation operators.

    Each input photon in mode ``k`` becomes ``sum_j U[j, k] a_j^dag``; the
    product is multiplied out as a polynomial in the ``a_j^dag`` and every
    monomial ``prod (a_j^dag)^{n_j}`` acting on vacuum contributes
    ``sqrt(prod n_j!)`` to basis state ``n``.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"unitary must be square, got shape {u.shape}")
    m = u.shape[0]
    occ = _check_occupation(occupation, m)
    k = sum(occ)
    basis = fock_basis(m, k, cap=MAX_ORACLE_BASIS)
    poly = {(0,) * m: 1.0 + 0j}
    for mode in _multiset_indices(occ):
        nxt = defaultdict(complex)
        for mono, coeff in poly.items():
            for j in range(m):
                if u[j, mode] != 0:
                    key = mono[:j] + (mono[j] + 1,) + mono[j + 1:]
                    nxt[key] += coeff * u[j, mode]
        poly = nxt
    norm_in = sqrt(prod(factorial(x) for x in occ))
    amps = np.array([poly.get(b, 0j) * sqrt(prod(factorial(x) for x in b)) / norm_in for b in basis])
    return PhotonicState(basis, amps)
