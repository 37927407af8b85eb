"""Truncated Fock-space displacement operator, used to check the closed forms."""

import numpy as np
from scipy.special import gammaln

from ..errors import CapacityError


def displacement_matrix(alpha, cutoff):
    """``<m|D(alpha)|n>`` for ``m, n < cutoff``.

    The vacuum column is ``exp(-|alpha|^2/2) alpha^m / sqrt(m!)``; the others
    follow from ``D a^dag = (a^dag - alpha^*) D``::

        <m|D|n> = (sqrt(m) <m-1|D|n-1> - alpha^* <m|D|n-1>) / sqrt(n)
    """
    alpha = complex(alpha)
    if cutoff < 4 * (1 + abs(alpha) ** 2):
        raise CapacityError(f"cutoff {cutoff} below 4(1+|alpha|^2) = {4 * (1 + abs(alpha) ** 2):.1f}")
    m = np.arange(cutoff)
    d = np.zeros((cutoff, cutoff), dtype=np.complex128)
    if alpha == 0:
        return np.eye(cutoff, dtype=np.complex128)
    logmag = -0.5 * abs(alpha) ** 2 + m * np.log(abs(alpha)) - 0.5 * gammaln(m + 1)
    d[:, 0] = np.exp(logmag + 1j * m * np.angle(alpha))
    sq = np.sqrt(m)
    for n in range(1, cutoff):
        d[1:, n] = sq[1:] * d[:-1, n - 1]
        d[:, n] -= np.conj(alpha) * d[:, n - 1]
        d[:, n] /= np.sqrt(n)
    return d


def coherent_ket(beta, cutoff):
    m = np.arange(cutoff)
    if beta == 0:
        return np.eye(cutoff)[0].astype(complex)
    return np.exp(-0.5 * abs(beta) ** 2 + m * np.log(abs(beta)) + 1j * m * np.angle(beta) - 0.5 * gammaln(m + 1))


def squeezed_ket(r, phi, cutoff):
    """``S(r e^{i phi})|0>`` with ``S(xi) = exp((xi^* a^2 - xi a^dag^2)/2)``."""
    ket = np.zeros(cutoff, dtype=np.complex128)
    k = np.arange(cutoff // 2 + (cutoff % 2))
    coef = -np.exp(1j * phi) * np.tanh(r)
    amp = np.exp(0.5 * gammaln(2 * k + 1) - k * np.log(2) - gammaln(k + 1)) / np.sqrt(np.cosh(r))
    ket[2 * k] = amp * coef**k
    return ket


def cat_ket(beta, cutoff):
    v = coherent_ket(beta, cutoff) + coherent_ket(-beta, cutoff)
    return v / np.linalg.norm(v)


def fock_ket(n, cutoff):
    return np.eye(cutoff, dtype=np.complex128)[n]


def chi_from_ket(ket, alpha, cutoff):
    """``<psi|D(alpha)|psi>`` in the truncated space."""
    return complex(np.conj(ket) @ displacement_matrix(alpha, cutoff) @ ket)
