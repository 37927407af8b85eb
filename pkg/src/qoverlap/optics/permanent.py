"""Matrix permanents."""

from itertools import permutations

import numpy as np

from ..errors import CapacityError, DimensionError

MAX_PERMANENT_SIZE = 20


def _as_square(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {m.shape}")
    return m


def permanent(m):
    """Permanent by Ryser's formula with Gray-code subset iteration.

    Runs in ``O(2^n n)``: consecutive Gray codes differ in one column, so the
    row sums are updated by a single column add or subtract.

    Parameters
    ----------
    m : array_like, shape (n, n)

    Returns
    -------
    complex
    """
    m = _as_square(m)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n > MAX_PERMANENT_SIZE:
        raise CapacityError(f"permanent size {n} exceeds {MAX_PERMANENT_SIZE}")
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    sign = -1.0 if n % 2 else 1.0  # (-1)^(n - |S|) with |S| = 0
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        changed = gray ^ prev_gray
        col = changed.bit_length() - 1
        if gray & changed:
            row_sums += m[:, col]
        else:
            row_sums -= m[:, col]
        sign = -sign
        total += sign * np.prod(row_sums)
        prev_gray = gray
    return complex(total)


def permanent_naive(m):
    """Permanent as the sum over all permutations; ``O(n! n)``."""
    m = _as_square(m)
    n = m.shape[0]
    idx = np.arange(n)
    return complex(sum(np.prod(m[idx, list(p)]) for p in permutations(range(n))))
