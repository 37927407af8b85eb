"""Deterministic per-task seed derivation.

``mix(base, i, j, ...)`` folds integer indices into a 64-bit seed with the
SplitMix64 finaliser. Each index is hashed on its own before being combined,
so the result depends on the order of the indices.
"""

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
M1 = 0xBF58476D1CE4E5B9
M2 = 0x94D049BB133111EB


def fmix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * M1) & MASK
    z = ((z ^ (z >> 27)) * M2) & MASK
    return z ^ (z >> 31)


def mix(base: int, *indices: int) -> int:
    """Seed for the task addressed by ``indices`` under ``base``; ``mix(s) == s``."""
    h = int(base) & MASK
    for idx in indices:
        h = fmix64((h ^ fmix64(int(idx) + GOLDEN)) + GOLDEN)
    return h


def _fmix64_vec(z):
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(M2)
    return z ^ (z >> np.uint64(31))


def mix_array(base: int, *indices) -> np.ndarray:
    """Vectorised :func:`mix` over broadcastable integer index arrays."""
    arrays = np.broadcast_arrays(*[np.asarray(i, dtype=np.uint64) for i in indices]) if indices else []
    shape = arrays[0].shape if arrays else ()
    h = np.full(shape, int(base) & MASK, dtype=np.uint64)
    g = np.uint64(GOLDEN)
    with np.errstate(over="ignore"):
        for idx in arrays:
            h = _fmix64_vec((h ^ _fmix64_vec(idx + g)) + g)
    return h
