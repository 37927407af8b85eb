"""Quantum-kernel Gram matrices from exact or simulated overlaps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..chip.circuit import DEFAULT_QUDIT, qudit_vector
from ..errors import ParameterError
from ..overlap.estimators import bunching_probability
from ..overlap.experiment import simulate_overlap_experiment
from ..seeding import mix


@dataclass(frozen=True)
class KernelResult:
    """Gram matrix plus the raw tallies behind it (``None`` when exact)."""

    K: np.ndarray
    n_odd: np.ndarray | None = None
    n_total: int | None = None
    R: float | None = None


def exact_kernel(xa, xb=None, amplitudes=DEFAULT_QUDIT):
    """``|<psi(x)|psi(x')>|^2`` for all pairs of rows."""
    a = np.asarray(amplitudes, dtype=float)
    va = np.array([qudit_vector(a, x) for x in np.atleast_2d(xa)])
    vb = va if xb is None else np.array([qudit_vector(a, x) for x in np.atleast_2d(xb)])
    k = np.abs(va.conj() @ vb.T) ** 2
    if xb is None:
        k = (k + k.T) / 2
        np.fill_diagonal(k, 1.0)
    return np.clip(k, 0.0, 1.0)


def _entry_block(args):
    x, pairs, n_shots, crosstalk, base_seed, amplitudes, visibility = args
    out = []
    for i, j in pairs:
        est = simulate_overlap_experiment(x[i], x[j], n_shots, crosstalk, visibility, mix(base_seed, i, j), amplitudes)
        out.append(est.tally.n_odd)
    return out


def sampled_kernel(x, n_shots, base_seed=0, crosstalk=None, amplitudes=DEFAULT_QUDIT, jobs=1, visibility=1.0):
    """Kernel from simulated coincidence counts on every unordered pair, diagonal included.

    Entry ``(i, j)`` with ``i <= j`` uses seed ``mix(base_seed, i, j)``, so the
    result does not depend on ``jobs``.
    """
    if n_shots < 1:
        raise ParameterError("n_shots must be positive")
    x = np.asarray(x, dtype=float)
    m = len(x)
    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    if jobs > 1:
        chunks = [pairs[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_entry_block, [(x, c, n_shots, crosstalk, base_seed, amplitudes, visibility) for c in chunks]))
        odd = {}
        for c, r in zip(chunks, results):
            odd.update(zip(c, r))
        counts = [odd[p] for p in pairs]
    else:
        counts = _entry_block((x, pairs, n_shots, crosstalk, base_seed, amplitudes, visibility))
    n_odd = np.zeros((m, m), dtype=np.int64)
    iu = tuple(np.array(pairs).T)
    n_odd[iu] = counts
    n_odd = n_odd + np.triu(n_odd, 1).T
    R = bunching_probability(amplitudes)
    return KernelResult(kernel_from_counts(n_odd, n_shots, R), n_odd, int(n_shots), R)


def kernel_from_counts(n_odd, n_total, R):
    """Clipped, symmetric kernel from odd-parity counts."""
    k = 1.0 - 2.0 * (1.0 - R) * np.asarray(n_odd, dtype=float) / n_total
    k = np.clip((k + k.T) / 2, 0.0, 1.0)
    return k


def kernel_matrix(x, evaluator="exact", n_shots=1000, base_seed=0, crosstalk=None, amplitudes=DEFAULT_QUDIT, jobs=1,
                  visibility=1.0):
    """Gram matrix over the rows of ``x``.

    ``evaluator`` is ``"exact"`` (noiseless overlaps, unit diagonal) or
    ``"experiment"`` (shot-sampled coincidences, optional crosstalk).
    """
    if evaluator == "exact":
        return KernelResult(exact_kernel(x, amplitudes=amplitudes))
    if evaluator == "experiment":
        return sampled_kernel(x, n_shots, base_seed, crosstalk, amplitudes, jobs, visibility)
    raise ParameterError(f"unknown evaluator {evaluator!r}")


def kernel_to_csv(k):
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in np.asarray(k))
