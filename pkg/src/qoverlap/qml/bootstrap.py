"""Bootstrap accuracy errors from retained per-entry coincidence pools."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CapacityError, DimensionError
from .kernel import kernel_from_counts
from .svm import DEFAULT_C, accuracy, svm_predict, svm_train

POOL_SIZE = 15_000
SAMPLE_SIZE = 1_000


@dataclass(frozen=True)
class BootstrapResult:
    mean: float
    std: float
    accuracies: np.ndarray
    std_defined: bool = True


def resample_counts(n_odd, pool_total, n_sample, rng):
    """Draw ``n_sample`` events without replacement from every entry's pool.

    Only the upper triangle is drawn; the result is mirrored so the kernel
    stays symmetric.
    """
    if pool_total < n_sample:
        raise CapacityError(f"pool of {pool_total} events cannot supply {n_sample} per resample")
    n_odd = np.asarray(n_odd, dtype=np.int64)
    m = n_odd.shape[0]
    iu = np.triu_indices(m)
    good = n_odd[iu]
    draw = rng.hypergeometric(good, pool_total - good, n_sample)
    out = np.zeros_like(n_odd)
    out[iu] = draw
    return out + np.triu(out, 1).T


def bootstrap_accuracy(n_odd, pool_total, R, y, train, test, C=DEFAULT_C, n_sample=SAMPLE_SIZE,
                       resamples=1000, seed=0):
    """Accuracy mean and spread over resampled kernels.

    Each resample draws ``n_sample`` coincidences per entry from its pool of
    ``pool_total``, rebuilds the kernel, retrains on ``train`` and scores
    ``test``.

    Returns
    -------
    BootstrapResult
        ``std`` is the sample standard deviation; with one resample it is
        reported as 0 and ``std_defined`` is False.
    """
    n_odd = np.asarray(n_odd)
    if n_odd.ndim != 2 or n_odd.shape[0] != n_odd.shape[1] or n_odd.shape[0] != len(y):
        raise DimensionError("tallies must be an m x m array matching the labels")
    if pool_total < n_sample:
        raise CapacityError(f"pool of {pool_total} events cannot supply {n_sample} per resample")
    if resamples < 1:
        raise CapacityError("need at least one resample")
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    accs = np.empty(resamples)
    for r in range(resamples):
        k = kernel_from_counts(resample_counts(n_odd, pool_total, n_sample, rng), n_sample, R)
        model = svm_train(k[np.ix_(train, train)], y[train], C)
        accs[r] = accuracy(svm_predict(model, k[np.ix_(test, train)]), y[test])
    if resamples == 1:
        return BootstrapResult(float(accs[0]), 0.0, accs, std_defined=False)
    return BootstrapResult(float(accs.mean()), float(accs.std(ddof=1)), accs)
