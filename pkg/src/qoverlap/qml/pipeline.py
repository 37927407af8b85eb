"""End-to-end classification run: data, kernel, training, scoring, bootstrap."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..chip.circuit import DEFAULT_QUDIT
from ..errors import ParameterError
from ..overlap.estimators import bunching_probability
from ..seeding import mix
from .bootstrap import POOL_SIZE, BootstrapResult, bootstrap_accuracy, resample_counts
from .datasets import Dataset, gen_dataset, train_test_split
from .kernel import exact_kernel, kernel_from_counts, sampled_kernel
from .svm import DEFAULT_C, SvmModel, accuracy, svm_predict, svm_train

# stream tags under the run seed
_S_KERNEL, _S_SUBSAMPLE, _S_BOOTSTRAP = 1, 2, 3


@dataclass(frozen=True)
class ClassificationResult:
    data: Dataset
    train: np.ndarray
    test: np.ndarray
    K: np.ndarray
    model: SvmModel
    train_accuracy: float
    test_accuracy: float
    bootstrap: BootstrapResult | None = None

    def metrics(self):
        out = {
            "kind": self.data.kind,
            "n_train": int(len(self.train)),
            "n_test": int(len(self.test)),
            "n_support": int(len(self.model.support_indices)),
            "train_accuracy": self.train_accuracy,
            "test_accuracy": self.test_accuracy,
        }
        if self.bootstrap is not None:
            out.update(bootstrap_mean=self.bootstrap.mean, bootstrap_std=self.bootstrap.std,
                       bootstrap_std_defined=self.bootstrap.std_defined,
                       bootstrap_resamples=int(len(self.bootstrap.accuracies)))
        return out


def classify(data: Dataset, n_train=100, split_seed=0, seed=0, evaluator="exact", n_shots=1000, C=DEFAULT_C,
             crosstalk=None, visibility=1.0, resamples=0, pool=POOL_SIZE, amplitudes=DEFAULT_QUDIT, jobs=1):
    """Train on a random split and score the held-out points.

    With ``evaluator="experiment"`` and ``resamples > 0`` every entry is
    simulated with ``pool`` coincidences; the working kernel is one
    ``n_shots`` subsample of that pool and the bootstrap draws further
    subsamples of the same size.
    """
    m = len(data)
    train, test = train_test_split(m, n_train, split_seed)
    boot = None
    if evaluator == "exact":
        K = exact_kernel(data.x, amplitudes=amplitudes)
    elif evaluator == "experiment":
        R = bunching_probability(amplitudes)
        if resamples > 0:
            res = sampled_kernel(data.x, pool, mix(seed, _S_KERNEL), crosstalk, amplitudes, jobs, visibility)
            rng = np.random.default_rng(mix(seed, _S_SUBSAMPLE))
            K = kernel_from_counts(resample_counts(res.n_odd, pool, n_shots, rng), n_shots, R)
            boot = bootstrap_accuracy(res.n_odd, pool, R, data.y, train, test, C, n_shots, resamples,
                                      mix(seed, _S_BOOTSTRAP))
        else:
            K = sampled_kernel(data.x, n_shots, mix(seed, _S_KERNEL), crosstalk, amplitudes, jobs, visibility).K
    else:
        raise ParameterError(f"unknown evaluator {evaluator!r}")
    model = svm_train(K[np.ix_(train, train)], data.y[train], C)
    tr_acc = accuracy(svm_predict(model, K[np.ix_(train, train)]), data.y[train])
    te_acc = accuracy(svm_predict(model, K[np.ix_(test, train)]), data.y[test])
    return ClassificationResult(data, train, test, K, model, tr_acc, te_acc, boot)


def classify_kind(kind, n=200, seed=0, **kwargs):
    """:func:`classify` on a freshly generated dataset with seed ``seed``."""
    return classify(gen_dataset(kind, n, seed), seed=seed, **kwargs)
