"""Soft-margin kernel SVM trained on the dual by sequential minimal optimisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, DimensionError, ParameterError, SolverError

DEFAULT_C = 0.8
KKT_TOL = 1e-6
MAX_UPDATES = 100_000
TAU = 1e-12


@dataclass(frozen=True)
class SvmModel:
    """Trained classifier.

    ``b`` is the averaged bias ``mean_j (y_j - sum_i beta_i y_i K_ji)`` used for
    prediction; ``b_kkt`` is the bias implied by the optimality conditions
    (averaged over free support vectors).
    """

    beta: np.ndarray
    b: float
    C: float
    y: np.ndarray
    support_indices: np.ndarray
    b_kkt: float = 0.0
    n_updates: int = 0
    objective_trace: tuple = field(default=(), repr=False)

    def to_json(self):
        return json.dumps({"beta": self.beta.tolist(), "b": self.b, "C": self.C,
                           "support_indices": self.support_indices.tolist()}, sort_keys=True)

    @property
    def coef(self):
        return self.beta * self.y


def dual_objective(beta, K, y):
    v = beta * y
    return float(beta.sum() - 0.5 * v @ K @ v)


def svm_train(K, y, C=DEFAULT_C, tol=KKT_TOL, max_updates=MAX_UPDATES, record_objective=False):
    """Maximise ``sum beta - 1/2 sum beta_i beta_j y_i y_j K_ij`` on the box with ``y . beta = 0``.

    Pairs are chosen by maximal violation of the optimality conditions. A
    non-positive curvature along the pair direction (indefinite ``K``) is
    replaced by a tiny positive value, which still moves uphill.

    Raises
    ------
    SolverError
        When ``max_updates`` pair updates do not reach ``tol``.
    """
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    m = len(y)
    if K.shape != (m, m):
        raise DimensionError(f"kernel shape {K.shape} does not match {m} labels")
    if np.max(np.abs(K - K.T), initial=0.0) > 1e-12:
        raise ConfigurationError("kernel matrix must be symmetric")
    if C <= 0:
        raise ParameterError("C must be positive")
    if not np.all(np.isin(y, (-1, 1))):
        raise ConfigurationError("labels must be -1 or +1")
    Q = K * np.outer(y, y)
    beta = np.zeros(m)
    grad = -np.ones(m)  # gradient of the minimised form 1/2 b'Qb - sum b
    trace = [0.0] if record_objective else None
    updates = 0
    while True:
        score = -y * grad
        up = ((y > 0) & (beta < C)) | ((y < 0) & (beta > 0))
        low = ((y > 0) & (beta > 0)) | ((y < 0) & (beta < C))
        if not up.any() or not low.any():
            gap = 0.0
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        j = int(np.flatnonzero(low)[np.argmin(score[low])])
        gap = score[i] - score[j]
        if gap <= tol:
            break
        if updates >= max_updates:
            raise SolverError(f"SMO stopped after {updates} updates with KKT gap {gap:.3e}", residual=float(gap))
        curv = Q[i, i] + Q[j, j] - 2 * y[i] * y[j] * Q[i, j]
        step = gap / max(curv, TAU)
        # move beta_i by y_i*step and beta_j by -y_j*step, clipped to the box
        lim_i = C - beta[i] if y[i] > 0 else beta[i]
        lim_j = beta[j] if y[j] > 0 else C - beta[j]
        step = min(step, lim_i, lim_j)
        di, dj = y[i] * step, -y[j] * step
        beta[i] += di
        beta[j] += dj
        grad += Q[:, i] * di + Q[:, j] * dj
        np.clip(beta, 0.0, C, out=beta)
        updates += 1
        if record_objective:
            trace.append(dual_objective(beta, K, y))
    coef = beta * y
    f_nob = K @ coef
    b = float(np.mean(y - f_nob))
    support = np.flatnonzero(beta > 1e-8 * C)
    free = (beta > 1e-8 * C) & (beta < C * (1 - 1e-8))
    if free.any():
        b_kkt = float(np.mean(y[free] - f_nob[free]))
    else:
        # no free vector: take the midpoint of the feasible bias interval
        score = y - f_nob
        up = ((y > 0) & (beta < C)) | ((y < 0) & (beta > 0))
        low = ((y > 0) & (beta > 0)) | ((y < 0) & (beta < C))
        if up.any() and low.any():
            b_kkt = float((score[up].max() + score[low].min()) / 2)
        else:
            b_kkt = float(np.mean(score))
    return SvmModel(beta, b, float(C), y.astype(int), support, b_kkt, updates, tuple(trace or ()))


def decision_function(model: SvmModel, k_rows, bias="mean"):
    """Decision values for kernel rows against the training set.

    ``k_rows`` is an ``(n, m)`` array, or a mapping ``training index -> value``
    for a single point that must cover every support vector.
    """
    b = model.b if bias == "mean" else model.b_kkt
    if isinstance(k_rows, dict):
        missing = [int(s) for s in model.support_indices if int(s) not in k_rows]
        if missing:
            raise DimensionError(f"kernel row lacks support vectors {missing[:5]}")
        return float(sum(model.coef[s] * k_rows[int(s)] for s in model.support_indices) + b)
    k = np.atleast_2d(np.asarray(k_rows, dtype=float))
    if k.shape[1] != len(model.beta):
        raise DimensionError(f"kernel rows have {k.shape[1]} columns, model has {len(model.beta)} training points")
    s = model.support_indices
    return k[:, s] @ model.coef[s] + b


def svm_predict(model: SvmModel, k_rows, bias="mean"):
    """Labels ``sign(decision)``; an exact zero maps to +1."""
    f = decision_function(model, k_rows, bias)
    return np.where(np.asarray(f) >= 0, 1, -1)


def accuracy(pred, y):
    return float(np.mean(np.asarray(pred) == np.asarray(y)))
