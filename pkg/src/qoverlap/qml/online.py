"""Online learning of an unknown phase qudit with SPSA on overlap-estimate costs.

The target occupies the first encoding slot of the overlap circuit and the
learner the second; the cost is one minus the estimated overlap. The
optimiser only sees shot-sampled costs, while the trace also records the
exact infidelity for analysis.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..chip.circuit import DEFAULT_QUDIT, qudit_overlap
from ..chip.crosstalk import CrosstalkModel
from ..errors import ParameterError
from ..overlap.experiment import simulate_overlap_experiment
from ..seeding import mix

TWO_PI = 2 * np.pi
T_FALLBACK = 0.1
INIT_EVALS = 5

# stream tags for independent random sequences
_S_INIT, _S_DELTA, _S_SHOTS, _S_TSCALE = 0, 1, 2, 3


@dataclass(frozen=True)
class SpsaConfig:
    """SPSA gains and run settings.

    ``t`` is the perturbation scale; ``None`` means it is set at runtime from
    the spread of repeated costs at the starting point. ``shots=None`` gives
    exact, noiseless costs.
    """

    a: float = 1.6
    A: float = 10.0
    alpha: float = 0.602
    gamma: float = 0.101
    iterations: int = 500
    shots: int | None = 100
    seed: int = 0
    t: float | None = None
    gradient_reps: int = 1

    def __post_init__(self):
        if self.a <= 0 or (self.t is not None and self.t <= 0):
            raise ParameterError("a and t must be positive")
        if not (0 < self.alpha < 1 and 0 < self.gamma < 1):
            raise ParameterError("alpha and gamma must lie in (0, 1)")
        if self.A < 0 or self.iterations < 0 or self.gradient_reps < 1:
            raise ParameterError("A, iterations must be non-negative and gradient_reps positive")
        if self.shots is not None and self.shots < 1:
            raise ParameterError("shots must be positive")


def gain_at(k, config: SpsaConfig):
    return config.a / (config.A + k + 1) ** config.alpha


def perturb_at(k, config: SpsaConfig):
    return config.t / (k + 1) ** config.gamma


def init_t(cost, theta0, seed=0, n_evals=INIT_EVALS, fallback=T_FALLBACK):
    """Twice the sample standard deviation of repeated costs at ``theta0``.

    ``cost(theta, seed)`` is called ``n_evals`` times with derived seeds. A zero
    spread (noiseless costs) returns ``fallback``.
    """
    vals = np.array([cost(theta0, mix(seed, _S_TSCALE, r)) for r in range(n_evals)])
    t = 2.0 * float(np.std(vals, ddof=1))
    return t if t > 0 else fallback


def spsa_step(theta, k, config: SpsaConfig, cost, rng, seeds=(None, None)):
    """One SPSA update.

    Returns
    -------
    theta_next, g, c_plus, c_minus
        With ``gradient_reps > 1`` the gradient is averaged and the reported
        costs are from the last draw.
    """
    theta = np.asarray(theta, dtype=float)
    tk = perturb_at(k, config)
    g = np.zeros_like(theta)
    cp = cm = np.nan
    for r in range(config.gradient_reps):
        delta = rng.choice((-1.0, 1.0), size=theta.shape)
        sp, sm = (None, None) if seeds[0] is None else (mix(seeds[0], r), mix(seeds[1], r))
        cp = cost(theta + tk * delta, sp)
        cm = cost(theta - tk * delta, sm)
        g += (cp - cm) / (2 * tk * delta)
    g /= config.gradient_reps
    return theta - gain_at(k, config) * g, g, cp, cm


def overlap_cost(target, shots, crosstalk=None, amplitudes=DEFAULT_QUDIT):
    """Cost ``c(theta, seed) = 1 - estimate`` for a fixed target.

    Crosstalk is applied to the whole chip on every call, so each copy of the
    target is perturbed by the learner's current settings.
    """
    target = np.mod(np.asarray(target, dtype=float), TWO_PI)

    def cost(theta, seed=None):
        theta = np.mod(theta, TWO_PI)
        if shots is None:
            return 1.0 - qudit_overlap(target, theta, amplitudes)
        est = simulate_overlap_experiment(target, theta, shots, crosstalk, seed=seed, amplitudes=amplitudes)
        return 1.0 - est.value

    return cost


@dataclass(frozen=True)
class SpsaTrace:
    theta: np.ndarray
    cost_plus: np.ndarray
    cost_minus: np.ndarray
    gradient: np.ndarray
    true_infidelity: np.ndarray
    t: float = 0.0
    target: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __len__(self):
        return len(self.true_infidelity)

    @property
    def final_infidelity(self):
        return float(self.true_infidelity[-1])

    def to_csv(self):
        lines = ["iter,theta1,theta2,theta3,cost_plus,cost_minus,true_infidelity"]
        for k in range(len(self)):
            vals = [*self.theta[k], self.cost_plus[k], self.cost_minus[k], self.true_infidelity[k]]
            lines.append(",".join([str(k)] + [repr(float(v)) for v in vals]))
        return "\n".join(lines) + "\n"


def run_online_learning(target, config: SpsaConfig, noise: CrosstalkModel | None = None,
                        amplitudes=DEFAULT_QUDIT, theta0=None):
    """Learn ``target`` phases from noisy overlap costs.

    Starting point, perturbation signs and shot noise come from independent
    streams derived from ``config.seed``. Row 0 of the trace is the starting
    point, with NaN costs.
    """
    target = np.asarray(target, dtype=float)
    cost = overlap_cost(target, config.shots, noise, amplitudes)
    if theta0 is None:
        theta0 = np.random.default_rng(mix(config.seed, _S_INIT)).uniform(0, TWO_PI, 3)
    theta = np.asarray(theta0, dtype=float)
    if config.t is None:
        config = replace(config, t=init_t(cost, theta, mix(config.seed, _S_TSCALE)))
    rng = np.random.default_rng(mix(config.seed, _S_DELTA))
    n = config.iterations + 1
    thetas = np.empty((n, 3))
    cp, cm = np.full(n, np.nan), np.full(n, np.nan)
    grads = np.full((n, 3), np.nan)
    infid = np.empty(n)
    thetas[0] = theta
    infid[0] = 1.0 - qudit_overlap(target, np.mod(theta, TWO_PI), amplitudes)
    for k in range(config.iterations):
        seeds = (mix(config.seed, _S_SHOTS, k, 0), mix(config.seed, _S_SHOTS, k, 1))
        theta, g, cp[k + 1], cm[k + 1] = spsa_step(theta, k, config, cost, rng, seeds)
        thetas[k + 1] = theta
        grads[k + 1] = g
        infid[k + 1] = 1.0 - qudit_overlap(target, np.mod(theta, TWO_PI), amplitudes)
    return SpsaTrace(thetas, cp, cm, grads, infid, float(config.t), target)


def summarize_traces(traces):
    """Median and quartiles of the final and per-iteration true infidelity."""
    final = np.array([t.final_infidelity for t in traces])
    curves = np.array([t.true_infidelity for t in traces])
    q1, med, q3 = np.percentile(final, [25, 50, 75])
    return {
        "n_runs": len(traces),
        "final_median": float(med),
        "final_q1": float(q1),
        "final_q3": float(q3),
        "median_curve": np.median(curves, axis=0).tolist(),
        "q1_curve": np.percentile(curves, 25, axis=0).tolist(),
        "q3_curve": np.percentile(curves, 75, axis=0).tolist(),
    }


def summary_json(traces):
    return json.dumps(summarize_traces(traces), sort_keys=True)


def _task(args):
    target, config, noise, amplitudes = args
    return run_online_learning(target, config, noise, amplitudes)


def run_learning_tasks(n_targets, config: SpsaConfig, noise: CrosstalkModel | None = None, seed=0,
                       amplitudes=DEFAULT_QUDIT, jobs=1):
    """Independent learning runs on random targets.

    Target ``r`` is drawn from ``mix(seed, r)`` and its run uses
    ``config.seed = mix(seed, r, 1)``, so runs with different shot budgets
    share targets and starting points, and results do not depend on ``jobs``.
    """
    tasks = []
    for r in range(n_targets):
        target = np.random.default_rng(mix(seed, r)).uniform(0, TWO_PI, 3)
        tasks.append((target, replace(config, seed=mix(seed, r, 1)), noise, amplitudes))
    if jobs > 1 and n_targets > 1:
        with ProcessPoolExecutor(min(jobs, n_targets)) as pool:
            return list(pool.map(_task, tasks))
    return [_task(t) for t in tasks]
