"""Overlap estimators and sample-complexity calculators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import ceil, log

import numpy as np

from ..errors import ConfigurationError, DimensionError, ParameterError

DEFAULT_DELTA = 1 / 3


@dataclass(frozen=True)
class ParityTally:
    """Post-selected two-photon event counts."""

    n_total: int
    n_odd: int

    def __post_init__(self):
        if self.n_total < 0 or not 0 <= self.n_odd <= self.n_total:
            raise ParameterError(f"invalid tally n_odd={self.n_odd}, n_total={self.n_total}")


def hoeffding_radius(n_total, delta=DEFAULT_DELTA):
    """Additive error reached with probability ``1 - delta`` after ``n_total`` +/-1 shots."""
    if n_total < 1:
        raise ParameterError("radius needs at least one shot")
    if not 0 < delta < 1:
        raise ParameterError("delta must lie in (0, 1)")
    return float(np.sqrt(2.0 * np.log(2.0 / delta) / n_total))


@dataclass(frozen=True)
class OverlapEstimate:
    """Overlap estimate with its tally.

    ``value`` is not clipped and may fall slightly outside ``[0, 1]``.
    """

    value: float
    tally: ParityTally
    bunching_R: float = 0.0

    def hoeffding_radius(self, delta=DEFAULT_DELTA):
        return hoeffding_radius(self.tally.n_total, delta)

    def to_dict(self, delta=DEFAULT_DELTA):
        return {
            "value": self.value,
            "n_total": self.tally.n_total,
            "n_odd": self.tally.n_odd,
            "R": self.bunching_R,
            "eps_at_delta": self.hoeffding_radius(delta),
        }

    def to_json(self, delta=DEFAULT_DELTA):
        return json.dumps(self.to_dict(delta), sort_keys=True)


def exact_overlap(a, b):
    """``|<a|b>|^2`` of two pure states on the same Fock basis."""
    if a.basis != b.basis:
        raise DimensionError("states live on different Fock bases")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def parity_estimator(shots):
    """Mean of +/-1 parity outcomes (number-resolving detection)."""
    x = np.asarray(shots)
    if x.size == 0:
        raise ConfigurationError("no shots to average")
    if not np.all(np.isin(x, (-1, 1))):
        raise ParameterError("parity shots must be +1 or -1")
    tally = ParityTally(int(x.size), int(np.count_nonzero(x == -1)))
    return OverlapEstimate(float(np.mean(x)), tally, 0.0)


def coincidence_estimator(tally: ParityTally, R: float):
    """Click-detector estimate ``1 - 2 (1 - R) n_odd / n_total``.

    ``R`` is the probability that both photons leave in the same mode; those
    events are invisible to click detectors and rescale the odd fraction.
    """
    if not 0 <= R < 1:
        raise ParameterError(f"bunching probability must lie in [0, 1), got {R}")
    if tally.n_total < 1:
        raise ParameterError("tally has no events")
    return OverlapEstimate(1.0 - 2.0 * (1.0 - R) * tally.n_odd / tally.n_total, tally, float(R))


def _check_eps_delta(eps, delta):
    if not (0 < eps < 0.5 and 0 < delta < 0.5):
        raise ParameterError(f"need 0 < eps < 1/2 and 0 < delta < 1/2, got eps={eps}, delta={delta}")


def hoeffding_samples(eps, delta=DEFAULT_DELTA):
    """Shots sufficient for additive error ``eps`` with failure probability ``delta``."""
    _check_eps_delta(eps, delta)
    return int(ceil(2.0 * log(2.0 / delta) / eps**2))


def helstrom_lower_bound(eps, delta=DEFAULT_DELTA):
    """Shots any strategy needs, from optimal two-hypothesis discrimination."""
    _check_eps_delta(eps, delta)
    return int(ceil((0.5 - delta) ** 2 / eps**2))


def bunching_probability(amplitudes):
    """``R = sum_i A_i^4`` for two photons sharing one amplitude profile."""
    a = np.asarray(amplitudes, dtype=float)
    return float(np.sum(a**4))
