"""Hypersphere Monte-Carlo overlap integration and the distributed-estimation planner.

The overlap of two states is ``(1/pi^M) int chi_A(alpha) chi_B(-alpha) d^{2M} alpha``.
Restricting the integral to the ball ``|alpha|^2 <= kappa M`` and sampling it
uniformly gives an estimator whose error is set by the sample spread and
the per-point characteristic-function error.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from math import ceil, exp, lgamma, log, pi

import numpy as np

from ..errors import DimensionError, NumericalError, ParameterError
from .states import CvState


def log_hypersphere_volume(M, kappa):
    if M < 1 or kappa <= 0:
        raise ParameterError("need M >= 1 and kappa > 0")
    return M * log(pi * kappa * M) - lgamma(M + 1)


def hypersphere_volume(M, kappa):
    """Volume ``(pi kappa M)^M / M!`` of the 2M-ball of radius ``sqrt(kappa M)``."""
    lv = log_hypersphere_volume(M, kappa)
    if lv > 709.0:
        raise NumericalError(f"volume exp({lv:.1f}) overflows; use log_hypersphere_volume")
    return exp(lv)


@dataclass(frozen=True)
class HypersphereSpec:
    M: int
    kappa: float

    def __post_init__(self):
        log_hypersphere_volume(self.M, self.kappa)

    @property
    def radius(self):
        return float(np.sqrt(self.kappa * self.M))

    @property
    def volume(self):
        return hypersphere_volume(self.M, self.kappa)

    @property
    def log_volume(self):
        return log_hypersphere_volume(self.M, self.kappa)


def sample_hypersphere(M, kappa, L, seed=None):
    """``L`` points uniform in the ball ``|alpha|^2 <= kappa M`` of C^M.

    Returns
    -------
    ndarray, shape (L, M), complex
    """
    if L < 1:
        raise ParameterError("need at least one point")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(L, 2 * M))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    u = rng.uniform(size=(L, 1))
    g *= np.sqrt(kappa * M) * u ** (1.0 / (2 * M))
    return g[:, :M] + 1j * g[:, M:]


def disk_noise(rng, shape, radius):
    """Complex noise uniform in the disk of the given radius."""
    if radius == 0:
        return np.zeros(shape, dtype=np.complex128)
    rho = radius * np.sqrt(rng.uniform(size=shape))
    return rho * np.exp(2j * np.pi * rng.uniform(size=shape))


@dataclass(frozen=True)
class MonteCarloResult:
    """``value`` is the real estimate; ``imag`` the discarded imaginary part."""

    value: float
    sigma_L: float
    imag: float
    stderr: float
    L: int


def mc_overlap(a: CvState, b: CvState, spec: HypersphereSpec, L, chi_noise=0.0, seed=None, chunk=200_000):
    """Monte-Carlo estimate of ``Tr[rho_A rho_B]`` over the hypersphere.

    ``sigma_L`` is the sample standard deviation of ``f = chi_A(alpha) chi_B(-alpha)``
    (squared moduli of deviations) and ``stderr = sigma_L |A| / (pi^M sqrt(L))``.
    """
    if a.modes != b.modes or a.modes != spec.M:
        raise DimensionError(f"mode mismatch: {a.modes}, {b.modes}, sphere {spec.M}")
    if L < 2:
        raise ParameterError("need L >= 2")
    if chi_noise < 0:
        raise ParameterError("chi_noise must be non-negative")
    rng = np.random.default_rng(seed)
    pts = sample_hypersphere(spec.M, spec.kappa, L, rng)
    f = np.empty(L, dtype=np.complex128)
    for s in range(0, L, chunk):
        p = pts[s:s + chunk]
        ca = a.chi(p) + disk_noise(rng, len(p), chi_noise)
        cb = b.chi(-p) + disk_noise(rng, len(p), chi_noise)
        f[s:s + chunk] = ca * cb
    scale = exp(spec.log_volume - spec.M * log(pi))
    mean = f.mean()
    sigma = float(np.sqrt(np.sum(np.abs(f - mean) ** 2) / (L - 1)))
    return MonteCarloResult(float(scale * mean.real), sigma, float(scale * mean.imag), scale * sigma / np.sqrt(L), int(L))


@dataclass(frozen=True)
class DistributedPlan:
    eps_tilde: float
    L: int
    N: float
    sigma_L: float
    volume: float
    log_N: float

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


def distributed_plan(eps, delta, spec: HypersphereSpec, sigma_L, c=1.0):
    """Per-point error, number of points and copies for distributed estimation.

    ``eps_tilde = pi^M eps / (8 |A|)``, ``L = (4 sigma_L |A| / (pi^M eps))^2``
    and ``N = c eps_tilde^-4 ln(2 L / delta)``. ``N`` is returned as a float
    since it outgrows machine integers quickly; ``log_N`` stays finite.
    """
    if not 0 < eps < 0.5:
        raise ParameterError("eps must lie in (0, 1/2)")
    if not 0 < delta < 1:
        raise ParameterError("delta must lie in (0, 1)")
    if sigma_L <= 0 or c <= 0:
        raise ParameterError("sigma_L and c must be positive")
    log_ratio = spec.log_volume - spec.M * log(pi)  # ln(|A| / pi^M)
    log_eps_t = log(eps / 8) - log_ratio
    log_L = 2 * (log(4 * sigma_L / eps) + log_ratio)
    # guard the ceiling against round-off from the log-domain evaluation
    L = max(2, int(ceil(exp(min(log_L, 700.0)) * (1 - 1e-12))))
    log_N = log(c) - 4 * log_eps_t + log(log(2 / delta) + log_L)
    N = float(ceil(exp(log_N) * (1 - 1e-12))) if log_N < 700 else float("inf")
    try:
        volume = spec.volume
    except NumericalError:
        volume = float("inf")
    return DistributedPlan(exp(log_eps_t), L, N, float(sigma_L), volume, log_N)


def energy_diagnostic(state: CvState, kappa):
    """Mean photon number per mode and whether it stays below ``kappa``."""
    n = np.asarray(state.mean_photons(), dtype=float)
    return {"mean_photons": n.tolist(), "kappa": kappa, "within_bound": bool(np.all(n <= kappa))}
