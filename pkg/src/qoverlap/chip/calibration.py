"""Simulated calibration of residual phases via single-MZI and meta-MZI sweeps.

The simulated chip hides a residual phase ``b`` on every phaseshifter and
coupler errors on every MZI. Calibration works directly in phase units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import FitError, ParameterError, UnsupportedAddressError
from ..optics.mesh import N_COLUMNS, N_MODES, compose_from_phases, is_mzi_address, mzi_addresses


@dataclass(frozen=True)
class SimulatedChip:
    """Chip with hidden residual phases and coupler errors.

    Attributes
    ----------
    residuals : ndarray, shape (10, 10)
        Phase ``b_ij`` present on shifter ``(i, j)`` with no drive.
    dc_errors : dict
        ``(i, j) -> (alpha, beta)`` for each MZI.
    noise_std : float
        Std of additive Gaussian noise on every power reading.
    seed : int
        Seed for the reading noise.
    """

    residuals: np.ndarray
    dc_errors: dict = field(default_factory=dict)
    noise_std: float = 0.0
    seed: int = 0

    @classmethod
    def random(cls, seed, residual_scale=np.pi, dc_scale=0.0, noise_std=0.0):
        rng = np.random.default_rng(seed)
        b = rng.uniform(-residual_scale, residual_scale, (N_MODES, N_COLUMNS))
        dc = {a: tuple(rng.uniform(-dc_scale, dc_scale, 2)) for a in mzi_addresses()}
        return cls(b, dc, noise_std, seed)

    def dc(self, addr):
        return self.dc_errors.get(tuple(addr), (0.0, 0.0))

    def _noise(self, n, tag):
        if self.noise_std == 0:
            return np.zeros(n)
        return np.random.default_rng([self.seed, *tag]).normal(0.0, self.noise_std, n)


def mzi_power(theta1, theta2, alpha=0.0, beta=0.0):
    """Upper-output power of an MZI fed with unit power in its lower input."""
    s2 = np.sin(beta - alpha) ** 2
    return s2 + 0.5 * (np.cos(beta + alpha) ** 2 - s2) * (np.cos(theta1 - theta2) + 1.0)


def simulate_internal_sweep(chip: SimulatedChip, mzi, n_points=64):
    """Sweep the upper internal phaseshifter of ``mzi`` over one period.

    Returns
    -------
    x : ndarray
        Applied phase on shifter ``(i, j)``; shifter ``(i+1, j)`` is undriven.
    power : ndarray
        Upper-output power for unit input in the lower port.
    """
    i, j = mzi
    if not is_mzi_address(i, j):
        raise UnsupportedAddressError(f"({i},{j}) is not an MZI")
    if n_points < 8:
        raise ParameterError("an internal sweep needs at least 8 points")
    x = np.linspace(0.0, 2 * np.pi, n_points, endpoint=False)
    a, b = chip.dc((i, j))
    p = mzi_power(x + chip.residuals[i, j], chip.residuals[i + 1, j], a, b)
    return x, p + chip._noise(n_points, (0, i, j))


def fit_sinusoid(x, y):
    """Least-squares fit of ``y = offset + amplitude cos(x + phase)``.

    Returns
    -------
    offset, amplitude, phase : float
        ``amplitude >= 0`` and ``phase in (-pi, pi]``; a flat curve gives
        ``amplitude = 0`` and ``phase = 0``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 4:
        raise FitError("need at least 4 (x, y) samples")
    design = np.column_stack([np.ones_like(x), np.cos(x), np.sin(x)])
    if np.linalg.matrix_rank(design) < 3:
        raise FitError("sweep points do not determine a sinusoid")
    (offset, p, q), *_ = np.linalg.lstsq(design, y, rcond=None)
    amplitude = float(np.hypot(p, q))
    if amplitude <= 1e-12 * max(1.0, float(np.max(np.abs(y)))):
        return float(offset), 0.0, 0.0
    phase = float(np.arctan2(-q, p))
    if phase == -np.pi:
        phase = np.pi
    return float(offset), amplitude, phase


def calibrate_internal(chip: SimulatedChip, mzi, n_points=64):
    """Fitted residual relative phase ``b_i - b_{i+1}`` of one MZI."""
    x, p = simulate_internal_sweep(chip, mzi, n_points)
    return fit_sinusoid(x, p)[2]


def meta_companions(target):
    """Reference and splitter MZIs ``(i-2, j), (i-1, j-1), (i-1, j+1)`` of a meta-MZI."""
    i, j = target
    if not is_mzi_address(i, j) or i < 2 or j < 1 or j > N_COLUMNS - 2:
        raise UnsupportedAddressError(f"MZI ({i},{j}) has no meta-MZI companions on the grid")
    return (i - 2, j), (i - 1, j - 1), (i - 1, j + 1)


def _meta_sweep(chip, target, internal, n_points, residuals, dc_errors):
    i, j = target
    ref, first, last = meta_companions(target)
    # both column-j MZIs in bar so each keeps its arm; companions balanced
    deltas = {target: np.pi / 2, ref: np.pi / 2, first: np.pi / 4, last: np.pi / 4}
    base = np.zeros((N_MODES, N_COLUMNS))
    for (r, c), d in deltas.items():
        d_set = d - internal.get((r, c), 0.0) / 2
        base[r, c] = d_set
        base[r + 1, c] = -d_set
    s = np.linspace(0.0, 2 * np.pi, n_points, endpoint=False)
    power = np.empty(n_points)
    for k, sigma in enumerate(s):
        phases = base.copy()
        phases[i, j] += sigma
        phases[i + 1, j] += sigma
        u = compose_from_phases(phases + residuals, dc_errors, columns=(j - 1, j, j + 1))
        power[k] = abs(u[i - 1, i]) ** 2
    return s, power


def calibrate_meta_mzi(chip: SimulatedChip, target, n_points=64, internal=None):
    """Residual MZI phase of ``target`` relative to MZI ``(i-2, j)``.

    The target and reference are set to bar, the two flanking MZIs to
    balanced, and the target's MZI phase is swept. The fitted phase, minus
    the phase of the same sweep on an error-free chip, estimates
    ``(b_i + b_{i+1})/2 - (b_{i-2} + b_{i-1})/2`` up to a small coupler-induced
    error.

    Parameters
    ----------
    internal : dict, optional
        Known internal residuals ``(i, j) -> b_i - b_{i+1}``; fitted from
        internal sweeps when omitted.
    """
    ref, first, last = meta_companions(target)
    if internal is None:
        internal = {a: calibrate_internal(chip, a) for a in (target, ref, first, last)}
    s, p = _meta_sweep(chip, target, internal, n_points, chip.residuals, chip.dc_errors)
    p = p + chip._noise(n_points, (1, *target))
    _, _, phase = fit_sinusoid(s, p)
    s0, p0 = _meta_sweep(chip, target, {}, n_points, np.zeros((N_MODES, N_COLUMNS)), {})
    _, _, phase0 = fit_sinusoid(s0, p0)
    return _wrap(phase - phase0)


@dataclass(frozen=True)
class CalibrationResult:
    """Recovered residuals.

    ``internal[(i, j)]`` is ``b_i - b_{i+1}`` (wrapped). ``sigma[(i, j)]`` is
    the MZI-phase residual relative to the top MZI of the same column with
    the same row parity, chained through meta-MZIs (wrapped).
    """

    internal: dict
    sigma: dict


def calibrate_chip(chip: SimulatedChip, n_points=64):
    """Run internal sweeps on all MZIs, then chain meta-MZI sweeps down each column."""
    internal = {a: calibrate_internal(chip, a, n_points) for a in mzi_addresses()}
    sigma = {}
    for i, j in sorted(mzi_addresses(), key=lambda a: (a[1], a[0])):
        if j in (0, N_COLUMNS - 1) or i < 2:
            continue
        rel = calibrate_meta_mzi(chip, (i, j), n_points, internal)
        sigma[(i, j)] = _wrap(sigma.get((i - 2, j), 0.0) + rel)
    return CalibrationResult(internal, sigma)


def _wrap(x):
    return float(np.angle(np.exp(1j * x)))


def true_residuals(chip: SimulatedChip):
    """Ground truth in the gauge of :class:`CalibrationResult`.

    ``(sigma, delta)`` and ``(sigma + pi, delta + pi)`` give the same MZI, so
    the MZI-phase residual is taken on the branch where the internal residual
    is wrapped, matching what the sweeps observe.
    """
    b = chip.residuals

    def sigma_res(i, j):
        d = b[i, j] - b[i + 1, j]
        return (b[i, j] + b[i + 1, j]) / 2 + (_wrap(d) - d) / 2

    internal = {(i, j): _wrap(b[i, j] - b[i + 1, j]) for i, j in mzi_addresses()}
    sigma = {}
    for i, j in mzi_addresses():
        if j in (0, N_COLUMNS - 1) or i < 2:
            continue
        sigma[(i, j)] = _wrap(sigma_res(i, j) - sigma_res(i % 2, j))
    return CalibrationResult(internal, sigma)
