"""Simulated overlap experiments on the chip model."""

from __future__ import annotations

import numpy as np

from ..chip.circuit import DETECTED_MODES, INPUT_MODES, DEFAULT_QUDIT, build_overlap_circuit
from ..chip.crosstalk import CrosstalkModel
from ..errors import ParameterError
from ..optics.mesh import compose_from_phases, compose_mesh
from .estimators import ParityTally, bunching_probability, coincidence_estimator, parity_estimator


def circuit_unitary(theta, phi, amplitudes=DEFAULT_QUDIT, crosstalk: CrosstalkModel | None = None, dc_errors=None):
    """Mesh unitary of the overlap circuit, optionally with crosstalk on the heaters."""
    settings = build_overlap_circuit(theta, phi, amplitudes)
    if crosstalk is None:
        return compose_mesh(settings, dc_errors)
    return compose_from_phases(crosstalk.apply(settings.shifter_phases()), dc_errors)


def two_photon_distribution(u, inputs=INPUT_MODES, visibility=1.0):
    """Output probabilities ``P[k, l]`` (``k <= l``) for one photon in each input mode.

    Interference terms are weighted by ``visibility``: the result mixes the
    indistinguishable and distinguishable distributions.
    """
    if not 0 <= visibility <= 1:
        raise ParameterError("visibility must lie in [0, 1]")
    u = np.asarray(u)
    a, b = u[:, inputs[0]], u[:, inputs[1]]
    direct = np.outer(a, b)
    indist = np.abs(direct + direct.T) ** 2
    dist = np.abs(direct) ** 2 + np.abs(direct.T) ** 2
    p = visibility * indist + (1 - visibility) * dist
    # diagonal: same-mode events counted once with the bosonic factor 1/2
    p[np.diag_indices_from(p)] /= 2
    return np.triu(p)


def coincidence_distribution(u, visibility=1.0, detected=DETECTED_MODES):
    """Conditional distribution over distinct-mode pairs among ``detected``.

    Returns
    -------
    pairs : list of (int, int)
    probs : ndarray
        Normalised over the listed pairs.
    """
    p = two_photon_distribution(u, visibility=visibility)
    pairs = [(k, l) for k in detected for l in detected if k < l]
    probs = np.array([p[k, l] for k, l in pairs])
    return pairs, probs / probs.sum()


def odd_mask(pairs):
    return np.array([(k + l) % 2 == 1 for k, l in pairs])


def sample_coincidences(theta, phi, n_shots, crosstalk=None, visibility=1.0, seed=None,
                        amplitudes=DEFAULT_QUDIT, dc_errors=None):
    """Multinomial counts over distinct detector pairs ``(k, l)``."""
    if n_shots < 1:
        raise ParameterError("n_shots must be positive")
    u = circuit_unitary(theta, phi, amplitudes, crosstalk, dc_errors)
    pairs, probs = coincidence_distribution(u, visibility)
    counts = np.random.default_rng(seed).multinomial(n_shots, probs)
    return pairs, counts


def simulate_overlap_experiment(theta, phi, n_shots, crosstalk=None, visibility=1.0, seed=None,
                                amplitudes=DEFAULT_QUDIT, dc_errors=None):
    """Sample click-detector coincidences and return the corrected estimate."""
    pairs, counts = sample_coincidences(theta, phi, n_shots, crosstalk, visibility, seed, amplitudes, dc_errors)
    tally = ParityTally(int(n_shots), int(counts[odd_mask(pairs)].sum()))
    return coincidence_estimator(tally, bunching_probability(amplitudes))


def parity_shots(theta, phi, n_shots, seed=None, amplitudes=DEFAULT_QUDIT, crosstalk=None, visibility=1.0):
    """+/-1 parity outcomes under number-resolving detection on modes 1-8."""
    u = circuit_unitary(theta, phi, amplitudes, crosstalk)
    p = two_photon_distribution(u, visibility=visibility)
    det = DETECTED_MODES
    pairs = [(k, l) for k in det for l in det if k <= l]
    probs = np.array([p[k, l] for k, l in pairs])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(pairs), size=n_shots, p=probs)
    parity = np.where(odd_mask(pairs), -1, 1)
    return parity[idx]


def pnrd_overlap(theta, phi, amplitudes=DEFAULT_QUDIT, crosstalk=None, visibility=1.0):
    """Exact expectation ``1 - 2 P_odd`` of the parity shots."""
    u = circuit_unitary(theta, phi, amplitudes, crosstalk)
    p = two_photon_distribution(u, visibility=visibility)
    det = DETECTED_MODES
    pairs = [(k, l) for k in det for l in det if k <= l]
    probs = np.array([p[k, l] for k, l in pairs])
    return float(1 - 2 * probs[odd_mask(pairs)].sum() / probs.sum())


def output_fidelity(p_ideal, p_exp):
    """Classical fidelity ``sum sqrt(p q)`` of two distributions."""
    p, q = np.asarray(p_ideal, dtype=float), np.asarray(p_exp, dtype=float)
    return float(np.sum(np.sqrt(np.clip(p, 0, None) * np.clip(q, 0, None))))


def circuit_fidelity(theta, phi, crosstalk, amplitudes=DEFAULT_QUDIT, visibility=1.0):
    """Fidelity between the ideal and crosstalk-perturbed coincidence distributions."""
    _, ideal = coincidence_distribution(circuit_unitary(theta, phi, amplitudes), visibility)
    _, noisy = coincidence_distribution(circuit_unitary(theta, phi, amplitudes, crosstalk), visibility)
    return output_fidelity(ideal, noisy)


def overlap_errors(pairs_of_phases, crosstalk: CrosstalkModel, n_shots=1000, seed=0, amplitudes=DEFAULT_QUDIT):
    """Estimated minus exact overlap for a batch of ``(theta, phi)`` pairs."""
    from ..chip.circuit import qudit_overlap

    rng = np.random.default_rng(seed)
    out = []
    for theta, phi in pairs_of_phases:
        est = simulate_overlap_experiment(theta, phi, n_shots, crosstalk, seed=rng.integers(2**63), amplitudes=amplitudes)
        out.append(est.value - qudit_overlap(theta, phi, amplitudes))
    return np.array(out)


__all__ = [
    "circuit_fidelity",
    "circuit_unitary",
    "coincidence_distribution",
    "output_fidelity",
    "overlap_errors",
    "parity_estimator",
    "parity_shots",
    "pnrd_overlap",
    "simulate_overlap_experiment",
    "two_photon_distribution",
]
