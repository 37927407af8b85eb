import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qoverlap.chip import (
    DEFAULT_ANGLES,
    DEFAULT_QUDIT,
    CrosstalkModel,
    QuditSpec,
    SimulatedChip,
    amplitudes_from_angles,
    apply_crosstalk,
    build_overlap_circuit,
    calibrate_chip,
    calibrate_meta_mzi,
    fit_sinusoid,
    neighbor_order,
    qudit_overlap,
    simulate_internal_sweep,
)
from qoverlap.chip.calibration import meta_companions, mzi_power, true_residuals
from qoverlap.chip.circuit import INPUT_MODES, PHI_MODES, THETA_MODES, qudit_vector
from qoverlap.errors import ConfigurationError, FitError, ParameterError, UnsupportedAddressError
from qoverlap.optics import brute_force_evolve, compose_mesh, dc_transfer, mzi_transfer
from qoverlap.overlap import two_photon_distribution

phase3 = st.lists(st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False), min_size=3, max_size=3)
angle = st.floats(0.01, np.pi - 0.01)


def wrap(x):
    return np.angle(np.exp(1j * np.asarray(x)))


class TestAmplitudes:
    def test_pole(self):
        assert np.allclose(amplitudes_from_angles(np.pi, 0.3, 2.0).amplitudes, (1, 0, 0, 0), atol=1e-15)

    def test_default_amplitudes(self):
        a = np.array(amplitudes_from_angles(*DEFAULT_ANGLES).amplitudes)
        p1, p2, p3 = DEFAULT_ANGLES
        assert a[0] == pytest.approx(np.sin(p1 / 2), abs=1e-15)
        assert a[3] == pytest.approx(np.cos(p1 / 2) * np.cos(p2 / 2) * np.cos(p3 / 2), abs=1e-15)
        assert np.allclose(a, [0.41792362, 0.56497501, 0.52547167, 0.47960673], atol=1e-8)

    @given(angle, angle, angle)
    def test_normalised(self, a, b, c):
        assert abs(np.sum(np.square(amplitudes_from_angles(a, b, c).amplitudes)) - 1) <= 1e-12

    def test_rejects(self):
        with pytest.raises(ParameterError):
            amplitudes_from_angles(-0.1, 1, 1)
        with pytest.raises(ParameterError):
            QuditSpec((0.5, 0.5, 0.5, 0.6))


def overlap_oracle(theta, phi, a):
    # independent inner product over the four-mode single-photon basis
    cum_t = [0, theta[0], theta[0] + theta[1], theta[0] + theta[1] + theta[2]]
    cum_p = [0, phi[0], phi[0] + phi[1], phi[0] + phi[1] + phi[2]]
    s = sum(a[k] ** 2 * np.exp(1j * (cum_p[k] - cum_t[k])) for k in range(4))
    return abs(s) ** 2


class TestOverlapCircuit:
    def test_identical_states(self):
        assert qudit_overlap([0, 0, 0], [0, 0, 0]) == pytest.approx(1)

    def test_theta_pi(self):
        a = DEFAULT_QUDIT.amplitudes
        expect = abs(a[0] ** 2 - a[1] ** 2 - a[2] ** 2 - a[3] ** 2) ** 2
        assert qudit_overlap([np.pi, 0, 0], [0, 0, 0]) == pytest.approx(expect)

    @settings(max_examples=30, deadline=None)
    @given(phase3, phase3)
    def test_prepared_qudits(self, theta, phi):
        u = compose_mesh(build_overlap_circuit(theta, phi), columns=range(9))
        a = DEFAULT_QUDIT.amplitudes
        vt = u[list(THETA_MODES), INPUT_MODES[0]]
        vp = u[list(PHI_MODES), INPUT_MODES[1]]
        assert abs(abs(np.vdot(vt, qudit_vector(a, theta))) - 1) <= 1e-10
        assert abs(abs(np.vdot(vp, qudit_vector(a, phi))) - 1) <= 1e-10

    @settings(max_examples=15, deadline=None)
    @given(phase3, phase3)
    def test_brute_force_overlap(self, theta, phi):
        u = compose_mesh(build_overlap_circuit(theta, phi))
        occ = tuple(1 if m in INPUT_MODES else 0 for m in range(10))
        out = brute_force_evolve(u, occ)
        p_odd = sum(p for b, p in zip(out.basis, out.probabilities)
                    if sum(b[k] for k in THETA_MODES) == 1 and sum(b[k] for k in PHI_MODES) == 1)
        assert 1 - 2 * p_odd == pytest.approx(overlap_oracle(theta, phi, DEFAULT_QUDIT.amplitudes), abs=1e-10)

    def test_column9_balanced(self):
        s = build_overlap_circuit([0.1, 0.2, 0.3], [0.3, 0.2, 0.1])
        for i in (1, 3, 5, 7):
            assert s[(i, 9)][1] == pytest.approx(np.pi / 4)

    def test_only_encoding_sigmas_change(self):
        a = build_overlap_circuit([0, 0, 0], [0, 0, 0])
        b = build_overlap_circuit([0.4, -1.0, 2.0], [1.1, 0.3, -0.7])
        changed = {k for k in a.phases if not np.allclose(a[k], b[k])}
        assert changed <= {(0, 8), (2, 8), (1, 7), (6, 8), (8, 8), (7, 7)}
        assert all(a[k][1] == b[k][1] for k in changed)

    @settings(max_examples=50, deadline=None)
    @given(phase3, phase3)
    def test_bunching_independent_of_phases(self, theta, phi):
        u = compose_mesh(build_overlap_circuit(theta, phi))
        p = two_photon_distribution(u)
        assert np.trace(p) == pytest.approx(np.sum(np.array(DEFAULT_QUDIT.amplitudes) ** 4), abs=1e-10)

    def test_bunching_brute_force(self):
        u = compose_mesh(build_overlap_circuit([0.3, 1.2, -0.4], [2.0, 0.1, 0.9]))
        occ = tuple(1 if m in INPUT_MODES else 0 for m in range(10))
        out = brute_force_evolve(u, occ)
        bunched = sum(p for b, p in zip(out.basis, out.probabilities) if max(b) == 2)
        assert bunched == pytest.approx(np.sum(np.array(DEFAULT_QUDIT.amplitudes) ** 4), abs=1e-10)


class TestNeighbors:
    @pytest.mark.parametrize("a,b,order", [((4, 4), (5, 4), 1), ((4, 4), (4, 6), 2), ((0, 0), (9, 9), 4),
                                           ((4, 4), (4, 5), 2), ((4, 4), (5, 5), 2), ((4, 4), (6, 4), 2),
                                           ((4, 4), (5, 6), 3), ((4, 4), (6, 6), 3), ((4, 4), (4, 7), 4)])
    def test_examples(self, a, b, order):
        assert neighbor_order(a, b) == order
        assert neighbor_order(b, a) == order

    def test_identical(self):
        with pytest.raises(ConfigurationError):
            neighbor_order((2, 2), (2, 2))

    def test_matrix_matches_function(self):
        from qoverlap.chip.crosstalk import ORDER
        for a in range(0, 100, 7):
            for b in range(100):
                if a != b:
                    assert ORDER[a, b] == neighbor_order(divmod(a, 10), divmod(b, 10))


class TestCrosstalk:
    def test_identity(self, rng):
        m = CrosstalkModel(k=(0, 0, 0, 0), eta=0, eps=0, seed=3)
        t = rng.uniform(0, 6, (10, 10))
        assert np.array_equal(apply_crosstalk(m, t), t)

    def test_single_aggressor(self):
        m = CrosstalkModel(k=(0.016, 0, 0, 0), eta=0, eps=0, seed=None)
        out = apply_crosstalk(m, {(4, 4): np.pi})
        assert out[(5, 4)] == pytest.approx(0.016 * np.pi, abs=1e-15)
        assert out[(4, 4)] == pytest.approx(np.pi)
        assert out[(4, 6)] == 0

    def test_linear_in_aggressor(self, rng):
        m = CrosstalkModel(eta=0.0, eps=0.0, seed=5)
        t = rng.uniform(0, 6, (10, 10))
        t[2, 3] = 0.0  # victim undriven so the non-linear factor is 1
        grads = []
        for h in (0.1, 0.2, 0.4):
            t2 = t.copy()
            t2[6, 7] += h
            grads.append((m.apply(t2)[2, 3] - m.apply(t)[2, 3]) / h)
        assert np.allclose(grads, grads[0], rtol=0, atol=1e-12)
        assert grads[0] == pytest.approx(m.coupling[23, 67])

    def test_nonlinear_victim(self):
        m = CrosstalkModel(k=(0.016, 0, 0, 0), eta=0.01, eps=0, seed=None)
        t = np.zeros((10, 10))
        t[4, 4], t[5, 4] = np.pi, 2.0
        assert m.apply(t)[5, 4] == pytest.approx(2.0 + 0.016 * np.pi * (1 + 0.01 * 2.0))

    def test_determinism_and_json(self, rng):
        t = rng.uniform(0, 6, (10, 10))
        m1 = CrosstalkModel(seed=42)
        m2 = CrosstalkModel.from_json(m1.to_json())
        assert np.array_equal(m1.apply(t), m2.apply(t))
        assert not np.array_equal(m1.apply(t), CrosstalkModel(seed=43).apply(t))
        assert json.loads(m1.to_json())["seed"] == 42

    def test_realisation_statistics(self):
        m = CrosstalkModel(seed=7)
        assert abs(np.mean(np.abs(m.eps_ij)) - 0.02) < 0.005
        assert abs(np.mean(m.eta_ij) - 0.01) < 0.0005
        order1 = m.coupling[44, 54]
        assert 0.016 * 0.8 < order1 < 0.016 * 1.2
        assert np.all(np.diag(m.coupling) == 0)

    def test_negative_k(self):
        with pytest.raises(ParameterError):
            CrosstalkModel(k=(-0.1, 0, 0, 0))


class TestSweeps:
    def test_power_formula_matches_matrix(self, rng):
        for _ in range(20):
            t1, t2 = rng.uniform(0, 6, 2)
            a, b = rng.uniform(-0.1, 0.1, 2)
            assert mzi_power(t1, t2, a, b) == pytest.approx(abs(mzi_transfer(t1, t2, a, b)[0, 1]) ** 2, abs=1e-14)

    def test_full_visibility(self):
        chip = SimulatedChip(np.zeros((10, 10)))
        _, p = simulate_internal_sweep(chip, (4, 4), 64)
        assert p.max() == pytest.approx(1) and p.min() == pytest.approx(0, abs=1e-15)

    def test_reduced_visibility(self):
        alpha = beta = 0.028
        chip = SimulatedChip(np.zeros((10, 10)), {(4, 4): (alpha, beta)})
        _, p = simulate_internal_sweep(chip, (4, 4), 64)
        assert p.max() == pytest.approx(np.cos(alpha + beta) ** 2, abs=1e-12)
        assert p.min() == pytest.approx(np.sin(beta - alpha) ** 2, abs=1e-12)

    def test_internal_residual_recovery(self):
        chip = SimulatedChip.random(11, dc_scale=0.03)
        for i, j in [(0, 0), (3, 5), (8, 8)]:
            x, p = simulate_internal_sweep(chip, (i, j), 64)
            _, _, phase = fit_sinusoid(x, p)
            assert abs(wrap(phase - (chip.residuals[i, j] - chip.residuals[i + 1, j]))) <= 1e-3

    def test_few_points(self):
        with pytest.raises(ParameterError):
            simulate_internal_sweep(SimulatedChip(np.zeros((10, 10))), (0, 0), 4)


class TestFitSinusoid:
    def test_exact(self):
        x = np.linspace(0, 2 * np.pi, 17, endpoint=False)
        o, a, ph = fit_sinusoid(x, 0.3 + 1.7 * np.cos(x - 2.1))
        assert (o, a, ph) == pytest.approx((0.3, 1.7, -2.1), abs=1e-12)

    def test_noisy_within_ci(self):
        r = np.random.default_rng(8)
        x = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        sigma = 0.01
        y = 0.5 + 0.4 * np.cos(x + 0.9) + r.normal(0, sigma, x.size)
        o, a, ph = fit_sinusoid(x, y)
        # for equispaced points, offset se = sigma/sqrt(n), p and q se = sigma*sqrt(2/n)
        n = x.size
        assert abs(o - 0.5) <= 3 * sigma / np.sqrt(n)
        assert abs(a - 0.4) <= 3 * sigma * np.sqrt(2 / n)
        assert abs(ph - 0.9) <= 3 * sigma * np.sqrt(2 / n) / 0.4

    def test_constant(self):
        assert fit_sinusoid(np.linspace(0, 6, 8), np.full(8, 2.0)) == pytest.approx((2.0, 0.0, 0.0))

    def test_rank_deficient(self):
        with pytest.raises(FitError):
            fit_sinusoid(np.ones(8), np.arange(8.0))

    @given(st.floats(-np.pi + 1e-6, np.pi), st.floats(0.1, 3))
    def test_phase_range(self, phase, amp):
        x = np.linspace(0, 2 * np.pi, 12, endpoint=False)
        _, a, ph = fit_sinusoid(x, amp * np.cos(x + phase))
        assert -np.pi < ph <= np.pi
        assert abs(wrap(ph - phase)) < 1e-9 and a == pytest.approx(amp)


def meta_phase_oracle(chip, target, internal):
    # explicit 2x2 products along the two arms of the meta-MZI
    i, j = target
    ref, first, last = meta_companions(target)
    b = chip.residuals

    def block(addr, delta, sigma=0.0):
        r, c = addr
        d = delta - internal[addr] / 2
        return mzi_transfer(sigma + d + b[r, c], sigma - d + b[r + 1, c], *chip.dc(addr))

    t1 = block(first, np.pi / 4)
    t3 = block(last, np.pi / 4)
    tu = block(target, np.pi / 2)[0, 0]
    rl = block(ref, np.pi / 2)[1, 1]
    upper = t3[0, 0] * rl * t1[0, 1]
    lower = t3[0, 1] * tu * t1[1, 1]
    return np.angle(lower * np.conj(upper))


class TestMetaMzi:
    def test_unsupported(self):
        chip = SimulatedChip(np.zeros((10, 10)))
        for addr in [(0, 4), (1, 5), (4, 0), (3, 9)]:
            with pytest.raises(UnsupportedAddressError):
                calibrate_meta_mzi(chip, addr)

    def test_zero_dc_recovery(self):
        chip = SimulatedChip.random(2)
        truth = true_residuals(chip)
        for i, j in [(4, 4), (5, 3), (8, 2), (2, 8)]:
            got = calibrate_meta_mzi(chip, (i, j))
            ref = (i - 2, j)
            sig = lambda r, c: truth.sigma.get((r, c), 0.0) if r >= 2 else 0.0
            assert abs(wrap(got - (sig(i, j) - sig(*ref)))) <= 1e-6

    def test_dc_bias_matches_oracle(self):
        chip = SimulatedChip(np.zeros((10, 10)), {a: (0.03, -0.03) for a in [(2, 4), (4, 4), (3, 3), (3, 5)]})
        internal = {a: 0.0 for a in [(2, 4), (4, 4), (3, 3), (3, 5)]}
        got = calibrate_meta_mzi(chip, (4, 4), internal=internal)
        ideal = SimulatedChip(np.zeros((10, 10)))
        xi = wrap(meta_phase_oracle(chip, (4, 4), internal) - meta_phase_oracle(ideal, (4, 4), internal))
        assert got == pytest.approx(xi, abs=1e-10)
        assert 0 < abs(xi) < 0.1

    def test_idempotent(self):
        chip = SimulatedChip.random(4, dc_scale=0.02)
        assert abs(calibrate_meta_mzi(chip, (6, 4)) - calibrate_meta_mzi(chip, (6, 4))) < 1e-9

    def test_full_pipeline(self):
        chip = SimulatedChip.random(9)
        got, truth = calibrate_chip(chip), true_residuals(chip)
        assert set(got.sigma) == set(truth.sigma)
        assert max(abs(wrap(got.internal[a] - truth.internal[a])) for a in truth.internal) <= 1e-3
        assert max(abs(wrap(got.sigma[a] - truth.sigma[a])) for a in truth.sigma) <= 1e-3
