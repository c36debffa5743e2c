import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghz_teleport.channel import Scheme, SchemeConfig
from ghz_teleport.indexsum import wide_fidelity
from ghz_teleport.linalg import SX, SZ, I2, kron_ops
from ghz_teleport.noise import CHANNEL_LABELS, NoiseKind, NoiseSpec
from ghz_teleport.protocol import (
    InputState,
    Outcome,
    all_outcomes,
    correction_for,
    fidelity_from_tensor,
    measurement_ket,
    per_input_fidelity_closed,
    projector_for,
    teleport,
    teleport_dense,
    transfer_tensor,
)

Q = math.pi / 4
R = 1 / math.sqrt(2)
SCHEMES = list(Scheme)
NOISY = [NoiseKind.BIT_FLIP, NoiseKind.PHASE_FLIP, NoiseKind.DEPOLARIZING]
angles = st.floats(0.05, math.pi / 2 - 0.05)


def random_inputs(n, seed=7):
    rng = np.random.default_rng(seed)
    return [InputState.random(rng) for _ in range(n)]


def sum_form(scheme, o):
    """Correction assembled from signed outer products |k,l,m><k',l',m'|."""
    a = lambda e, k: (-1) ** (e * k)
    u = np.zeros((8, 8))
    for k, l, m in itertools.product((0, 1), repeat=3):
        if scheme is Scheme.EPR3:
            coef = a(o["mu"], k) * a(o["nu"], l) * a(o["epsilon"], m)
            col = (k ^ o["lambda"], l ^ o["omega"], m ^ o["tau"])
        else:
            coef = a(o["mu"], k) * a(o["nu"], l ^ o["tau"])
            col = (k ^ o["lambda"], l ^ o["tau"], m ^ o["lambda"])
        u[4 * k + 2 * l + m, 4 * col[0] + 2 * col[1] + col[2]] = coef
    return u


class TestOutcome:
    def test_index_round_trip(self):
        for scheme in SCHEMES:
            for i in range(64):
                assert Outcome.from_index(scheme, i).index == i

    def test_ghz_index_layout(self):
        o = Outcome(Scheme.GHZ2, (1, 0, 1, 0, 1, 1))
        n = o.named()
        assert o.index == 8 * (4 * n["mu"] + 2 * n["lambda"] + n["omega"]) + (
            4 * n["nu"] + 2 * n["tau"] + n["epsilon"]
        )
        assert (n["mu"], n["omega"], n["tau"], n["epsilon"]) == (1, 1, 1, 1)

    def test_bad_outcomes(self):
        with pytest.raises(ValueError):
            Outcome(Scheme.EPR3, (0, 1))
        with pytest.raises(ValueError):
            Outcome(Scheme.EPR3, (0, 1, 2, 0, 0, 0))
        with pytest.raises(ValueError):
            Outcome.from_index(Scheme.EPR3, 64)


class TestCorrections:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_matches_sum_form(self, scheme):
        for o in all_outcomes(scheme):
            u = correction_for(scheme, o)
            assert u.is_unitary()
            np.testing.assert_array_equal(u.matrix, sum_form(scheme, o.named()))

    def test_zero_outcome_is_identity(self):
        for scheme in SCHEMES:
            np.testing.assert_array_equal(correction_for(scheme, Outcome(scheme, (0,) * 6)).matrix, np.eye(8))

    def test_epr_mu(self):
        u = correction_for(Scheme.EPR3, Outcome(Scheme.EPR3, (1, 0, 0, 0, 0, 0)))
        np.testing.assert_array_equal(u.matrix, kron_ops([SZ, I2, I2]).matrix)

    def test_ghz_tau_flips_middle_qubit_only(self):
        # the sum form moves l -> l xor tau and leaves m alone
        o = Outcome.from_index(Scheme.GHZ2, 0b000010)
        assert o["tau"] == 1
        np.testing.assert_array_equal(correction_for(Scheme.GHZ2, o).matrix, kron_ops([I2, SX, I2]).matrix)

    def test_ghz_lambda_flips_outer_qubits(self):
        o = Outcome.from_index(Scheme.GHZ2, 0b010000)
        assert o["lambda"] == 1
        np.testing.assert_array_equal(correction_for(Scheme.GHZ2, o).matrix, kron_ops([SX, I2, SX]).matrix)


class TestProjectors:
    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("phi", [0.3, Q, 1.2])
    def test_complete_and_idempotent(self, scheme, phi):
        total = np.zeros((64, 64), dtype=complex)
        for o in all_outcomes(scheme):
            p = projector_for(scheme, o, phi).matrix
            np.testing.assert_allclose(p @ p, p, atol=1e-14)
            assert np.trace(p).real == pytest.approx(1.0)
            total += p
        np.testing.assert_allclose(total, np.eye(64), atol=1e-12)

    def test_epr_zero_outcome_is_three_bell_pairs(self):
        v = measurement_ket(Scheme.EPR3, Outcome(Scheme.EPR3, (0,) * 6), Q).amplitudes
        expected = np.zeros(64)
        # Phi+ on (1,2), (3,4), (5,6): equal bits within each pair
        for a, b, c in itertools.product((0, 1), repeat=3):
            expected[int(f"{a}{a}{b}{b}{c}{c}", 2)] = R**3
        np.testing.assert_allclose(v, expected, atol=1e-15)

    def test_ghz_zero_outcome_is_two_ghz_kets(self):
        v = measurement_ket(Scheme.GHZ2, Outcome(Scheme.GHZ2, (0,) * 6), Q).amplitudes
        expected = np.zeros(64)
        # GHZ on (1,4,5) and on (2,3,6); bit string is qubits 1..6
        for a, b in itertools.product((0, 1), repeat=2):
            bits = {1: a, 4: a, 5: a, 2: b, 3: b, 6: b}
            expected[int("".join(str(bits[q]) for q in range(1, 7)), 2)] = 0.5
        np.testing.assert_allclose(v, expected, atol=1e-15)


class TestInputState:
    def test_normalization_enforced(self):
        with pytest.raises(ValueError):
            InputState(1.0, 1.0)

    def test_angle_range(self):
        with pytest.raises(ValueError):
            InputState.from_angles(2.0, 0.0)

    def test_ket(self):
        amps = InputState.from_angles(0.3, 1.1).ket().amplitudes
        assert amps[0] == pytest.approx(math.cos(0.3))
        assert amps[7] == pytest.approx(np.exp(1.1j) * math.sin(0.3))
        assert np.count_nonzero(amps) == 2


class TestIdeal:
    @pytest.mark.parametrize("inp", random_inputs(5))
    def test_epr_all_outcomes_equal(self, backend, inp):
        run = teleport(inp, SchemeConfig(Scheme.EPR3, Q, Q))
        assert run.total_fidelity == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(run.probabilities(), 1 / 64, atol=1e-14)
        assert all(r.conditional_fidelity == pytest.approx(1.0) for r in run.records)

    @pytest.mark.parametrize("inp", random_inputs(5))
    def test_ghz_sixteen_outcomes(self, backend, inp):
        run = teleport(inp, SchemeConfig(Scheme.GHZ2, Q, Q))
        assert run.total_fidelity == pytest.approx(1.0, abs=1e-12)
        nz = run.nonzero()
        assert len(nz) == 16
        assert all(r.outcome["omega"] == 0 and r.outcome["epsilon"] == 0 for r in nz)
        np.testing.assert_allclose([r.probability for r in nz], 1 / 16, atol=1e-14)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("kind", NOISY)
def test_probabilities_sum_to_one(scheme, kind):
    for q in CHANNEL_LABELS:
        run = teleport(InputState.from_angles(0.4, 2.0), SchemeConfig(scheme, 0.5, 1.0), NoiseSpec(kind, 0.2, q))
        assert run.probabilities().sum() == pytest.approx(1.0, abs=1e-12)
        assert run.weighted_fidelity() == pytest.approx(run.total_fidelity, abs=1e-12)
        for r in run.nonzero():
            r.corrected_state.check(normalized=True)


@pytest.mark.parametrize("kind", list(NoiseKind))
def test_ghz_omega_outcomes_never_occur(kind):
    cfg = SchemeConfig(Scheme.GHZ2, 0.35, 1.05)
    for q in CHANNEL_LABELS:
        noise = NoiseSpec(kind, 0.3, q if kind is not NoiseKind.NONE else "uniform")
        run = teleport(InputState.from_angles(0.7, 0.2), cfg, noise)
        for r in run.records:
            if r.outcome["omega"]:
                assert r.probability < 1e-12
                assert r.corrected_state is None and r.conditional_fidelity is None


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("noise", [NoiseSpec(), NoiseSpec(NoiseKind.DEPOLARIZING, 0.2, 8), NoiseSpec(NoiseKind.BIT_FLIP, 0.1, 2)])
def test_dense_route_agrees(backend, scheme, noise):
    inp = InputState.from_angles(0.9, 0.4)
    cfg = SchemeConfig(scheme, 0.6, 0.3)
    run = teleport(inp, cfg, noise)
    dense = teleport_dense(inp, cfg, noise)
    for r in run.records:
        assert np.trace(dense[r.outcome.index]).real == pytest.approx(r.probability, abs=1e-14)
        if r.corrected_state is not None:
            np.testing.assert_allclose(dense[r.outcome.index] / r.probability, r.corrected_state.matrix, atol=1e-12)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("kind", NOISY)
def test_transfer_tensor_reproduces_runs(backend, scheme, kind):
    cfg = SchemeConfig(scheme, 0.45, 0.95)
    noise = NoiseSpec(kind, 0.15, 6)
    T = transfer_tensor(cfg, noise)
    for inp in random_inputs(4, seed=3):
        expected = teleport(inp, cfg, noise).total_fidelity
        assert fidelity_from_tensor(T, inp.c0, inp.c1) == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("kind", list(NoiseKind))
def test_index_sum_formulas(backend, scheme, kind):
    cfg = SchemeConfig(scheme, 0.7, 0.4)
    for q in (2, 6, 9):
        noise = NoiseSpec(kind, 0.2, q) if kind is not NoiseKind.NONE else NoiseSpec()
        for inp in random_inputs(2, seed=q):
            assert wide_fidelity(inp, cfg, noise) == pytest.approx(
                teleport(inp, cfg, noise).total_fidelity, abs=1e-12
            )


class TestPerInputClosedForms:
    def test_epr_value(self):
        run = teleport(InputState.equal(), SchemeConfig(Scheme.EPR3, math.pi / 6, Q))
        expected = 0.5 + 32 * (math.sqrt(3) / 8) ** 3
        assert expected == pytest.approx(0.8248, abs=1e-4)
        assert run.total_fidelity == pytest.approx(expected, abs=1e-12)

    def test_ghz_value(self):
        run = teleport(InputState.equal(), SchemeConfig(Scheme.GHZ2, math.pi / 6, Q))
        assert run.total_fidelity == pytest.approx(0.875, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(theta=angles, phi=angles, t0=st.floats(0, math.pi / 2), ph=st.floats(0, 2 * math.pi))
    def test_property(self, theta, phi, t0, ph):
        inp = InputState.from_angles(t0, ph)
        for scheme in SCHEMES:
            sim = teleport(inp, SchemeConfig(scheme, theta, phi)).total_fidelity
            assert sim == pytest.approx(per_input_fidelity_closed(scheme, inp, theta, phi), abs=1e-10)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_classical_bit_teleports_perfectly(self, scheme):
        inp = InputState(1.0, 0.0)
        for theta, phi in ((0.2, 1.3), (0.9, 0.1)):
            cfg = SchemeConfig(scheme, theta, phi)
            assert teleport(inp, cfg).total_fidelity == pytest.approx(1.0, abs=1e-12)
            for q in CHANNEL_LABELS:
                noisy = teleport(inp, cfg, NoiseSpec(NoiseKind.PHASE_FLIP, 0.3, q))
                assert noisy.total_fidelity == pytest.approx(1.0, abs=1e-12)

    def test_rejects_noise(self):
        with pytest.raises(ValueError):
            per_input_fidelity_closed(Scheme.EPR3, InputState.equal(), 0.3, 0.3, NoiseSpec(NoiseKind.BIT_FLIP, 0.1))
