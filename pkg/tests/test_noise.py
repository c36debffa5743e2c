import math

import numpy as np
import pytest
from conftest import random_density

from ghz_teleport.channel import Scheme, SchemeConfig, build_channel, gamma_tensor
from ghz_teleport.linalg import DensityOperator, QubitMap, partial_trace
from ghz_teleport.noise import (
    CHANNEL_LABELS,
    COVERED,
    NoiseKind,
    NoiseSpec,
    apply_noise,
    closed_gamma,
    kraus_set,
    noisy_channel,
    noisy_gamma_check,
    weak_noise_diagnostics,
)

ONE = QubitMap((1,))
PAIR = QubitMap((1, 2))
KINDS = list(NoiseKind)
X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1])


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("p", [0.0, 0.1, 0.25, 0.6, 1.0])
def test_kraus_completeness(kind, p):
    total = sum(a.dagger().matrix @ a.matrix for a in kraus_set(kind, p))
    np.testing.assert_allclose(total, np.eye(2), atol=1e-14)


def test_noiseless_limit_is_identity():
    ops = kraus_set(NoiseKind.BIT_FLIP, 0.0)
    np.testing.assert_allclose(ops[0].matrix, np.eye(2))
    assert all(np.allclose(a.matrix, 0) for a in ops[1:])


def test_phase_flip_operator_norms():
    ops = kraus_set(NoiseKind.PHASE_FLIP, 0.25)
    norms = [np.linalg.norm(a.matrix, 2) for a in ops]
    np.testing.assert_allclose(norms, [math.sqrt(0.75), math.sqrt(0.25)])


def test_bit_flip_on_ground_state():
    p = 0.3
    out = apply_noise(DensityOperator(np.diag([1.0, 0.0])), 1, NoiseKind.BIT_FLIP, p, ONE)
    np.testing.assert_allclose(out.matrix, np.diag([1 - p, p]), atol=1e-15)


def test_phase_flip_leaves_diagonal_states():
    rho = DensityOperator(np.diag([0.2, 0.8]))
    out = apply_noise(rho, 1, NoiseKind.PHASE_FLIP, 0.4, ONE)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-15)


def test_depolarizing_expansion_on_bell_pair():
    p = 0.75
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    rho = np.outer(bell, bell)
    # four Kraus terms written out on the first qubit
    terms = [(1 - p) * rho] + [
        (p / 3) * np.kron(s, np.eye(2)) @ rho @ np.kron(s, np.eye(2)).conj().T for s in (X, Y, Z)
    ]
    expanded = sum(terms)
    other = partial_trace(DensityOperator(rho), [2], PAIR).matrix
    identity_form = (1 - 4 * p / 3) * rho + (2 * p / 3) * np.kron(np.eye(2), other)
    got = apply_noise(DensityOperator(rho), 1, NoiseKind.DEPOLARIZING, p, PAIR).matrix
    np.testing.assert_allclose(got, expanded, atol=1e-15)
    np.testing.assert_allclose(got, identity_form, atol=1e-15)
    red = partial_trace(DensityOperator(got), [1], PAIR).matrix
    np.testing.assert_allclose(red, np.eye(2) / 2, atol=1e-15)


def test_depolarizing_convex_identity_on_random_states(backend, rng):
    for p in (0.1, 0.4):
        rho = random_density(rng, 2)
        other = partial_trace(DensityOperator(rho), [2], PAIR).matrix
        expected = (1 - 4 * p / 3) * rho + (2 * p / 3) * np.kron(np.eye(2), other)
        got = apply_noise(DensityOperator(rho), 1, NoiseKind.DEPOLARIZING, p, PAIR).matrix
        np.testing.assert_allclose(got, expected, atol=1e-14)


def test_full_flip_twice_restores(rng):
    rho = DensityOperator(random_density(rng, 2))
    once = apply_noise(rho, 2, NoiseKind.BIT_FLIP, 1.0, PAIR)
    twice = apply_noise(once, 2, NoiseKind.BIT_FLIP, 1.0, PAIR)
    np.testing.assert_allclose(twice.matrix, rho.matrix, atol=1e-15)


@pytest.mark.parametrize("scheme", list(Scheme))
@pytest.mark.parametrize("kind", KINDS[1:])
@pytest.mark.parametrize("qubit", CHANNEL_LABELS)
def test_noisy_channel_stays_a_state(scheme, kind, qubit):
    ch = noisy_channel(SchemeConfig(scheme, 0.4, 0.9), NoiseSpec(kind, 0.2, qubit))
    ch.rho.check(normalized=True)


def test_unknown_qubit_rejected():
    with pytest.raises(KeyError):
        apply_noise(DensityOperator(np.eye(4) / 4), 5, NoiseKind.BIT_FLIP, 0.1, PAIR)


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_probability_range(bad):
    with pytest.raises(ValueError):
        NoiseSpec(NoiseKind.BIT_FLIP, bad)
    with pytest.raises(ValueError):
        kraus_set(NoiseKind.BIT_FLIP, bad)


@pytest.mark.parametrize("bad", [1, 3, 10, "nine"])
def test_placement_range(bad):
    with pytest.raises(ValueError):
        NoiseSpec(NoiseKind.BIT_FLIP, 0.1, bad)


def test_uniform_must_be_resolved():
    with pytest.raises(ValueError, match="uniform"):
        noisy_channel(SchemeConfig(Scheme.EPR3, 0.3, 0.3), NoiseSpec(NoiseKind.BIT_FLIP, 0.1))


def test_spec_helpers():
    spec = NoiseSpec(NoiseKind.DEPOLARIZING, 0.1)
    assert spec.placements() == CHANNEL_LABELS
    assert spec.at(4).placements() == (4,)
    assert spec.weak_noise_valid
    assert not NoiseSpec(NoiseKind.DEPOLARIZING, 0.3).weak_noise_valid
    assert NoiseSpec().is_noiseless and NoiseSpec(NoiseKind.BIT_FLIP, 0.0).is_noiseless


def test_weak_noise_diagnostics():
    d = weak_noise_diagnostics(0.1)
    assert d["P0"] == pytest.approx(0.9**6)
    assert d["P1"] == pytest.approx(6 * 0.1 * 0.9**5)
    assert d["P2"] == pytest.approx(15 * 0.01 * 0.9**4)
    assert d["weak_noise_valid"]
    # at p = 2/7 two errors become as likely as one
    edge = weak_noise_diagnostics(2 / 7)
    assert edge["P2"] == pytest.approx(edge["P1"])
    assert not weak_noise_diagnostics(2 / 7)["weak_noise_valid"]


COVERED_CASES = [(s, k, q) for (s, k), qs in COVERED.items() for q in qs]


@pytest.mark.parametrize("scheme,kind,qubit", COVERED_CASES)
@pytest.mark.parametrize("theta,p", [(0.3, 0.1), (math.pi / 4, 0.25), (1.2, 0.05)])
def test_noisy_gamma_formulas(backend, scheme, kind, qubit, theta, p):
    assert noisy_gamma_check(scheme, kind, qubit, theta, p) < 1e-12


def test_epr_bit_flip_gamma_by_hand():
    theta, p = 0.3, 0.2
    beta = (math.cos(theta), math.sin(theta))
    part, g = closed_gamma(Scheme.EPR3, NoiseKind.BIT_FLIP, 2, theta, p)
    assert part == (2, 7)
    assert g[0, 0, 0, 0] == pytest.approx((1 - p) * beta[0] ** 2)
    assert g[1, 0, 1, 0] == pytest.approx(p * beta[0] ** 2)
    assert g[0, 1, 0, 1] == pytest.approx(p * beta[1] ** 2)
    assert g[0, 0, 1, 1] == pytest.approx((1 - p) * beta[0] * beta[1])


@pytest.mark.parametrize("scheme,kind,qubit", COVERED_CASES)
def test_zero_probability_gives_noiseless_gamma(scheme, kind, qubit):
    part, g = closed_gamma(scheme, kind, qubit, 0.5, 0.0)
    ch = build_channel(SchemeConfig(scheme, 0.5, 0.5))
    np.testing.assert_allclose(g, gamma_tensor(ch, part), atol=1e-15)


def test_uncovered_gamma_lists_coverage():
    with pytest.raises(ValueError, match="covered"):
        closed_gamma(Scheme.GHZ2, NoiseKind.BIT_FLIP, 2, 0.3, 0.1)
