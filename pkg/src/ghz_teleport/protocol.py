"""One teleportation run: measurement, classical bits, correction, fidelity.

The nine-qubit register holds the input on qubits 1, 3, 5, the channel on
2, 4, 6 (near) and 7, 8, 9 (far). For every outcome ``K`` the far state is

    rho_K = U_K Tr_near[(P_K (x) 1)(|phi><phi| (x) rho_ch)] U_K^dagger

(unnormalized). Because ``P_K`` is rank one the near-side trace reduces to
contracting the input with the measurement bra, which leaves a vector on the
near channel qubits; the channel is then contracted on both sides. All 64
branches are computed; nothing is sampled.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .bases import BasisLabel, basis_element, check_angle
from .channel import CHANNEL_MAP, FAR, Scheme, SchemeConfig
from .linalg import (
    SX,
    SZ,
    DensityOperator,
    LinearOperator,
    QubitMap,
    StateVector,
    expectation,
    kron_ops,
    pauli_power,
    reorder,
    tensor,
)
from .noise import NoiseSpec, noisy_channel

NEAR_MAP = QubitMap((1, 2, 3, 4, 5, 6))
INPUT_LABELS = (1, 3, 5)
REGISTER = QubitMap(tuple(range(1, 10)))
PROB_FLOOR = 1e-12

BIT_NAMES = {
    Scheme.EPR3: ("mu", "lambda", "nu", "omega", "epsilon", "tau"),
    Scheme.GHZ2: ("mu", "lambda", "omega", "nu", "tau", "epsilon"),
}


@dataclass(frozen=True)
class InputState:
    """``c0|000> + c1|111>`` on the input qubits."""

    c0: complex
    c1: complex

    def __post_init__(self):
        c0, c1 = complex(self.c0), complex(self.c1)
        if abs(abs(c0) ** 2 + abs(c1) ** 2 - 1.0) > 1e-12:
            raise ValueError("input amplitudes must satisfy |c0|^2 + |c1|^2 = 1")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    @classmethod
    def from_angles(cls, theta0: float, phase: float) -> "InputState":
        if not 0.0 <= theta0 <= math.pi / 2:
            raise ValueError(f"theta0 must lie in [0, pi/2], got {theta0!r}")
        return cls(math.cos(theta0), cmath.exp(1j * phase) * math.sin(theta0))

    @classmethod
    def equal(cls) -> "InputState":
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "InputState":
        """Draw from the uniform measure on the input manifold."""
        u, v = rng.random(2)
        return cls.from_angles(0.5 * math.acos(1 - 2 * u), 2 * math.pi * v)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.c0, self.c1])

    def ket(self) -> StateVector:
        amps = np.zeros(8, dtype=complex)
        amps[0], amps[7] = self.c0, self.c1
        return StateVector(amps)


@dataclass(frozen=True)
class Outcome:
    scheme: Scheme
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != 6 or any(b not in (0, 1) for b in bits):
            raise ValueError(f"an outcome carries six bits, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_index(cls, scheme, index: int) -> "Outcome":
        if not 0 <= index < 64:
            raise ValueError(f"outcome index must lie in [0, 64), got {index}")
        return cls(scheme, tuple((index >> (5 - i)) & 1 for i in range(6)))

    @property
    def index(self) -> int:
        idx = 0
        for b in self.bits:
            idx = (idx << 1) | b
        return idx

    def named(self) -> dict[str, int]:
        return dict(zip(BIT_NAMES[self.scheme], self.bits))

    def __getitem__(self, name: str) -> int:
        return self.named()[name]

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))


def all_outcomes(scheme) -> list[Outcome]:
    return [Outcome.from_index(scheme, i) for i in range(64)]


def _group_labels(scheme: Scheme, outcome: Outcome, phi: float) -> list[BasisLabel]:
    o = outcome.named()
    if scheme is Scheme.EPR3:
        return [
            BasisLabel(o["mu"], (o["lambda"],), 2, phi),
            BasisLabel(o["nu"], (o["omega"],), 2, phi),
            BasisLabel(o["epsilon"], (o["tau"],), 2, phi),
        ]
    return [
        BasisLabel(o["mu"], (o["lambda"], o["omega"]), 3, phi),
        BasisLabel(o["nu"], (o["tau"], o["epsilon"]), 3, phi),
    ]


def _check_outcome(scheme, outcome: Outcome) -> Scheme:
    scheme = Scheme(scheme)
    if outcome.scheme is not scheme:
        raise ValueError(
            f"outcome belongs to {outcome.scheme.value}, not {scheme.value}"
        )
    return scheme


def measurement_ket(scheme, outcome: Outcome, phi: float) -> StateVector:
    """Measurement ket of ``outcome`` on the near qubits 1..6 (in label order)."""
    scheme = _check_outcome(scheme, outcome)
    check_angle(phi, "measurement angle phi")
    groups = (
        ((1, 2), (3, 4), (5, 6)) if scheme is Scheme.EPR3 else ((1, 4, 5), (2, 3, 6))
    )
    kets = [basis_element(lab) for lab in _group_labels(scheme, outcome, phi)]
    src = QubitMap(tuple(q for g in groups for q in g))
    return StateVector(reorder(tensor(kets).amplitudes, src, NEAR_MAP))


def projector_for(scheme, outcome: Outcome, phi: float) -> LinearOperator:
    """Rank-one projector on the near qubits 1..6."""
    v = measurement_ket(scheme, outcome, phi).amplitudes
    return LinearOperator(np.outer(v, v.conj()))


def correction_for(scheme, outcome: Outcome) -> LinearOperator:
    """Ideal-case Pauli correction on qubits 7, 8, 9 (independent of angles).

    EPR3: Z^mu X^lambda (x) Z^nu X^omega (x) Z^epsilon X^tau.
    GHZ2: Z^mu X^lambda (x) X^tau Z^nu (x) X^lambda.
    """
    scheme = _check_outcome(scheme, outcome)
    o = outcome.named()
    if scheme is Scheme.EPR3:
        factors = [
            pauli_power(SZ, o["mu"]) @ pauli_power(SX, o["lambda"]),
            pauli_power(SZ, o["nu"]) @ pauli_power(SX, o["omega"]),
            pauli_power(SZ, o["epsilon"]) @ pauli_power(SX, o["tau"]),
        ]
    else:
        factors = [
            pauli_power(SZ, o["mu"]) @ pauli_power(SX, o["lambda"]),
            pauli_power(SX, o["tau"]) @ pauli_power(SZ, o["nu"]),
            pauli_power(SX, o["lambda"]),
        ]
    return kron_ops(factors)


@lru_cache(maxsize=256)
def _measurement_table(scheme: Scheme, phi: float) -> np.ndarray:
    """``table[K, a, b]`` = amplitude of outcome K's ket at input index ``a``
    (qubits 1,3,5) and near-channel index ``b`` (qubits 2,4,6)."""
    kets = np.stack(
        [measurement_ket(scheme, o, phi).amplitudes for o in all_outcomes(scheme)]
    )
    t = kets.reshape((64,) + (2,) * 6).transpose(0, 1, 3, 5, 2, 4, 6)
    t = np.ascontiguousarray(t.reshape(64, 8, 8))
    t.setflags(write=False)
    return t


@lru_cache(maxsize=4)
def _correction_table(scheme: Scheme) -> np.ndarray:
    t = np.stack([correction_for(scheme, o).matrix for o in all_outcomes(scheme)])
    t.setflags(write=False)
    return t


# Indirection points so a test fixture can swap in a perturbed correction table.
def correction_table(scheme) -> np.ndarray:
    return _correction_table(Scheme(scheme))


def measurement_table(scheme, phi: float) -> np.ndarray:
    return _measurement_table(Scheme(scheme), float(phi))


@dataclass(frozen=True)
class OutcomeRecord:
    outcome: Outcome
    probability: float
    corrected_state: DensityOperator | None
    conditional_fidelity: float | None


@dataclass(frozen=True)
class TeleportRun:
    scheme: Scheme
    input_state: InputState
    config: SchemeConfig
    noise: NoiseSpec
    records: tuple[OutcomeRecord, ...] = field(repr=False)
    total_fidelity: float

    def probabilities(self) -> np.ndarray:
        return np.array([r.probability for r in self.records])

    def nonzero(self, floor: float = PROB_FLOOR) -> list[OutcomeRecord]:
        return [r for r in self.records if r.probability > floor]

    def weighted_fidelity(self) -> float:
        """Probability-weighted mean of the conditional fidelities."""
        return float(
            sum(
                r.probability * r.conditional_fidelity
                for r in self.records
                if r.conditional_fidelity is not None
            )
        )


def _channel_tensor(cfg: SchemeConfig, noise: NoiseSpec) -> np.ndarray:
    rho = noisy_channel(cfg, noise).rho.matrix
    # slot order (2,4,6,7,8,9): near block first, far block second
    return rho.reshape(8, 8, 8, 8)


def _zeta(cfg: SchemeConfig, input_amps: np.ndarray) -> np.ndarray:
    table = measurement_table(cfg.scheme, cfg.phi)
    return np.einsum("kab,a->kb", table.conj(), input_amps)


def teleport(
    input_state: InputState, cfg: SchemeConfig, noise: NoiseSpec | None = None
) -> TeleportRun:
    noise = noise or NoiseSpec()
    rho4 = _channel_tensor(cfg, noise)
    zeta = _zeta(cfg, input_state.ket().amplitudes)
    raw = kernels.branch_states(zeta, rho4)
    u = correction_table(cfg.scheme)
    corrected = np.einsum("kab,kbc,kdc->kad", u, raw, u.conj())
    target = input_state.ket()
    records = []
    total = 0.0
    for outcome, rho_k in zip(all_outcomes(cfg.scheme), corrected):
        branch = DensityOperator(rho_k)
        prob = branch.trace()
        overlap = expectation(branch, target)
        total += overlap
        if prob > PROB_FLOOR:
            state = DensityOperator(rho_k / prob)
            fid = overlap / prob
        else:
            state, fid = None, None
        records.append(OutcomeRecord(outcome, prob, state, fid))
    return TeleportRun(cfg.scheme, input_state, cfg, noise, tuple(records), total)


def teleport_dense(
    input_state: InputState, cfg: SchemeConfig, noise: NoiseSpec | None = None
) -> np.ndarray:
    """Unnormalized corrected far states from the full 512x512 register density.

    Slow reference route used to cross-check :func:`teleport`; returns an
    array of shape (64, 8, 8) in outcome order.
    """
    noise = noise or NoiseSpec()
    ch = noisy_channel(cfg, noise)
    src = QubitMap(INPUT_LABELS + CHANNEL_MAP.labels)
    full = np.kron(input_state.ket().density().matrix, ch.rho.matrix)
    full = reorder(full, src, REGISTER)
    out = np.empty((64, 8, 8), dtype=complex)
    for outcome in all_outcomes(cfg.scheme):
        bra = measurement_ket(cfg.scheme, outcome, cfg.phi).amplitudes.conj()
        w = np.kron(bra[None, :], np.eye(8))  # (<psi_K| (x) 1_far)
        u = correction_for(cfg.scheme, outcome).matrix
        out[outcome.index] = u @ (w @ full @ w.conj().T) @ u.conj().T
    return out


def _target_rows(scheme: Scheme) -> np.ndarray:
    """``rows[K, m, x] = <mmm| U_K |x>`` for the two target basis kets."""
    return correction_table(scheme)[:, [0, 7], :]


def transfer_tensor(cfg: SchemeConfig, noise: NoiseSpec | None = None) -> np.ndarray:
    """Coefficients ``T`` with ``F(c) = sum c_j c_j'^* c_m^* c_n T[j, j', m, n]``.

    The total fidelity is a quartic form in the input amplitudes, so four
    basis-operator runs of the protocol fix it for every input.
    """
    noise = noise or NoiseSpec()
    rho4 = _channel_tensor(cfg, noise)
    zeta0 = _zeta(cfg, np.eye(8)[0])
    zeta1 = _zeta(cfg, np.eye(8)[7])
    return kernels.transfer_tensor(zeta0, zeta1, rho4, _target_rows(cfg.scheme))


def fidelity_from_tensor(T: np.ndarray, c0, c1) -> np.ndarray:
    """Evaluate the quartic form at arrays of input amplitudes."""
    c = np.stack(np.broadcast_arrays(np.asarray(c0, complex), np.asarray(c1, complex)))
    val = np.einsum("jpmn,j...,p...,m...,n...->...", T, c, c.conj(), c.conj(), c)
    return val.real


def per_input_fidelity_closed(
    scheme, input_state: InputState, theta: float, phi: float, noise: NoiseSpec | None = None
) -> float:
    """Closed noiseless fidelity for one input.

    EPR3: |c0|^4 + |c1|^4 + 128 |c0|^2 |c1|^2 (b0 b1 beta0 beta1)^3
    GHZ2: |c0|^4 + |c1|^4 + 32 |c0|^2 |c1|^2 (b0 b1 beta0 beta1)^2
    """
    if noise is not None and not noise.is_noiseless:
        raise ValueError("the per-input closed form covers the noiseless case only")
    scheme = Scheme(scheme)
    check_angle(theta, "channel angle theta")
    check_angle(phi, "measurement angle phi")
    a0, a1 = abs(input_state.c0) ** 2, abs(input_state.c1) ** 2
    prod = math.cos(phi) * math.sin(phi) * math.cos(theta) * math.sin(theta)
    coef, power = (128, 3) if scheme is Scheme.EPR3 else (32, 2)
    return a0**2 + a1**2 + coef * a0 * a1 * prod**power
