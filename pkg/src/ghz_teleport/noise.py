"""Single-qubit Kraus noise on the channel qubits.

In the weak-noise regime at most one of the six channel qubits suffers a
Kraus event per run, so a noisy run applies exactly one single-qubit channel
to one placement. Uniform placement averages fidelities over the six
placements; it never mixes states.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .channel import (
    CHANNEL_LABELS,
    ChannelState,
    Scheme,
    SchemeConfig,
    build_channel,
    gamma_tensor,
)
from .linalg import I2, SX, SY, SZ, DensityOperator, LinearOperator, QubitMap, conjugate

P_MAX = 2 / 7
UNIFORM = "uniform"


class NoiseKind(str, enum.Enum):
    NONE = "none"
    BIT_FLIP = "bitflip"
    PHASE_FLIP = "phaseflip"
    DEPOLARIZING = "depolarizing"


Placement = Union[int, str]


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise probability must lie in [0, 1], got {p!r}")
    return p


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.NONE
    p: float = 0.0
    placement: Placement = UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "p", _check_p(self.p))
        placement = self.placement
        if placement != UNIFORM:
            placement = int(placement)
            if placement not in CHANNEL_LABELS:
                raise ValueError(
                    f"noise placement must be one of {CHANNEL_LABELS} or 'uniform', "
                    f"got {self.placement!r}"
                )
        object.__setattr__(self, "placement", placement)

    @property
    def is_noiseless(self) -> bool:
        return self.kind is NoiseKind.NONE or self.p == 0.0

    @property
    def weak_noise_valid(self) -> bool:
        return self.p < P_MAX

    def placements(self) -> tuple[int, ...]:
        if self.placement == UNIFORM:
            return CHANNEL_LABELS
        return (self.placement,)

    def at(self, qubit: int) -> "NoiseSpec":
        return NoiseSpec(self.kind, self.p, qubit)


def kraus_set(kind: NoiseKind, p: float) -> list[LinearOperator]:
    kind = NoiseKind(kind)
    p = _check_p(p)
    keep = math.sqrt(1.0 - p)
    if kind is NoiseKind.NONE:
        return [I2]
    if kind is NoiseKind.BIT_FLIP:
        paulis, weight = [SX], math.sqrt(p)
    elif kind is NoiseKind.PHASE_FLIP:
        paulis, weight = [SZ], math.sqrt(p)
    else:
        paulis, weight = [SX, SY, SZ], math.sqrt(p / 3.0)
    return [LinearOperator(keep * I2.matrix)] + [
        LinearOperator(weight * s.matrix) for s in paulis
    ]


def apply_noise(
    rho: DensityOperator, qubit: int, kind: NoiseKind, p: float, qmap: QubitMap
) -> DensityOperator:
    """``rho -> sum_i A_i rho A_i^dagger`` with the Kraus set acting on ``qubit``."""
    qmap.slot(qubit)  # unknown labels raise KeyError
    terms = [conjugate(a, rho, [qubit], qmap).matrix for a in kraus_set(kind, p)]
    return DensityOperator(np.sum(terms, axis=0))


def noisy_channel(cfg: SchemeConfig, noise: NoiseSpec) -> ChannelState:
    """Channel after one single-qubit Kraus channel on a resolved placement."""
    ch = build_channel(cfg)
    if noise.kind is NoiseKind.NONE:
        return ch
    if noise.placement == UNIFORM:
        raise ValueError("resolve the uniform placement to a single qubit first")
    rho = apply_noise(ch.rho, noise.placement, noise.kind, noise.p, ch.qmap)
    return ChannelState(rho, ch.scheme, ch.geometry)


def weak_noise_diagnostics(p: float) -> dict:
    """Probabilities of zero, one and two effective errors on six qubits."""
    p = _check_p(p)
    return {
        "P0": (1 - p) ** 6,
        "P1": 6 * p * (1 - p) ** 5,
        "P2": 15 * p**2 * (1 - p) ** 4,
        "weak_noise_valid": p < P_MAX,
    }


# Closed coefficient tensors for the noisy pairs/triples --------------------


def _d(a, b):
    return 1.0 if a == b else 0.0


def _pm(x):
    return -1.0 if x & 1 else 1.0


def _epr_pair_gamma(kind, beta, p):
    g = np.zeros((2,) * 4)
    for k, l, m, n in np.ndindex(2, 2, 2, 2):
        straight = _d(k, l) * _d(m, n)
        flipped = _d(k, l ^ 1) * _d(m, n ^ 1)
        if kind is NoiseKind.BIT_FLIP:
            braces = (1 - p) * straight + p * flipped
        elif kind is NoiseKind.PHASE_FLIP:
            braces = straight * (1 - p + p * _pm(k ^ m))
        elif kind is NoiseKind.DEPOLARIZING:
            braces = (1 - p + p / 3 * _pm(k ^ m)) * straight + p / 3 * (
                1 + _pm(k ^ m)
            ) * flipped
        else:
            braces = straight
        g[k, l, m, n] = beta[l] * beta[n] * braces
    return g


def _ghz_triple_gamma(kind, beta, p):
    g = np.zeros((2,) * 6)
    for k, l, m, n, pb, q in np.ndindex(*(2,) * 6):
        if kind is NoiseKind.PHASE_FLIP:
            value = (
                _d(k, l) * _d(l, m) * _d(n, pb) * _d(pb, q) * (1 - p + p * _pm(k ^ n))
            )
        else:
            straight = _d(k, l) * _d(n, pb)
            flipped = _d(l, k ^ 1) * _d(pb, n ^ 1)
            if kind is NoiseKind.BIT_FLIP:
                braces = (1 - p) * straight + p * flipped
            elif kind is NoiseKind.DEPOLARIZING:
                braces = (1 - p + p / 3 * _pm(l ^ pb)) * straight + p / 3 * (
                    1 + _pm(l ^ pb)
                ) * flipped
            else:
                braces = straight
            value = _d(k, m) * _d(n, q) * braces
        g[k, l, m, n, pb, q] = beta[k] * beta[n] * value
    return g


# (scheme, kind) -> {noisy qubit: wired part whose tensor the formula describes}
COVERED = {
    (Scheme.EPR3, NoiseKind.BIT_FLIP): {2: (2, 7), 4: (4, 8), 6: (6, 9)},
    (Scheme.EPR3, NoiseKind.PHASE_FLIP): {2: (2, 7), 4: (4, 8), 6: (6, 9)},
    (Scheme.EPR3, NoiseKind.DEPOLARIZING): {2: (2, 7), 4: (4, 8), 6: (6, 9)},
    (Scheme.GHZ2, NoiseKind.BIT_FLIP): {6: (2, 6, 8)},
    (Scheme.GHZ2, NoiseKind.PHASE_FLIP): {2: (2, 6, 8)},
    (Scheme.GHZ2, NoiseKind.DEPOLARIZING): {6: (2, 6, 8)},
}


def closed_gamma(scheme, kind, qubit: int, theta: float, p: float):
    """Return ``(part, tensor)`` of the closed noisy coefficient expression."""
    scheme, kind = Scheme(scheme), NoiseKind(kind)
    parts = COVERED.get((scheme, kind), {})
    if qubit not in parts:
        covered = sorted(
            (s.value, k.value, q) for (s, k), qs in COVERED.items() for q in qs
        )
        raise ValueError(
            f"no closed coefficient formula for {scheme.value}/{kind.value} on qubit "
            f"{qubit}; covered (scheme, kind, qubit): {covered}"
        )
    beta = (math.cos(theta), math.sin(theta))
    p = _check_p(p)
    if scheme is Scheme.EPR3:
        return parts[qubit], _epr_pair_gamma(kind, beta, p)
    return parts[qubit], _ghz_triple_gamma(kind, beta, p)


def noisy_gamma_check(scheme, kind, qubit: int, theta: float, p: float) -> float:
    """Max deviation between the simulated and closed noisy coefficient tensors."""
    part, expected = closed_gamma(scheme, kind, qubit, theta, p)
    # the measurement angle does not enter the channel
    cfg = SchemeConfig(scheme, theta, math.pi / 4)
    ch = noisy_channel(cfg, NoiseSpec(kind, p, qubit))
    return float(np.max(np.abs(gamma_tensor(ch, part) - expected)))
