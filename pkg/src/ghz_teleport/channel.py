"""Six-qubit channel states of the two schemes and their coefficient tensors.

Near channel qubits are 2, 4, 6; distant ones 7, 8, 9. The wiring is fixed
per scheme because the correction table depends on it:

* EPR3: pairs (2,7), (4,8), (6,9); Bell-like measurements on (1,2), (3,4), (5,6).
* GHZ2: triples (2,6,8), (4,7,9); GHZ-like measurements on (1,4,5), (2,3,6).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bases import check_angle
from .linalg import DensityOperator, QubitMap, StateVector, partial_trace, reorder, tensor


class Scheme(str, enum.Enum):
    EPR3 = "epr3"
    GHZ2 = "ghz2"


@dataclass(frozen=True)
class Geometry:
    channel_parts: tuple[tuple[int, ...], ...]
    measured_groups: tuple[tuple[int, ...], ...]


GEOMETRY = {
    Scheme.EPR3: Geometry(((2, 7), (4, 8), (6, 9)), ((1, 2), (3, 4), (5, 6))),
    Scheme.GHZ2: Geometry(((2, 6, 8), (4, 7, 9)), ((1, 4, 5), (2, 3, 6))),
}

CHANNEL_LABELS = (2, 4, 6, 7, 8, 9)
CHANNEL_MAP = QubitMap(CHANNEL_LABELS)
NEAR_CHANNEL = (2, 4, 6)
FAR = (7, 8, 9)


@dataclass(frozen=True)
class SchemeConfig:
    scheme: Scheme
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        check_angle(self.theta, "channel angle theta")
        check_angle(self.phi, "measurement angle phi")

    @property
    def geometry(self) -> Geometry:
        return GEOMETRY[self.scheme]


@dataclass(frozen=True)
class ChannelState:
    rho: DensityOperator
    scheme: Scheme
    geometry: Geometry

    @property
    def qmap(self) -> QubitMap:
        return CHANNEL_MAP


def _correlated(theta: float, n: int) -> StateVector:
    check_angle(theta, "channel angle theta")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = math.cos(theta)
    amps[-1] = math.sin(theta)
    return StateVector(amps)


def epr_pair(theta: float) -> StateVector:
    """``cos(theta)|00> + sin(theta)|11>``."""
    return _correlated(theta, 2)


def ghz_triple(theta: float) -> StateVector:
    """``cos(theta)|000> + sin(theta)|111>``."""
    return _correlated(theta, 3)


def channel_ket(cfg: SchemeConfig) -> StateVector:
    """Pure channel state in :data:`CHANNEL_LABELS` slot order."""
    parts = cfg.geometry.channel_parts
    factory = epr_pair if cfg.scheme is Scheme.EPR3 else ghz_triple
    product = tensor([factory(cfg.theta) for _ in parts])
    src = QubitMap(tuple(label for part in parts for label in part))
    return StateVector(reorder(product.amplitudes, src, CHANNEL_MAP))


def build_channel(cfg: SchemeConfig) -> ChannelState:
    return ChannelState(channel_ket(cfg).density(), cfg.scheme, cfg.geometry)


def _check_part(ch: ChannelState, part) -> tuple[int, ...]:
    part = tuple(part)
    if part not in ch.geometry.channel_parts:
        raise ValueError(
            f"{part} is not a wired part of the {ch.scheme.value} channel; "
            f"choose one of {ch.geometry.channel_parts}"
        )
    return part


def gamma_tensor(ch: ChannelState, part) -> np.ndarray:
    """Coefficient tensor of one wired part.

    For a pair ``(a, b)`` the result ``g`` has ``g[k, l, m, n] = <kl| rho_ab |mn>``:
    ket bits first, then bra bits, each in the order of ``part``.
    """
    part = _check_part(ch, part)
    reduced = partial_trace(ch.rho, part, ch.qmap).matrix
    return reduced.reshape((2,) * (2 * len(part)))


def gamma(ch: ChannelState, part, indices) -> complex:
    """Single coefficient ``gamma_{indices}`` of a wired part."""
    part = _check_part(ch, part)
    indices = tuple(int(i) for i in indices)
    if len(indices) != 2 * len(part) or any(i not in (0, 1) for i in indices):
        raise ValueError(f"need {2 * len(part)} bit indices, got {indices}")
    return complex(gamma_tensor(ch, part)[indices])
