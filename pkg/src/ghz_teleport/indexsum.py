"""Total fidelity as explicit index sums over channel coefficient tensors.

This route never forms a register state: it reads the coefficient tensors of
the wired pairs/triples and sums the closed index expressions of each
scheme, with measurement coefficients ``b = (cos phi, sin phi)``. It serves
as an independent check of :func:`ghz_teleport.protocol.teleport`.

For 2-GHZ the ``omega`` bit is omitted from the sum: its outcomes have zero
probability because qubits 1 and 5 always carry equal bits.
"""
from __future__ import annotations

import math

from . import kernels
from .channel import ChannelState, Scheme, SchemeConfig, gamma_tensor
from .noise import NoiseSpec, noisy_channel
from .protocol import InputState


def wide_fidelity_from_channel(
    input_state: InputState, ch: ChannelState, phi: float
) -> float:
    b = (math.cos(phi), math.sin(phi))
    c = input_state.amplitudes
    tensors = [gamma_tensor(ch, part) for part in ch.geometry.channel_parts]
    if ch.scheme is Scheme.EPR3:
        return kernels.wide_epr3(c, b, *tensors)
    return kernels.wide_ghz2(c, b, *tensors)


def wide_fidelity(
    input_state: InputState, cfg: SchemeConfig, noise: NoiseSpec | None = None
) -> float:
    ch = noisy_channel(cfg, noise or NoiseSpec())
    return wide_fidelity_from_channel(input_state, ch, cfg.phi)
