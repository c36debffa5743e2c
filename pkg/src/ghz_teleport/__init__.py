"""Exact simulation of 3-EPR and 2-GHZ teleportation of GHZ-like states."""
from .analysis import (
    FidelityReport,
    MonteCarlo,
    Quadrature,
    average_fidelity,
    closed_form,
    delta_F,
    grid_sweep,
    locate_delta_maximum,
)
from .bases import BasisLabel, basis_element, full_basis
from .channel import Scheme, SchemeConfig, build_channel
from .kernels import get_backend, use_backend
from .noise import NoiseKind, NoiseSpec, kraus_set, noisy_channel
from .protocol import InputState, Outcome, TeleportRun, teleport

__version__ = "0.1.0"

__all__ = [
    "BasisLabel",
    "FidelityReport",
    "InputState",
    "MonteCarlo",
    "NoiseKind",
    "NoiseSpec",
    "Outcome",
    "Quadrature",
    "Scheme",
    "SchemeConfig",
    "TeleportRun",
    "average_fidelity",
    "basis_element",
    "build_channel",
    "closed_form",
    "delta_F",
    "full_basis",
    "get_backend",
    "grid_sweep",
    "kraus_set",
    "locate_delta_maximum",
    "noisy_channel",
    "teleport",
    "use_backend",
]
