"""Generalized, possibly non-maximally entangled N-qubit GHZ-like basis.

Element ``(mu, lam)`` of the basis with angle ``phi`` is

    sum_j (-1)**(mu*j) * b[mu ^ j] * |j> (x) |j ^ lam_2> ... |j ^ lam_N>

with ``b = (cos phi, sin phi)``. For N = 2 this is the Bell-like basis and
for ``phi = pi/4`` the maximally entangled Bell/GHZ basis.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import StateVector


def check_angle(angle: float, name: str = "angle") -> float:
    """Validate an angle in the open interval (0, pi/2)."""
    angle = float(angle)
    if not 0.0 < angle < math.pi / 2:
        raise ValueError(f"{name} must lie strictly between 0 and pi/2, got {angle!r}")
    return angle


@dataclass(frozen=True)
class BasisLabel:
    mu: int
    lambda_vec: tuple[int, ...]
    num_qubits: int
    phi: float

    def __post_init__(self):
        if self.num_qubits < 2:
            raise ValueError("the basis needs at least two qubits")
        lam = tuple(int(x) for x in self.lambda_vec)
        if len(lam) != self.num_qubits - 1:
            raise ValueError(
                f"lambda_vec must have length {self.num_qubits - 1}, got {len(lam)}"
            )
        if any(x not in (0, 1) for x in lam) or self.mu not in (0, 1):
            raise ValueError("mu and lambda entries must be bits")
        object.__setattr__(self, "lambda_vec", lam)
        check_angle(self.phi, "basis angle phi")

    @property
    def index(self) -> int:
        """Position in :func:`full_basis` (mu slowest, lambda big-endian)."""
        idx = self.mu
        for bit in self.lambda_vec:
            idx = (idx << 1) | bit
        return idx

    @property
    def coefficients(self) -> tuple[float, float]:
        return math.cos(self.phi), math.sin(self.phi)


def basis_element(label: BasisLabel) -> StateVector:
    b = label.coefficients
    n = label.num_qubits
    amps = np.zeros(2**n, dtype=complex)
    for j in (0, 1):
        bits = [j] + [j ^ lam for lam in label.lambda_vec]
        idx = int("".join(map(str, bits)), 2)
        amps[idx] += (-1) ** (label.mu * j) * b[label.mu ^ j]
    return StateVector(amps)


def labels(num_qubits: int, phi: float) -> list[BasisLabel]:
    """All basis labels in table order."""
    return [
        BasisLabel(mu, lam, num_qubits, phi)
        for mu in (0, 1)
        for lam in itertools.product((0, 1), repeat=num_qubits - 1)
    ]


def full_basis(num_qubits: int, phi: float) -> list[StateVector]:
    return [basis_element(lab) for lab in labels(num_qubits, phi)]


def basis_matrix(num_qubits: int, phi: float) -> np.ndarray:
    """Columns are the basis kets in table order."""
    return np.stack([v.amplitudes for v in full_basis(num_qubits, phi)], axis=1)


def _ket_string(state: StateVector, digits: int) -> str:
    n = state.num_qubits
    parts = []
    for idx, a in enumerate(state.amplitudes):
        if abs(a) < 1e-15:
            continue
        coef = a.real if abs(a.imag) < 1e-15 else a
        parts.append(f"{coef:+.{digits}f}|{idx:0{n}b}>")
    return " ".join(parts)


def basis_table(num_qubits: int, phi: float, digits: int = 6) -> list[dict]:
    """Rows ``mu, lambda_2..lambda_N, ket`` in the layout of the basis tables."""
    rows = []
    for lab in labels(num_qubits, phi):
        row = {"mu": lab.mu}
        for pos, bit in enumerate(lab.lambda_vec, start=2):
            row[f"lambda_{pos}"] = bit
        row["ket"] = _ket_string(basis_element(lab), digits)
        rows.append(row)
    return rows
