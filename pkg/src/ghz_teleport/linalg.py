"""Dense complex linear algebra on a labeled qubit register.

Conventions
-----------
Amplitudes are big-endian: the qubit in tensor slot 0 is the most
significant bit of the basis-state index, so ``|q0 q1 ... q_{n-1}>`` has
index ``sum q_s 2**(n-1-s)``. Register labels (the integers 1..9 used for
the physical qubits) are translated to slots by a :class:`QubitMap`.

All value types are immutable; their arrays are flagged read-only.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import kernels

STRUCT_TOL = 1e-12
PSD_TOL = 1e-10


def _readonly(a, ndim):
    arr = np.array(a, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _num_qubits(dim):
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _readonly(self.amplitudes, 1))
        _num_qubits(self.amplitudes.shape[0])

    @classmethod
    def from_bits(cls, bits: str | Sequence[int]) -> "StateVector":
        """Computational basis ket, e.g. ``from_bits("011")``."""
        bits = [int(b) for b in bits]
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int("".join(map(str, bits)), 2)] = 1.0
        return cls(amps)

    @property
    def num_qubits(self) -> int:
        return _num_qubits(self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = STRUCT_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def density(self) -> "DensityOperator":
        a = self.amplitudes
        return DensityOperator(np.outer(a, a.conj()))


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Square operator on ``arity`` qubits. Not assumed unitary."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix, 2)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        _num_qubits(m.shape[0])
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return _num_qubits(self.matrix.shape[0])

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.matrix.conj().T)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.matrix @ other.matrix)

    def is_unitary(self, tol: float = STRUCT_TOL) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Density matrix; may be unnormalized (post-measurement branches)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix, 2)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        _num_qubits(m.shape[0])
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return _num_qubits(self.matrix.shape[0])

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(h)[0])

    def is_hermitian(self, tol: float = STRUCT_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    def check(self, normalized: bool = False) -> None:
        """Raise ``ValueError`` if Hermiticity, positivity or trace bounds fail."""
        if not self.is_hermitian():
            raise ValueError("density operator is not Hermitian")
        if self.min_eigenvalue() < -PSD_TOL:
            raise ValueError("density operator is not positive semidefinite")
        tr = self.trace()
        if normalized and abs(tr - 1.0) > STRUCT_TOL:
            raise ValueError(f"trace {tr} differs from 1")
        if tr < -STRUCT_TOL or tr > 1.0 + STRUCT_TOL:
            raise ValueError(f"trace {tr} outside [0, 1]")


@dataclass(frozen=True)
class QubitMap:
    """Bijection between register labels and tensor slots.

    ``labels[s]`` is the label living in slot ``s``.
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in qubit map: {labels}")
        if not labels:
            raise ValueError("qubit map must contain at least one label")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, labels: Iterable[int]) -> "QubitMap":
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def slot(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"qubit label {label} not in register {self.labels}") from None

    def slots(self, labels: Sequence[int]) -> list[int]:
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate target labels: {labels}")
        return [self.slot(x) for x in labels]


def tensor(states: Sequence[StateVector]) -> StateVector:
    """Kronecker product in the given slot order."""
    if not states:
        raise ValueError("tensor() needs at least one state")
    return StateVector(reduce(np.kron, [s.amplitudes for s in states]))


def kron_ops(ops: Sequence[LinearOperator]) -> LinearOperator:
    if not ops:
        raise ValueError("kron_ops() needs at least one operator")
    return LinearOperator(reduce(np.kron, [o.matrix for o in ops]))


def embed(
    op: LinearOperator, targets: Sequence[int], qmap: QubitMap, n: int | None = None
) -> LinearOperator:
    """Expand ``op`` acting on ``targets`` to the whole register.

    The first (most significant) qubit of ``op`` acts on ``targets[0]``.
    """
    if n is None:
        n = len(qmap)
    if n != len(qmap):
        raise ValueError(f"register size {n} does not match qubit map of size {len(qmap)}")
    slots = qmap.slots(targets)
    k = len(slots)
    if op.arity != k:
        raise ValueError(f"operator acts on {op.arity} qubits but {k} targets were given")
    rest = [s for s in range(n) if s not in slots]
    full = np.kron(op.matrix, np.eye(2 ** (n - k)))
    order = slots + rest
    inv = list(np.argsort(order))
    t = full.reshape((2,) * (2 * n)).transpose(inv + [n + i for i in inv])
    return LinearOperator(t.reshape(2**n, 2**n))


def apply(op: LinearOperator, state: StateVector) -> StateVector:
    if op.matrix.shape[0] != state.amplitudes.shape[0]:
        raise ValueError("operator and state dimensions differ")
    return StateVector(op.matrix @ state.amplitudes)


def apply_local(
    op: LinearOperator, state: StateVector, targets: Sequence[int], qmap: QubitMap
) -> StateVector:
    """Apply ``op`` to ``targets`` without building the full-register matrix."""
    slots = qmap.slots(targets)
    if op.arity != len(slots):
        raise ValueError("operator arity does not match the number of targets")
    return StateVector(kernels.apply_local_ket(state.amplitudes, op.matrix, len(qmap), slots))


def conjugate(
    op: LinearOperator, rho: DensityOperator, targets: Sequence[int], qmap: QubitMap
) -> DensityOperator:
    """``A rho A^dagger`` with ``A`` acting on ``targets``."""
    slots = qmap.slots(targets)
    if op.arity != len(slots):
        raise ValueError("operator arity does not match the number of targets")
    if rho.num_qubits != len(qmap):
        raise ValueError("density operator size does not match the qubit map")
    return DensityOperator(kernels.apply_local(rho.matrix, op.matrix, len(qmap), slots))


def partial_trace(rho: DensityOperator, keep: Sequence[int], qmap: QubitMap) -> DensityOperator:
    """Reduced state on the labels ``keep``, ordered as given."""
    keep = list(keep)
    if not keep:
        raise ValueError("partial_trace: keep must name at least one qubit")
    if rho.num_qubits != len(qmap):
        raise ValueError("density operator size does not match the qubit map")
    slots = qmap.slots(keep)
    return DensityOperator(kernels.partial_trace(rho.matrix, len(qmap), slots))


def expectation(rho: DensityOperator, ket: StateVector) -> float:
    """``<ket| rho |ket>`` (real part)."""
    a = ket.amplitudes
    if rho.matrix.shape[0] != a.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator {rho.matrix.shape[0]}, ket {a.shape[0]}"
        )
    return float(np.vdot(a, rho.matrix @ a).real)


# Pauli matrices; sigma_y = [[0, -i], [i, 0]].
I2 = LinearOperator(np.eye(2))
SX = LinearOperator([[0, 1], [1, 0]])
SY = LinearOperator([[0, -1j], [1j, 0]])
SZ = LinearOperator([[1, 0], [0, -1]])


def pauli_power(base: LinearOperator, exponent: int) -> LinearOperator:
    return base if exponent & 1 else I2


def reorder(amplitudes: np.ndarray, src: QubitMap, dst: QubitMap) -> np.ndarray:
    """Re-express a ket (1-d) or operator (2-d) given in ``src`` slot order in ``dst`` order."""
    if sorted(src.labels) != sorted(dst.labels):
        raise ValueError("source and destination maps hold different labels")
    n = len(src)
    perm = [src.slot(label) for label in dst.labels]
    a = np.asarray(amplitudes)
    if a.ndim == 1:
        return a.reshape((2,) * n).transpose(perm).reshape(2**n)
    t = a.reshape((2,) * (2 * n)).transpose(perm + [n + p for p in perm])
    return t.reshape(2**n, 2**n)
