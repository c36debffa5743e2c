"""Hot numerical kernels with a compiled core and a numpy fallback.

The compiled extension (``_ckernels``) is used when it was built; otherwise
the numpy module (``_pykernels``) is selected at import. Both expose the same
functions:

partial_trace(mat, n, keep)
    Reduced operator on the register slots ``keep``.
apply_local(mat, op, n, slots) / apply_local_ket(vec, op, n, slots)
    Conjugate a density matrix by, or apply to a ket, an operator on a slot
    subset without forming the full-register matrix.
branch_states(zeta, rho4)
    Unnormalized far-side states of all measurement outcomes.
transfer_tensor(zeta0, zeta1, rho4, rows)
    Coefficients of the total fidelity as a quartic form in the input
    amplitudes.
wide_epr3(c, b, g1, g2, g3) / wide_ghz2(c, b, g268, g479)
    Total fidelity as explicit index sums over channel coefficient tensors.
"""
from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels

__all__ = [
    "BACKENDS",
    "apply_local",
    "apply_local_ket",
    "backend",
    "branch_states",
    "get_backend",
    "partial_trace",
    "transfer_tensor",
    "use_backend",
    "wide_epr3",
    "wide_ghz2",
]


def get_backend():
    """Name of the active backend, ``"compiled"`` or ``"python"``."""
    return _active.NAME


def use_backend(name):
    global _active
    try:
        _active = BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; available: {sorted(BACKENDS)}"
        ) from None


@contextmanager
def backend(name):
    """Temporarily switch the active backend."""
    previous = _active.NAME
    use_backend(name)
    try:
        yield BACKENDS[name]
    finally:
        use_backend(previous)


def partial_trace(mat, n, keep):
    return _active.partial_trace(mat, n, keep)


def apply_local(mat, op, n, slots):
    return _active.apply_local(mat, op, n, slots)


def apply_local_ket(vec, op, n, slots):
    return _active.apply_local_ket(vec, op, n, slots)


def branch_states(zeta, rho4):
    return _active.branch_states(zeta, rho4)


def transfer_tensor(zeta0, zeta1, rho4, rows):
    return _active.transfer_tensor(zeta0, zeta1, rho4, rows)


def wide_epr3(c, b, g1, g2, g3):
    return _active.wide_epr3(c, b, g1, g2, g3)


def wide_ghz2(c, b, g268, g479):
    return _active.wide_ghz2(c, b, g268, g479)
