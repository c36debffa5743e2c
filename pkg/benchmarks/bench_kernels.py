"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N] [--number N] [--quick]

Kernels run on the data the protocol produces; the "(dense)" rows feed
fully dense random arrays of the same shapes, where the compiled loops lose
their sparsity advantage. Before timing, the two backends are checked to
return the same values on the same inputs.
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from ghz_teleport import kernels, protocol
from ghz_teleport.analysis import average_fidelity
from ghz_teleport.channel import Scheme, SchemeConfig
from ghz_teleport.noise import NoiseKind, NoiseSpec
from ghz_teleport.protocol import InputState, teleport


def _density(rng, d, rank):
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def kernel_cases(rng):
    """name -> callable taking a backend module; inputs are fixed up front."""
    cplx = lambda *s: rng.normal(size=s) + 1j * rng.normal(size=s)
    rho9 = _density(rng, 512, 8)
    rho6 = _density(rng, 64, 64)
    rho4 = rho6.reshape(8, 8, 8, 8)
    op = cplx(2, 2)
    zeta, zeta0, zeta1, rows = cplx(64, 8), cplx(64, 8), cplx(64, 8), cplx(64, 2, 8)
    c = InputState.from_angles(0.4, 1.3).amplitudes
    b = (math.cos(0.9), math.sin(0.9))
    g2 = [_density(rng, 4, 4).reshape((2,) * 4) for _ in range(3)]
    g3 = [_density(rng, 8, 8).reshape((2,) * 6) for _ in range(2)]
    # inputs as the protocol produces them (sparse measurement/correction data)
    cfg = SchemeConfig(Scheme.GHZ2, 0.5, 0.9)
    ch4 = protocol._channel_tensor(cfg, NoiseSpec(NoiseKind.DEPOLARIZING, 0.1, 6))
    pz = protocol._zeta(cfg, InputState.from_angles(0.4, 1.3).ket().amplitudes)
    pz0, pz1 = (protocol._zeta(cfg, np.eye(8)[i]) for i in (0, 7))
    prows = protocol._target_rows(cfg.scheme)
    return {
        "partial_trace 9q->3q": lambda k: k.partial_trace(rho9, 9, [6, 7, 8]),
        "apply_local 6q": lambda k: k.apply_local(rho6, op, 6, [2]),
        "branch_states": lambda k: k.branch_states(pz, ch4),
        "transfer_tensor": lambda k: k.transfer_tensor(pz0, pz1, ch4, prows),
        "branch_states (dense)": lambda k: k.branch_states(zeta, rho4),
        "transfer_tensor (dense)": lambda k: k.transfer_tensor(zeta0, zeta1, rho4, rows),
        "wide_epr3": lambda k: k.wide_epr3(c, b, *g2),
        "wide_ghz2": lambda k: k.wide_ghz2(c, b, *g3),
    }


def protocol_cases():
    """End-to-end calls; these go through the active backend."""
    cfg = SchemeConfig(Scheme.GHZ2, 0.5, 0.9)
    noise = NoiseSpec(NoiseKind.DEPOLARIZING, 0.1)
    inp = InputState.from_angles(0.4, 1.3)
    return {
        "teleport (one run)": lambda: teleport(inp, cfg, noise.at(6)),
        "average_fidelity uniform": lambda: average_fidelity(cfg, noise),
    }


def max_disagreement() -> float:
    if "compiled" not in kernels.BACKENDS:
        return 0.0
    c, p = kernels.BACKENDS["compiled"], kernels.BACKENDS["python"]
    worst = 0.0
    for fn in kernel_cases(np.random.default_rng(1)).values():
        worst = max(worst, float(np.max(np.abs(np.asarray(fn(c)) - np.asarray(fn(p))))))
    return worst


def _time(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench(repeat: int, number: int) -> list[tuple[str, dict[str, float]]]:
    names = sorted(kernels.BACKENDS)
    results = []
    for label, fn in kernel_cases(np.random.default_rng(0)).items():
        results.append((label, {n: _time(lambda: fn(kernels.BACKENDS[n]), repeat, number) for n in names}))
    for label, fn in protocol_cases().items():
        row = {}
        for n in names:
            with kernels.backend(n):
                row[n] = _time(fn, repeat, max(1, number // 4))
        results.append((label, row))
    return results


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="Compare the compiled and numpy kernel backends.")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    ap.add_argument("--quick", action="store_true", help="one call per case (smoke run)")
    args = ap.parse_args(argv)
    repeat, number = (1, 1) if args.quick else (args.repeat, args.number)
    names = sorted(kernels.BACKENDS)
    both = len(names) == 2
    print(f"default backend: {kernels.get_backend()}")
    if both:
        print(f"max |compiled - python| on benchmark inputs: {max_disagreement():.2e}")
    print(f"{'case':<26}" + "".join(f"{n + ' [ms]':>16}" for n in names) + ("  speedup" if both else ""))
    for label, row in bench(repeat, number):
        line = f"{label:<26}" + "".join(f"{row[n] * 1e3:16.3f}" for n in names)
        if both:
            line += f"  {row['python'] / row['compiled']:7.2f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
