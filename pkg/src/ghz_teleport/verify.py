"""Acceptance checks shared by ``ghz-teleport verify`` and the test suite.

Each check returns a :class:`CriterionResult`; failures are reported, never
raised. All randomness uses fixed seeds so reports are reproducible.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis
from .analysis import MonteCarlo, Quadrature, average_fidelity, closed_form
from .bases import full_basis
from .channel import Scheme, SchemeConfig
from .noise import CHANNEL_LABELS, NoiseKind, NoiseSpec
from .protocol import InputState, per_input_fidelity_closed, teleport

SEED = 20240611
SCHEMES = (Scheme.EPR3, Scheme.GHZ2)
NOISY_KINDS = (NoiseKind.BIT_FLIP, NoiseKind.PHASE_FLIP, NoiseKind.DEPOLARIZING)
QUARTER = math.pi / 4


@dataclass(frozen=True)
class CriterionResult:
    number: int
    key: str
    title: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status} [{self.number:2d}] {self.key:<14} max_dev={self.max_deviation:.3e} "
            f"tol={self.tolerance:.1e}  {self.title}"
        )
        return text + (f" ({self.detail})" if self.detail else "")


def _inputs(count: int, seed: int) -> list[InputState]:
    rng = np.random.default_rng(seed)
    return [InputState.random(rng) for _ in range(count)]


def _result(number, key, title, dev, tol, detail=""):
    return CriterionResult(number, key, title, bool(dev < tol), float(dev), tol, detail)


def check_basis() -> CriterionResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for n in (2, 3, 4):
        for phi in rng.uniform(0, math.pi / 2, size=20):
            m = np.stack([v.amplitudes for v in full_basis(n, float(phi))], axis=1)
            worst = max(worst, np.max(np.abs(m.conj().T @ m - np.eye(2**n))))
    return _result(1, "basis", "basis orthonormality, N=2,3,4 x 20 angles", worst, 1e-12)


def check_ideal() -> CriterionResult:
    worst = 0.0
    for scheme in SCHEMES:
        cfg = SchemeConfig(scheme, QUARTER, QUARTER)
        for inp in _inputs(100, SEED + 1):
            worst = max(worst, abs(teleport(inp, cfg).total_fidelity - 1.0))
    return _result(2, "ideal", "ideal teleportation fidelity = 1", worst, 1e-11)


def check_per_input() -> CriterionResult:
    grid = analysis.midpoint_grid(5)
    inputs = _inputs(10, SEED + 2)
    worst = 0.0
    for scheme in SCHEMES:
        for t in grid:
            for f in grid:
                cfg = SchemeConfig(scheme, t, f)
                for inp in inputs:
                    sim = teleport(inp, cfg).total_fidelity
                    worst = max(worst, abs(sim - per_input_fidelity_closed(scheme, inp, t, f)))
    return _result(3, "per_input", "per-input closed forms, 5x5 grid x 10 inputs", worst, 1e-10)


def check_noiseless_avg() -> CriterionResult:
    grid = analysis.midpoint_grid(5)
    worst = 0.0
    for scheme in SCHEMES:
        for t in grid:
            for f in grid:
                rep = average_fidelity(SchemeConfig(scheme, t, f), method=Quadrature(32))
                worst = max(worst, rep.abs_deviation)
    return _result(4, "noiseless_avg", "noiseless average vs closed forms, 5x5 grid", worst, 1e-9)


FIVE_DEGREE_VALUES = {Scheme.EPR3: 0.969, Scheme.GHZ2: 0.979}


def check_five_degree() -> CriterionResult:
    angle = QUARTER + math.radians(5)
    worst = 0.0
    parts = []
    for scheme, quoted in FIVE_DEGREE_VALUES.items():
        sim = average_fidelity(SchemeConfig(scheme, angle, angle)).avg_fidelity_sim
        worst = max(worst, abs(sim - quoted))
        parts.append(f"{scheme.value} sim={sim:.6f} quoted={quoted}")
    return _result(5, "five_degree", "5 degree systematic-error values", worst, 5e-4, "; ".join(parts))


def check_delta_max() -> CriterionResult:
    count = 201
    grid, d = analysis.delta_F_grid(count)
    i, j = np.unravel_index(int(np.argmax(d)), d.shape)
    t, f = float(grid[i]), float(grid[j])
    value_dev = abs(float(d[i, j]) - 4 / 81)
    product = math.sin(2 * t) * math.sin(2 * f)
    step = (math.pi / 2) / count
    # |d(sin 2t sin 2f)| <= 2 per unit change of either angle
    locus_ok = abs(product - 2 / 3) <= 2 * step
    sim = analysis.delta_F(t, f, simulate=True)
    sim_dev = abs(sim - float(d[i, j]))
    dev = max(value_dev, sim_dev)
    passed = dev < 1e-6 and locus_ok
    detail = f"max at theta={t:.6f}, phi={f:.6f}, sin2t*sin2f={product:.6f}"
    return CriterionResult(6, "delta_max", "max Delta F = 4/81 on 201x201 grid", passed, dev, 1e-6, detail)


def check_ghz_outcomes() -> CriterionResult:
    cfg = SchemeConfig(Scheme.GHZ2, QUARTER, QUARTER)
    worst = 0.0
    count_ok = True
    for inp in _inputs(5, SEED + 3):
        run = teleport(inp, cfg)
        nz = run.nonzero()
        count_ok &= len(nz) == 16
        worst = max(worst, max(abs(r.probability - 1 / 16) for r in nz))
    leak = 0.0
    for t, f in ((QUARTER, QUARTER), (0.5, 0.9)):
        cfg = SchemeConfig(Scheme.GHZ2, t, f)
        for kind in NOISY_KINDS:
            for q in CHANNEL_LABELS:
                for inp in _inputs(2, SEED + 4):
                    run = teleport(inp, cfg, NoiseSpec(kind, 0.2, q))
                    leak = max(
                        leak,
                        max(r.probability for r in run.records if r.outcome["omega"] != 0),
                    )
    dev = max(worst, leak)
    passed = count_ok and worst < 1e-11 and leak < 1e-12
    detail = f"16 outcomes={'yes' if count_ok else 'no'}, max omega!=0 prob={leak:.1e}"
    return CriterionResult(7, "ghz_outcomes", "2-GHZ outcome structure", passed, dev, 1e-11, detail)


TABLE1_PS = tuple(round(0.05 * i, 2) for i in range(6))


def check_table1() -> CriterionResult:
    reports, slopes = analysis.table1(TABLE1_PS)
    worst = 0.0
    for key, expected in analysis.TABLE1_SLOPES.items():
        slope, intercept = slopes[key]
        worst = max(worst, abs(slope - expected), abs(intercept - 1.0))
        rows = [r for r in reports if (r.scheme, r.noise) == key]
        for r in rows:
            worst = max(worst, abs(r.avg_fidelity_sim - (intercept + slope * r.p)))
    return _result(8, "table1", "noise slopes at maximal entanglement", worst, 1e-9)


def check_qubit6() -> CriterionResult:
    worst_const = 0.0
    worst_other = 0.0
    for t, f in ((QUARTER, QUARTER), (0.5, 0.9), (1.2, 0.3)):
        cfg = SchemeConfig(Scheme.GHZ2, t, f)
        noiseless = average_fidelity(cfg).avg_fidelity_sim
        for p in (0.0, 0.1, 0.2):
            rep = average_fidelity(cfg, NoiseSpec(NoiseKind.BIT_FLIP, p))
            worst_const = max(worst_const, abs(rep.per_placement[6] - noiseless))
            for q in CHANNEL_LABELS:
                if q != 6:
                    worst_other = max(
                        worst_other, abs(rep.per_placement[q] - (1 - p) * noiseless)
                    )
    passed = worst_const < 1e-11 and worst_other < 1e-10
    detail = f"qubit 6 drift={worst_const:.1e}, other placements={worst_other:.1e}"
    return CriterionResult(
        9, "qubit6", "qubit-6 bit-flip immunity", passed, max(worst_const, worst_other), 1e-10, detail
    )


def check_noisy_closed() -> CriterionResult:
    grid = analysis.midpoint_grid(4)
    worst = 0.0
    for scheme in SCHEMES:
        for kind in NOISY_KINDS:
            for t in grid:
                for f in grid:
                    for p in (0.05, 0.15, 0.25):
                        rep = average_fidelity(SchemeConfig(scheme, t, f), NoiseSpec(kind, p))
                        worst = max(worst, rep.abs_deviation)
    return _result(10, "noisy_closed", "noisy closed forms, 4x4x3 grid", worst, 1e-9)


def check_delta_b() -> CriterionResult:
    p = 0.1
    theta, product, delta = analysis.locate_delta_maximum(NoiseKind.BIT_FLIP, p)
    locus_dev = abs(product - analysis.optimal_bitflip_product(p))
    value_dev = abs(delta - 0.058)
    sim = analysis.delta_F(theta, QUARTER, NoiseKind.BIT_FLIP, p, simulate=True)
    sim_dev = abs(sim - delta)
    passed = locus_dev < 1e-6 and value_dev < 1e-3 and sim_dev < 1e-9
    detail = f"sin2t*sin2f={product:.9f}, Delta F^B={delta:.6f}"
    return CriterionResult(
        11, "delta_b", "bit-flip Delta F optimum at p=0.1", passed, max(locus_dev, sim_dev), 1e-6, detail
    )


def check_determinism() -> CriterionResult:
    from .report import sweep_csv

    cfg = SchemeConfig(Scheme.GHZ2, 0.5, 0.9)
    noise = NoiseSpec(NoiseKind.DEPOLARIZING, 0.1)
    a = average_fidelity(cfg, noise, MonteCarlo(2000, SEED))
    b = average_fidelity(cfg, noise, MonteCarlo(2000, SEED))
    same_mc = a.avg_fidelity_sim == b.avg_fidelity_sim and a.std_error == b.std_error

    def csv_text():
        buf = io.StringIO()
        rows = analysis.grid_sweep([0.5, 0.9], [0.7], [0.1], kinds=NOISY_KINDS)
        sweep_csv(rows, buf)
        return buf.getvalue()

    same_csv = csv_text() == csv_text()
    passed = same_mc and same_csv
    detail = f"MC identical={'yes' if same_mc else 'no'}, CSV identical={'yes' if same_csv else 'no'}"
    return CriterionResult(12, "determinism", "reproducible reports", passed, 0.0 if passed else 1.0, 0.5, detail)


CRITERIA: dict[str, Callable[[], CriterionResult]] = {
    "basis": check_basis,
    "ideal": check_ideal,
    "per_input": check_per_input,
    "noiseless_avg": check_noiseless_avg,
    "five_degree": check_five_degree,
    "delta_max": check_delta_max,
    "ghz_outcomes": check_ghz_outcomes,
    "table1": check_table1,
    "qubit6": check_qubit6,
    "noisy_closed": check_noisy_closed,
    "delta_b": check_delta_b,
    "determinism": check_determinism,
}


def run_verify(only=None) -> list[CriterionResult]:
    keys = list(CRITERIA) if not only else list(only)
    unknown = [k for k in keys if k not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}; choose from {list(CRITERIA)}")
    return [CRITERIA[k]() for k in keys]


def format_report(results) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
