"""Command-line entry point: ``ghz-teleport {teleport,sweep,verify,basis}``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile
from contextlib import contextmanager

import numpy as np

from . import analysis, kernels, report, verify
from .analysis import MonteCarlo, Quadrature
from .bases import basis_table
from .channel import Scheme, SchemeConfig
from .noise import CHANNEL_LABELS, P_MAX, UNIFORM, NoiseKind, NoiseSpec
from .protocol import InputState, teleport


class UsageError(Exception):
    pass


# Parsing helpers -------------------------------------------------------------


def parse_angle(text: str) -> float:
    """``45deg`` or ``0.7854rad``; the unit suffix is required."""
    s = text.strip().lower()
    for suffix, scale in (("deg", math.pi / 180), ("rad", 1.0)):
        if s.endswith(suffix):
            try:
                return float(s[: -len(suffix)]) * scale
            except ValueError:
                break
    raise argparse.ArgumentTypeError(
        f"invalid angle {text!r}: give a number with a 'deg' or 'rad' suffix"
    )


def _loose_angle(text: str) -> float:
    s = text.strip().lower()
    if s.endswith(("deg", "rad")):
        return parse_angle(s)
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}") from None


def parse_input(text: str):
    """``equal`` or ``theta0,phase`` (radians unless suffixed)."""
    if text.strip().lower() == "equal":
        return InputState.equal()
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"--input expects 'theta0,phase' or 'equal', got {text!r}")
    try:
        return InputState.from_angles(_loose_angle(parts[0]), _loose_angle(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str, item):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like min:max:count, got {text!r}")
    try:
        lo, hi = item(parts[0]), item(parts[1])
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError(f"grid count must be at least 1, got {count}")
    if count == 1:
        return [lo]
    return [float(x) for x in np.linspace(lo, hi, count)]


def parse_angle_grid(text: str):
    return _grid(text, parse_angle)


def parse_p_grid(text: str):
    return _grid(text, float)


def parse_method(text: str):
    parts = text.split(":")
    try:
        if parts[0] == "quad" and len(parts) == 2:
            return Quadrature(int(parts[1]))
        if parts[0] == "mc" and len(parts) == 3:
            return MonteCarlo(int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid method {text!r}: {exc}") from None
    raise argparse.ArgumentTypeError(
        f"method must be quad:ORDER or mc:SAMPLES:SEED, got {text!r}"
    )


def parse_placement(text: str):
    if text == UNIFORM:
        return UNIFORM
    try:
        q = int(text)
    except ValueError:
        q = None
    if q not in CHANNEL_LABELS:
        raise argparse.ArgumentTypeError(
            f"placement must be one of {', '.join(map(str, CHANNEL_LABELS))} or uniform"
        )
    return q


# Output helpers --------------------------------------------------------------


@contextmanager
def output_stream(path, default):
    """Yield a text stream; files are written to a temp name and renamed on success."""
    if path in (None, "-"):
        yield default
        return
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise UsageError(f"cannot write to {path!r}")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _matrix_json(m):
    return {"real": np.real(m).tolist(), "imag": np.imag(m).tolist()}


def run_to_dict(run) -> dict:
    return {
        "scheme": run.scheme.value,
        "theta": run.config.theta,
        "phi": run.config.phi,
        "input": {
            "c0": [run.input_state.c0.real, run.input_state.c0.imag],
            "c1": [run.input_state.c1.real, run.input_state.c1.imag],
        },
        "noise": run.noise.kind.value,
        "p": run.noise.p,
        "placement": run.noise.placement,
        "total_fidelity": run.total_fidelity,
        "outcomes": [
            {
                "index": r.outcome.index,
                "bits": r.outcome.named(),
                "probability": r.probability,
                "conditional_fidelity": r.conditional_fidelity,
                "state": None if r.corrected_state is None else _matrix_json(r.corrected_state.matrix),
            }
            for r in run.records
        ],
    }


# Subcommands -----------------------------------------------------------------


def cmd_teleport(args, out) -> int:
    if args.random_input:
        if args.seed is None:
            raise UsageError("--random-input requires --seed")
        state = InputState.random(np.random.default_rng(args.seed))
    elif args.input is not None:
        state = args.input
    else:
        raise UsageError("give --input THETA0,PHASE, --input equal or --random-input --seed N")
    cfg = SchemeConfig(args.scheme, args.theta, args.phi)
    kind = NoiseKind(args.noise)
    spec = NoiseSpec(kind, args.p if kind is not NoiseKind.NONE else 0.0, args.placement)
    specs = [spec] if kind is NoiseKind.NONE else [spec.at(q) for q in spec.placements()]
    runs = [teleport(state, cfg, s) for s in specs]
    mean = float(np.mean([r.total_fidelity for r in runs]))

    if args.json:
        doc = {
            "schema_version": report.SCHEMA_VERSION,
            "total_fidelity": mean,
            "runs": [run_to_dict(r) for r in runs],
        }
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
        return 0

    if kind is not NoiseKind.NONE and spec.p >= P_MAX:
        print(
            f"note: p={spec.p:g} is outside the weak-noise regime (p < 2/7)",
            file=sys.stderr,
        )
    for run in runs:
        label = f"noise {run.noise.kind.value} p={run.noise.p:g} on qubit {run.noise.placement}"
        print(f"# {run.scheme.value} theta={cfg.theta:.6f} phi={cfg.phi:.6f} "
              + (label if kind is not NoiseKind.NONE else "noiseless"), file=out)
        names = run.records[0].outcome.named().keys()
        print(f"{'index':>5}  {'bits':<6}  " + " ".join(f"{n:>7}" for n in names)
              + f"  {'probability':>12}  {'fidelity':>10}", file=out)
        rows = run.nonzero()
        for r in rows:
            bits = " ".join(f"{b:>7}" for b in r.outcome.named().values())
            print(f"{r.outcome.index:>5}  {r.outcome.bitstring():<6}  {bits}  "
                  f"{r.probability:12.8f}  {r.conditional_fidelity:10.6f}", file=out)
        print(f"nonzero outcomes: {len(rows)}/64", file=out)
        print(f"total fidelity: {run.total_fidelity:.6f}", file=out)
    if len(runs) > 1:
        print(f"mean over {len(runs)} placements: {mean:.6f}", file=out)
    return 0


def _write_rows(rows, args, out, **meta):
    if args.format == "json":
        report.sweep_json(rows, out, **meta)
    else:
        report.sweep_csv(rows, out)


def cmd_sweep(args, out) -> int:
    method = args.method
    kinds = [NoiseKind(args.noise)]
    schemes = [Scheme(s) for s in args.scheme]
    summary = []

    if args.delta_f:
        grid = [float(x) for x in analysis.midpoint_grid(args.grid)]
        rows = analysis.grid_sweep(
            grid, grid, args.p_grid or [0.0], schemes=(Scheme.EPR3, Scheme.GHZ2),
            kinds=kinds, placement=args.placement, method=method, jobs=args.jobs,
        )
        half = len(rows) // 2
        deltas = [g.avg_fidelity_sim - e.avg_fidelity_sim for e, g in zip(rows[:half], rows[half:])]
        i = int(np.argmax(deltas))
        best = rows[i]
        summary.append(
            f"max_delta_F={deltas[i]:.6f} at theta={best.theta:.6f} phi={best.phi:.6f} "
            f"p={best.p:g} (sin2t*sin2f={math.sin(2 * best.theta) * math.sin(2 * best.phi):.6f})"
        )
    elif args.table1:
        ps = args.p_grid or parse_p_grid("0:0.25:6")
        rows, slopes = analysis.table1(ps, method)
        for (scheme, kind), (slope, intercept) in slopes.items():
            expected = analysis.TABLE1_SLOPES[(scheme, kind)]
            summary.append(
                f"slope {scheme.value} {kind.value}: {slope:.9f} (expected {expected:.9f}), "
                f"intercept {intercept:.9f}"
            )
    else:
        if args.theta_grid is None or args.phi_grid is None:
            raise UsageError("sweep needs --theta-grid and --phi-grid (or --delta-f / --table1)")
        if kinds[0] is not NoiseKind.NONE and not args.p_grid:
            raise UsageError("noisy sweeps need --p-grid")
        rows = analysis.grid_sweep(
            args.theta_grid, args.phi_grid, args.p_grid or [0.0], schemes=schemes,
            kinds=kinds, placement=args.placement, method=method, jobs=args.jobs,
        )

    with output_stream(args.out, out) as fh:
        _write_rows(rows, args, fh, summary=summary)
    to_stdout = args.out in (None, "-")
    for line in summary:
        print(line, file=sys.stderr if to_stdout else out)
    return 0


def cmd_verify(args, out) -> int:
    results = verify.run_verify(args.only)
    out.write(verify.format_report(results))
    return 0 if all(r.passed for r in results) else 1


def cmd_basis(args, out) -> int:
    rows = basis_table(args.qubits, args.phi, args.digits)
    with output_stream(args.out, out) as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghz-teleport", description=__doc__)
    parser.add_argument("--backend", choices=kernels.BACKENDS, help="kernel backend (default: fastest available)")
    sub = parser.add_subparsers(dest="command", required=True)

    def noise_flags(p, p_flag=True):
        p.add_argument("--noise", choices=[k.value for k in NoiseKind], default="none")
        if p_flag:
            p.add_argument("--p", type=float, default=0.0, help="noise probability")
        p.add_argument("--placement", type=parse_placement, default=UNIFORM,
                       help="noisy qubit (2,4,6,7,8,9) or 'uniform'")

    t = sub.add_parser("teleport", help="run one teleportation and print every outcome")
    t.add_argument("--scheme", choices=[s.value for s in Scheme], required=True)
    t.add_argument("--theta", type=parse_angle, required=True, help="channel angle, e.g. 45deg")
    t.add_argument("--phi", type=parse_angle, required=True, help="measurement angle, e.g. 45deg")
    t.add_argument("--input", type=parse_input, help="'theta0,phase' or 'equal'")
    t.add_argument("--random-input", action="store_true")
    t.add_argument("--seed", type=int)
    noise_flags(t)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_teleport)

    s = sub.add_parser("sweep", help="input-averaged fidelities over a parameter grid")
    s.add_argument("--scheme", choices=[x.value for x in Scheme], action="append",
                   help="repeatable; default both")
    s.add_argument("--theta-grid", type=parse_angle_grid, help="min:max:count, e.g. 10deg:80deg:8")
    s.add_argument("--phi-grid", type=parse_angle_grid)
    s.add_argument("--p-grid", type=parse_p_grid, help="min:max:count")
    noise_flags(s, p_flag=False)
    s.add_argument("--method", type=parse_method, default=Quadrature(32),
                   help="quad:ORDER or mc:SAMPLES:SEED (default quad:32)")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--delta-f", action="store_true", help="GHZ minus EPR on a midpoint grid")
    mode.add_argument("--table1", action="store_true", help="noise slopes at maximal entanglement")
    s.add_argument("--grid", type=int, default=101, help="midpoint grid size for --delta-f")
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--only", action="append", choices=list(verify.CRITERIA))
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("basis", help="dump a measurement basis as CSV")
    b.add_argument("--qubits", type=int, choices=range(2, 7), default=2)
    b.add_argument("--phi", type=parse_angle, required=True)
    b.add_argument("--digits", type=int, default=6)
    b.add_argument("--out")
    b.set_defaults(func=cmd_basis)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "scheme", None) is None and args.command == "sweep":
        args.scheme = [s.value for s in Scheme]
    if args.command == "sweep" and args.grid < 1:
        parser.error("--grid must be at least 1")
    if args.command == "sweep" and args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        with kernels.backend(args.backend or kernels.get_backend()):
            return args.func(args, out)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"ghz-teleport: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
