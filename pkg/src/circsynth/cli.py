"""Command-line entry point: ``circ-synth <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from . import bench as bench_mod
from .circuit import apply_bidirectional_opt, depth_report
from .circulant import CirculantConfig, synthesize
from .cost import CostKind
from .errors import CircSynthError
from .fixtures import CIRCUIT_FIXTURES, FIXTURE_NAMES, MATRIX_FIXTURES
from .textio import format_circuit, format_matrix, read_circuit, read_matrix, write_circuit
from .triangular import eliminate_unit_upper_triangular

log = logging.getLogger("circsynth")


def _load_matrix(spec: str):
    """A path, or a bundled matrix fixture name when no such file exists."""
    if not Path(spec).exists() and spec in MATRIX_FIXTURES:
        return MATRIX_FIXTURES[spec]()
    return read_matrix(spec)


def _load_circuit(spec: str):
    if not Path(spec).exists() and spec in CIRCUIT_FIXTURES:
        return CIRCUIT_FIXTURES[spec]()
    return read_circuit(spec)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _print_depths(c) -> None:
    rep = depth_report(c)
    print(f"quantum_depth={rep.quantum_depth} classical_depth={rep.classical_depth} gate_count={rep.gate_count}")


def cmd_synth(args) -> int:
    m = _load_matrix(args.input)
    cfg = CirculantConfig(args.threshold, not args.no_fallback, not args.no_dedup)
    report = synthesize(
        m, args.mode, cfg, CostKind.parse(args.cost), args.trials, args.seed,
        max_depth=args.max_depth, jobs=args.jobs, target=args.input,
        escape_steps=args.escape_steps,
    )
    for line in report.summary_lines():
        print(line)
    check = bench_mod.verify(report.circuit, m)
    print("verify " + check.lines()[0])
    if args.out:
        write_circuit(args.out, report.circuit)
    else:
        sys.stdout.write(format_circuit(report.circuit))
    if args.json:
        records = {
            "target": report.target,
            "mode": report.mode,
            "cost": report.cost_kind.cli_name if report.cost_kind is not None else None,
            "trials": report.trials,
            "seed": report.seed,
            "quantum_depth": report.quantum_depth,
            "classical_depth": report.classical_depth,
            "gate_count": report.gate_count,
            "best_trial": asdict(report.best_trial),
            "blocks": [asdict(b) for b in report.blocks],
            "wall_time": round(report.wall_time, 3),
        }
        Path(args.json).write_text(json.dumps(records, indent=2, default=list) + "\n")
    return 0 if check.ok else 1


def cmd_synth_tri(args) -> int:
    m = _load_matrix(args.input)
    res = eliminate_unit_upper_triangular(m)
    print(f"rounds={len(res.rounds)} sizes={[len(r) for r in res.rounds]}")
    _print_depths(res.circuit)
    if args.out:
        write_circuit(args.out, res.circuit)
    else:
        sys.stdout.write(format_circuit(res.circuit))
    return 0


def cmd_verify(args) -> int:
    check = bench_mod.verify(_load_circuit(args.circuit), _load_matrix(args.matrix))
    for line in check.lines():
        print(line)
    return 0 if check.ok else 1


def cmd_depth(args) -> int:
    _print_depths(_load_circuit(args.circuit))
    return 0


def cmd_opt(args) -> int:
    c = apply_bidirectional_opt(_load_circuit(args.input))
    _print_depths(c)
    if args.out:
        write_circuit(args.out, c)
    else:
        sys.stdout.write(format_circuit(c))
    return 0


def cmd_fixtures(args) -> int:
    if args.name in MATRIX_FIXTURES:
        _emit(format_matrix(MATRIX_FIXTURES[args.name]()), args.out)
    else:
        _emit(format_circuit(CIRCUIT_FIXTURES[args.name]()), args.out)
    return 0


def cmd_bench(args) -> int:
    targets = bench_mod.DEFAULT_TARGETS
    if args.targets:
        by_name = {t.name: t for t in targets}
        unknown = [n for n in args.targets if n not in by_name]
        if unknown:
            raise SystemExit(f"unknown bench targets: {', '.join(unknown)}")
        targets = tuple(by_name[n] for n in args.targets)
    overrides = {}
    if args.max_depth_aes is not None:
        overrides["mixcolumn-depth"] = {"max_depth": args.max_depth_aes}
    if args.max_count_m0 is not None:
        overrides["whirlwind-m0-size"] = {"max_count": args.max_count_m0}
    targets = tuple(
        bench_mod.BenchTarget(**{**vars(t), **overrides.get(t.name, {})}) for t in targets
    )
    cfg = bench_mod.BenchConfig(args.trials, args.seed, args.threshold, args.fallback, args.jobs, args.escape_steps)
    rows = bench_mod.bench(targets, cfg)
    print(bench_mod.format_table(rows))
    return 0 if all(r.accepted for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circ-synth", description="CNOT circuit synthesis for GF(2) linear layers")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a circuit for a matrix file")
    s.add_argument("--in", dest="input", required=True, help="matrix file or fixture name")
    s.add_argument("--mode", choices=("depth", "size"), default="depth")
    s.add_argument("--cost", choices=("sum", "prod", "sq"), default="sq")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threshold", type=int, default=8)
    s.add_argument("--no-fallback", action="store_true")
    s.add_argument("--no-dedup", action="store_true")
    s.add_argument("--max-depth", type=int, default=None)
    s.add_argument("--escape-steps", type=int, default=0, help="size mode: random moves allowed when the greedy stalls")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: CIRC_SYNTH_JOBS or 1)")
    s.add_argument("--out", help="circuit output path (default: stdout)")
    s.add_argument("--json", help="also write the report as JSON to this path")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("synth-tri", help="synthesize a unit upper-triangular matrix round by round")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth_tri)

    s = sub.add_parser("verify", help="check a circuit against a matrix")
    s.add_argument("circuit")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("depth", help="report depths and gate count of a circuit")
    s.add_argument("circuit")
    s.set_defaults(func=cmd_depth)

    s = sub.add_parser("opt", help="run the bidirectional depth-compaction pass")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_opt)

    s = sub.add_parser("fixtures", help="print a bundled matrix or circuit")
    s.add_argument("name", choices=FIXTURE_NAMES)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fixtures)

    s = sub.add_parser("bench", help="run the benchmark targets and compare with reference values")
    s.add_argument("--targets", nargs="*", help=f"subset of: {', '.join(t.name for t in bench_mod.DEFAULT_TARGETS)}")
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threshold", type=int, default=8)
    s.add_argument("--fallback", action="store_true", help="also try the untransformed matrix")
    s.add_argument("--jobs", type=int, default=None)
    s.add_argument("--escape-steps", type=int, default=3)
    s.add_argument("--max-depth-aes", type=int, default=None, help="acceptance bound for mixcolumn-depth")
    s.add_argument("--max-count-m0", type=int, default=None, help="acceptance bound for whirlwind-m0-size")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CircSynthError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
