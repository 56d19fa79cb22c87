"""Command line: gen, construct, verify, oracle, sweep, replay, export.

Exit codes: 0 clean, 1 theorem violation or failed check, 2 precondition or
usage error, 3 search budget hit (answer unknown).
"""

from __future__ import annotations

import argparse
import json
import sys

from .. import oracles
from ..constructor import (
    CaseTrace,
    ConstructionFailed,
    ConstructionUnknown,
    PreconditionError,
    check_preconditions,
    construct,
)
from ..constructor.core import CALL_BUDGET
from ..faults import FaultFileError, FaultSet, load_faults
from ..search import DEFAULT_BUDGET, SearchBudgetExceeded
from ..topology import build_direct, encode
from ..verifier import verify_cycle, verify_path, verify_trace
from . import export
from .generators import GENERATORS, GeneratorError, generate_faults
from .sweep import (
    EXIT_CLEAN,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    EXIT_VIOLATION,
    ConfigError,
    SweepConfig,
    load_bundle,
    run_instance,
    run_sweep,
)


class UsageError(Exception):
    pass


def _topology(args):
    if not 1 <= args.n <= 8:
        raise UsageError(f"-n must be in 1..8, got {args.n}")
    return build_direct(args.n)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _faults(args, t) -> FaultSet:
    if not getattr(args, "faults", None):
        return FaultSet.of(t)
    try:
        return load_faults(t, _read(args.faults))
    except FaultFileError as exc:
        raise UsageError(f"{args.faults}: {exc}") from None


def _vertex(t, text: str) -> int:
    """A vertex given as its digit string a0a1... or as its integer code with a leading '#'."""
    if text.startswith("#"):
        v = int(text[1:])
    else:
        if len(text) != t.n or not text.isdigit():
            raise UsageError(f"vertex {text!r}: expected {t.n} base-4 digits a0..a{t.n - 1}")
        try:
            v = encode([int(c) for c in text])
        except ValueError as exc:
            raise UsageError(f"vertex {text!r}: {exc}") from None
    if not 0 <= v < t.order:
        raise UsageError(f"vertex {text!r} is outside BH_{t.n}")
    return v


# --- subcommands ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    try:
        f = generate_faults(args.generator, args.n, args.max_faults, seed=args.seed, index=args.index,
                            require_ok=not args.any)
    except GeneratorError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, f.to_json() + "\n")
    return EXIT_CLEAN


def cmd_construct(args) -> int:
    t = _topology(args)
    f = _faults(args, t)
    try:
        cycle, trace = construct(t, f, budget=args.call_budget, fallback_budget=args.budget)
    except PreconditionError as exc:
        print(json.dumps({"error": "preconditions", "report": exc.report.to_json()}), file=sys.stderr)
        return EXIT_USAGE
    except ConstructionUnknown as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except ConstructionFailed as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    _write(args.out, export.export_cycle(t, cycle, f.edges, args.format))
    if args.trace_out:
        _write(args.trace_out, export.export_trace(trace, args.format))
    print(" / ".join(trace.case_path()), file=sys.stderr)
    return EXIT_CLEAN


def cmd_verify(args) -> int:
    t = _topology(args)
    f = _faults(args, t)
    try:
        vs = export.load_cycle(_read(args.cycle))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{args.cycle}: {exc}") from None
    if args.path:
        bad = verify_path(t, f, vs)
    else:
        bad = verify_cycle(t, f, vs)
    if args.trace:
        bad += verify_trace(t, f, CaseTrace.from_json(_read(args.trace)))
    for v in bad:
        print(json.dumps(v.to_json()))
    print("ok" if not bad else f"{len(bad)} violation(s)", file=sys.stderr)
    return EXIT_CLEAN if not bad else EXIT_VIOLATION


def cmd_oracle(args) -> int:
    t = _topology(args)
    f = _faults(args, t)
    ends = [_vertex(t, x) for x in args.ends or []]
    want = {"cycle": 0, "through": 2, "lace": 2, "disjoint": 4, "minus": 3}[args.kind]
    if len(ends) != want:
        raise UsageError(f"--kind {args.kind} takes {want} vertices in --ends")
    try:
        if args.kind == "cycle":
            res = oracles.ham_cycle(t, f, budget=args.budget)
            out = None if res is None else {"cycle": list(res.vertices)}
        elif args.kind == "through":
            res = oracles.ham_cycle_through_edge(t, f, tuple(ends), budget=args.budget)
            out = None if res is None else {"cycle": list(res.vertices)}
        elif args.kind == "lace":
            res = oracles.ham_path_laceable(t, f, *ends, budget=args.budget)
            out = None if res is None else {"path": list(res.vertices)}
        elif args.kind == "disjoint":
            res = oracles.two_disjoint_paths(t, f, *ends, budget=args.budget)
            out = None if res is None else {"paths": [list(res.first.vertices), list(res.second.vertices)]}
        else:
            res = oracles.ham_path_minus_vertex(t, *ends, f=f, budget=args.budget)
            out = None if res is None else {"path": list(res.vertices)}
    except SearchBudgetExceeded as exc:
        print(json.dumps({"result": "unknown", "detail": str(exc)}))
        return EXIT_UNKNOWN
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(json.dumps({"result": "absent"} if out is None else {"result": "found", **out}))
    return EXIT_CLEAN if out is not None else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    try:
        cfg = SweepConfig(args.n, args.mode, args.max_faults, args.samples, args.generator, args.seed,
                          args.budget, args.call_budget, args.cross_check, args.workers, args.out, args.bundles)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    if args.out in (None, "-"):
        summary = run_sweep(cfg, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            summary = run_sweep(cfg, fh)
    print(json.dumps(summary.to_json()), file=sys.stderr)
    return summary.exit_code(cfg.n)


def cmd_replay(args) -> int:
    if args.bundle:
        cfg, rec = load_bundle(args.bundle)
    else:
        try:
            cfg = SweepConfig(args.n, "random", args.max_faults, args.index + 1, args.generator, args.seed,
                              args.budget, args.call_budget, 1.0)
            f = generate_faults(cfg.generator, cfg.n, cfg.max_faults, seed=cfg.seed, index=args.index)
        except (ConfigError, GeneratorError) as exc:
            raise UsageError(str(exc)) from None
        rec = run_instance(cfg, f"{cfg.generator}:{cfg.seed}:{args.index}", args.index,
                           [list(e) for e in f.sorted_edges()])
    print(json.dumps(rec.to_json(), sort_keys=True))
    if rec.outcome in ("violation", "invalid") or rec.oracle in ("disagree", "hamiltonian"):
        return EXIT_VIOLATION
    if rec.outcome == "unknown" and cfg.n <= 3:
        return EXIT_UNKNOWN
    return EXIT_CLEAN


def cmd_export(args) -> int:
    t = _topology(args)
    if args.what == "topology":
        _write(args.out, export.export_topology(t, args.format))
    elif args.what == "preconditions":
        _write(args.out, json.dumps(check_preconditions(t, _faults(args, t)).to_json()) + "\n")
    return EXIT_CLEAN


# --- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bhcycle", description="Hamiltonian cycles in faulty balanced hypercubes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, faults=True):
        sp.add_argument("-n", type=int, required=True, help="dimension of BH_n")
        if faults:
            sp.add_argument("--faults", help="fault file: JSON list of [[digits], [digits]] pairs")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node cap of the global search")

    sp = sub.add_parser("gen", help="draw one fault set from a generator")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--generator", choices=sorted(GENERATORS), default="uniform")
    sp.add_argument("--max-faults", type=int, required=True, help="number of faults to draw")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--any", action="store_true", help="do not redraw until the preconditions hold")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("construct", help="build a Hamiltonian cycle of BH_n - F")
    common(sp)
    sp.add_argument("--call-budget", type=int, default=CALL_BUDGET, help="node cap of each case oracle call")
    sp.add_argument("--format", choices=export.FORMATS, default="json")
    sp.add_argument("--out")
    sp.add_argument("--trace-out")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check a cycle (and optionally a trace)")
    common(sp)
    sp.add_argument("--cycle", required=True, help="cycle JSON as written by construct")
    sp.add_argument("--trace", help="trace JSON as written by construct --trace-out")
    sp.add_argument("--path", action="store_true", help="check a Hamiltonian path instead of a cycle")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle", help="run an exact-search oracle")
    common(sp)
    sp.add_argument("--kind", choices=("cycle", "through", "lace", "disjoint", "minus"), default="cycle")
    sp.add_argument("--ends", nargs="*", help="vertices as digit strings a0a1..., or #code")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("sweep", help="run the constructor over many fault sets")
    common(sp, faults=False)
    sp.add_argument("--mode", choices=("exhaustive", "random"), default="random")
    sp.add_argument("--max-faults", type=int)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--generator", choices=sorted(GENERATORS), default="uniform")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--call-budget", type=int, default=CALL_BUDGET)
    sp.add_argument("--cross-check", type=float, default=0.1, help="share of instances re-solved by the oracle")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--bundles", help="directory for replay bundles of bad or fallback instances")
    sp.add_argument("--out", help="JSONL output (default stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("replay", help="re-run one instance from a bundle or its coordinates")
    sp.add_argument("--bundle")
    sp.add_argument("-n", type=int)
    sp.add_argument("--generator", choices=sorted(GENERATORS), default="uniform")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--max-faults", type=int)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--call-budget", type=int, default=CALL_BUDGET)
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("export", help="write BH_n or a precondition report")
    common(sp)
    sp.add_argument("--what", choices=("topology", "preconditions"), default="topology")
    sp.add_argument("--format", choices=export.FORMATS, default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_CLEAN
    if args.command == "replay" and not args.bundle and args.n is None:
        print("replay needs --bundle or -n", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
