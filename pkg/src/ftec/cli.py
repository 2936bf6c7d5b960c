"""ftec command line: table, correct, sweep, emit."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .code import CodeError, load_code, syndrome_str
from .decode import AmbiguousSyndrome, build_table, verify_table1
from .experiments import (
    FIDELITY_TOL,
    random_logical,
    run_counterexample,
    run_protocol,
    sweep_exhaustive,
    sweep_stochastic,
)
from .extraction import compile_full, compile_presentation_walk
from .noise import FaultError, FaultLocation
from .pauli import PauliError, PauliOperator
from .code import errors_up_to_weight

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("FTEC_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"FTEC_SEED is not an integer: {env!r}") from None
    return 0


def _config(args) -> dict:
    cfg = {"command": args.command, "code": args.code, "mode": args.mode,
           "seed": args.seed, "max_rounds": args.max_rounds}
    for key in ("error", "all_single_errors", "states", "fault", "exhaustive", "p",
                "trials", "walk"):
        val = getattr(args, key, None)
        if val not in (None, False) and (key != "trials" or args.p is not None):
            cfg[key] = val
    return cfg


def _header(args) -> str:
    return f"# ftec {__version__} " + " ".join(f"{k}={v}" for k, v in _config(args).items())


def _load(args):
    try:
        return load_code(args.code)
    except (CodeError, PauliError) as exc:
        raise InputError(f"bad code {args.code!r}: {exc}") from exc


def _logical_states(spec: str, code, rng) -> list[np.ndarray]:
    if spec.startswith("random:"):
        try:
            count = int(spec[7:])
        except ValueError:
            raise InputError(f"bad state spec {spec!r}") from None
        return [random_logical(code, rng) for _ in range(count)]
    try:
        amps = np.array([complex(t) for t in spec.split(",")])
    except ValueError:
        raise InputError(f"bad state spec {spec!r}") from None
    if amps.size != 1 << code.k:
        raise InputError(f"state needs {1 << code.k} amplitudes")
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise InputError("state amplitudes are all zero")
    return [amps / norm]


# -- commands ---------------------------------------------------------------------


def cmd_table(args) -> int:
    code = _load(args)
    try:
        table = build_table(code)
    except AmbiguousSyndrome as exc:
        print(f"ambiguous: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(_header(args))
    print(table.dump())
    print(f"# {len(table)} populated of {1 << code.g} syndromes")
    if code.name == "five":
        report = verify_table1(table)
        for line in report.lines():
            print(f"# {line}")
        return EXIT_OK if report.ok else EXIT_FAIL
    return EXIT_OK


def _errors_for(args, code) -> list[PauliOperator]:
    if args.error:
        try:
            return [PauliOperator.from_label(args.error, code.n)]
        except PauliError as exc:
            raise InputError(str(exc)) from exc
    errs = list(errors_up_to_weight(code.n, code.t))
    return errs[1:] if args.all_single_errors else errs


def cmd_correct(args) -> int:
    code = _load(args)
    rng = np.random.default_rng(args.seed)
    circuit, _ = compile_full(code, args.mode, check_bounds=False)
    table = build_table(code)
    states = _logical_states(args.states, code, rng)
    errors = _errors_for(args, code)
    rows, recovered = [], 0
    for si, logical in enumerate(states):
        for e in errors:
            res = run_protocol(code, circuit, table, logical, rng, error=e,
                               max_rounds=args.max_rounds)
            ok = res.status == "ok" and res.fidelity >= 1 - FIDELITY_TOL
            recovered += ok
            rows.append({"state": si, "error": e.label(), **res.to_dict(), "recovered": ok})
    total = len(rows)
    if args.json:
        print(json.dumps({"version": __version__, "config": _config(args),
                          "cases": rows, "recovered": recovered, "total": total},
                         indent=2, sort_keys=True))
    else:
        print(_header(args))
        print(f"{'state':>5}  {'error':<6} {'syndrome':<10} {'rounds':>6}  {'fidelity':>14}  status")
        for r in rows:
            print(f"{r['state']:>5}  {r['error']:<6} {r['syndrome'] or '-':<10} "
                  f"{r['rounds']:>6}  {r['fidelity']:>14.12f}  {r['status']}")
        print(f"# {recovered}/{total} recovered")
    return EXIT_OK if recovered == total else EXIT_FAIL


def cmd_sweep(args) -> int:
    code = _load(args)
    chosen = [bool(args.exhaustive), args.fault is not None, args.p is not None]
    if sum(chosen) > 1:
        raise InputError("give at most one of --exhaustive, --fault, --p")
    report = {"version": __version__, "config": _config(args), "seed": args.seed}
    if args.exhaustive:
        result = sweep_exhaustive(args.code, args.mode, args.seed, max_rounds=args.max_rounds,
                                  workers=args.workers)
    elif args.fault is not None:
        try:
            loc = FaultLocation.parse(args.fault)
            result = sweep_exhaustive(args.code, args.mode, args.seed,
                                      max_rounds=args.max_rounds, rounds=(1,),
                                      locations=[loc])
        except FaultError as exc:
            raise InputError(str(exc)) from exc
    elif args.p is not None:
        result = sweep_stochastic(args.code, args.mode, args.seed, args.p, args.trials,
                                  max_rounds=args.max_rounds)
    else:
        result = {"total": 0, "passed": 0, "failed": 0, "failures": []}
    report["result"] = result
    try:
        report["counterexample"] = run_counterexample(code, args.seed, args.max_rounds)
    except ValueError as exc:
        report["counterexample"] = {"skipped": str(exc)}
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if result["failed"] == 0 else EXIT_FAIL


def cmd_emit(args) -> int:
    code = _load(args)
    if args.walk:
        if code.name != "five":
            raise InputError("--walk is only defined for the five-qubit code")
        from .extraction import resource_report

        circuit = compile_presentation_walk(args.mode)
        report = resource_report(circuit, code.k)
    else:
        circuit, report = compile_full(code, args.mode, check_bounds=False)
    print(_header(args))
    sys.stdout.write(circuit.to_text())
    for line in report.lines():
        print(f"# {line}")
    return EXIT_OK if report.within_bounds else EXIT_FAIL


COMMANDS = {"table": cmd_table, "correct": cmd_correct, "sweep": cmd_sweep, "emit": cmd_emit}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ftec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--code", default="five", help="five | steane | file:PATH")
    common.add_argument("--mode", choices=("bare", "cat"), default="cat")
    common.add_argument("--seed", type=int, default=None, help="defaults to $FTEC_SEED or 0")
    common.add_argument("--max-rounds", type=int, default=4)
    sub.add_parser("table", parents=[common], help="print the syndrome table")
    p = sub.add_parser("correct", parents=[common], help="recovery demo")
    p.add_argument("--error", help="Pauli label such as Y2, or 'none'")
    p.add_argument("--all-single-errors", action="store_true")
    p.add_argument("--states", default="random:1", help="random:<count> or a,b")
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("sweep", parents=[common], help="fault sweep, JSON report")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--fault", help="@<gate>:<before|after>:<qubit>:<X|Y|Z>")
    p.add_argument("--p", type=float)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("emit", parents=[common], help="print the compiled circuit")
    p.add_argument("--walk", action="store_true", help="five-qubit presentation walk")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed = _resolve_seed(args.seed)
        if args.max_rounds < 2:
            raise InputError("--max-rounds must be at least 2")
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"ftec: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
