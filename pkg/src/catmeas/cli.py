"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad
configuration or unreadable input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .born import injectivity_witness, reconstruct_report
from .errors import CatMeasError, ConfigInvalid, NotAMeasure
from .instances import SUITES, RunConfig, default_tol, gen_instances
from .jsonio import candidate_from_json, dumps, load, operator_from_json, operator_to_json
from .naturality import extract_xi
from .operators import as_density, as_effect
from .suites import run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--max-atoms", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="default: $CATMEAS_TOL or 1e-10")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catmeas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a seeded bundle of random instances")
    _add_run_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run verification suites")
    _add_run_flags(p)
    _add_output_flags(p)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--fault-inject", action="store_true", help="plant faults so that checks must fail")

    p = sub.add_parser("extract-xi", help="value of a candidate's effect functional")
    p.add_argument("--candidate", type=Path, required=True)
    p.add_argument("--effect", type=Path, required=True)
    _add_output_flags(p)

    p = sub.add_parser("witness", help="POVM separating two density operators")
    p.add_argument("--rho", type=Path, required=True)
    p.add_argument("--sigma", type=Path, required=True)
    _add_output_flags(p)

    p = sub.add_parser("reconstruct", help="recover the density operator inducing a candidate")
    p.add_argument("--candidate", type=Path, required=True)
    p.add_argument("--dim", type=int, default=None)
    _add_output_flags(p)
    return parser


def _emit(args, payload: dict, text: str | None = None) -> None:
    out = dumps(payload) if args.format == "json" or text is None else text
    if args.out is not None:
        args.out.write_text(out)
    else:
        sys.stdout.write(out)


def _tol(args) -> float:
    return args.tol if args.tol is not None else default_tol()


def _cmd_gen(args) -> int:
    cfg = RunConfig(args.seed, args.dim, args.max_atoms, args.trials, _tol(args), args.format, "all")
    _emit(args, gen_instances(cfg).to_json())
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = RunConfig(
        args.seed, args.dim, args.max_atoms, args.trials, _tol(args), args.format, args.suite, args.fault_inject
    ).validate()
    report = run_suite(cfg)
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_extract_xi(args) -> int:
    t = candidate_from_json(load(args.candidate))
    m = as_effect(operator_from_json(load(args.effect)))
    try:
        value = extract_xi(t, m)
    except NotAMeasure as exc:
        _emit(args, {"pass": False, "error": str(exc), "values": list(exc.values)}, f"not a measure: {exc}\n")
        return EXIT_FAIL
    _emit(args, {"pass": True, "xi": value}, f"xi = {value!r}\n")
    return EXIT_OK


def _cmd_witness(args) -> int:
    rho = as_density(operator_from_json(load(args.rho)), tol=max(_tol(args), 1e-9))
    sigma = as_density(operator_from_json(load(args.sigma)), tol=max(_tol(args), 1e-9))
    w = injectivity_witness(rho, sigma)
    text = f"gap = {w.gap!r}  rank(P) = {w.projector_rank}  eps = {w.eps!r}\n"
    _emit(args, {"pass": w.gap > 0, **w.to_dict()}, text)
    return EXIT_OK if w.gap > 0 else EXIT_FAIL


def _cmd_reconstruct(args) -> int:
    t = candidate_from_json(load(args.candidate))
    dim = args.dim if args.dim is not None else t.dim
    try:
        rec = reconstruct_report(t, dim)
    except CatMeasError as exc:
        payload = {"pass": False, "error": f"{type(exc).__name__}: {exc}"}
        _emit(args, payload, f"not induced by any state: {exc}\n")
        return EXIT_FAIL
    payload = {
        "pass": True,
        "state": operator_to_json(rec.state),
        "fit_residual": rec.residual,
        "condition_number": rec.condition_number,
    }
    _emit(args, payload, f"recovered state (fit residual {rec.residual:.3e})\n{rec.state.matrix}\n")
    return EXIT_OK


COMMANDS = {
    "gen": _cmd_gen,
    "verify": _cmd_verify,
    "extract-xi": _cmd_extract_xi,
    "witness": _cmd_witness,
    "reconstruct": _cmd_reconstruct,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ConfigInvalid as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CatMeasError, OSError, KeyError, ValueError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
