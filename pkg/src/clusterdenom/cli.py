"""Command-line front door.

Subcommands:

* ``verify``      run the four-step verification for a named type or a matrix file
* ``enumerate``   explore one cluster pattern and dump counts plus D-matrices
* ``disc``        list tagged arcs or tagged triangulations of the punctured disc
* ``disc-check``  intersection-vector injectivity search
* ``crosscheck``  synchronized flip/mutation walk (arcs vs cluster variables)

Exit codes: 0 verified/pass, 1 usage or input error, 2 counterexample or
collision, 3 budget exceeded.  With ``--jobs 1`` (the default) reports are
byte-identical across runs on the same input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .exmat import BudgetExceededError, ExchangeMatrix, parse_type_name, standard_matrix
from .pattern import dmatrices, explore, explore_dvectors
from .verifier import REPORT_SCHEMA_VERSION, verify
from . import punctured_disc as disc
from .reconstruct import fst_crosscheck, injectivity_check, SyncError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_BUDGET = 3


class CliError(Exception):
    pass


def _load_matrix(args):
    if bool(args.type) == bool(args.matrix):
        raise CliError("exactly one of --type or --matrix is required")
    if args.type:
        letter, rank = parse_type_name(args.type)
        return standard_matrix(letter, rank), args.type.upper()
    try:
        with open(args.matrix) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read matrix file: {exc}")
    try:
        b = data["b"]
        n = int(data.get("n", len(b)))
        if len(b) != n:
            raise ValueError("matrix size disagrees with n")
        return ExchangeMatrix(b, data.get("symmetrizer")), None
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid matrix file: {exc}")


def _emit(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_verify(args):
    matrix, type_name = _load_matrix(args)
    report = verify(
        matrix,
        type_name=type_name,
        max_classes=args.max_classes,
        max_seconds=args.max_seconds,
        checkpoint=args.checkpoint,
        resume=args.resume,
        jobs=args.jobs,
        progress=(lambda i, m, s: print(f"class {i + 1}/{m}: {s} clusters", file=sys.stderr))
        if args.extended
        else None,
    )
    _emit(report.to_dict(), args.out)
    if report.verdict == "verified":
        return EXIT_OK
    if report.verdict == "counterexample":
        return EXIT_COUNTEREXAMPLE
    return EXIT_BUDGET


def _cmd_enumerate(args):
    matrix, type_name = _load_matrix(args)
    if args.engine == "laurent":
        pattern = explore(matrix)
        mats = dmatrices(pattern)
        counts = (pattern.num_variables, pattern.num_clusters)
    else:
        pattern = explore_dvectors(matrix)
        mats = pattern.dmatrices()
        counts = (pattern.num_variables, pattern.num_clusters)
    payload = {
        "type": type_name,
        "engine": args.engine,
        "variables": counts[0],
        "clusters": counts[1],
        "dmatrices": [[list(col) for col in d.columns] for d in mats],
    }
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_disc(args):
    if args.n < 4:
        raise CliError("the once-punctured disc model needs --n >= 4")
    if args.list_arcs:
        payload = {
            "n": args.n,
            "arcs": [disc.arc_to_dict(a) for a in disc.all_tagged_arcs(args.n)],
        }
    elif args.list_triangulations:
        payload = {
            "n": args.n,
            "triangulations": [
                [disc.arc_to_dict(a) for a in t] for t in disc.tagged_triangulations(args.n)
            ],
        }
    else:
        raise CliError("one of --list-arcs or --list-triangulations is required")
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_disc_check(args):
    if args.n < 4:
        raise CliError("the once-punctured disc model needs --n >= 4")
    sample = args.triangulations
    if sample != "all":
        try:
            sample = int(sample)
        except ValueError:
            raise CliError("--triangulations takes 'all' or a count")
    report = injectivity_check(args.n, args.bound, sample, seed=args.seed)
    _emit(report.to_dict(), args.out)
    return EXIT_OK if report.ok else EXIT_COUNTEREXAMPLE


def _cmd_crosscheck(args):
    if args.n < 4:
        raise CliError("the once-punctured disc model needs --n >= 4")
    try:
        table = fst_crosscheck(args.n, seed=args.seed)
    except SyncError as exc:
        _emit({"n": args.n, "ok": False, "error": str(exc)}, args.out)
        return EXIT_COUNTEREXAMPLE
    _emit(table.to_dict(), args.out)
    return EXIT_OK if table.ok else EXIT_COUNTEREXAMPLE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="clusterdenom",
        description="Exact denominator-vector verification for finite-type cluster algebras.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"clusterdenom {__version__} (report-schema {REPORT_SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_matrix_opts(p):
        p.add_argument("--type", help="named finite type, e.g. A2, D4, F4, E6")
        p.add_argument("--matrix", help="JSON file with fields n, b, optional symmetrizer")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("verify", help="run the four-step verification")
    add_matrix_opts(p)
    p.add_argument("--extended", action="store_true", help="progress output for long runs")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-classes", type=int, default=None)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--checkpoint", help="JSON checkpoint updated after each class")
    p.add_argument("--resume", action="store_true", help="skip classes found in the checkpoint")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("enumerate", help="explore a cluster pattern, dump D-matrices")
    add_matrix_opts(p)
    p.add_argument("--engine", choices=("laurent", "recurrence"), default="laurent")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("disc", help="tagged arcs / triangulations of the punctured disc")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--list-arcs", action="store_true")
    p.add_argument("--list-triangulations", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_disc)

    p = sub.add_parser("disc-check", help="intersection-vector injectivity search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--triangulations", default="all", help="'all' or a sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_disc_check)

    p = sub.add_parser("crosscheck", help="arc/variable correspondence check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_crosscheck)

    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract here is 1
        if exc.code not in (0, None):
            return EXIT_USAGE
        raise
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
