"""Command-line front end.

Exit codes: 0 success, 2 usage or domain error, 3 basis overflow,
4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import reporting
from .adm_solver import Experiment, compare, experiment_spec, paper_series, solve
from .errors import BasisOverflow, FracError
from .fractional_operators import Sense
from .special_functions import mittag_leffler

EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_IO = 4

PROG = "fracnls"


def _fmt12(value: float) -> str:
    if value == 0.0:
        return "0.000000000000"
    return "%#.12g" % value


def _add_series_args(p: argparse.ArgumentParser, mode_default: str) -> None:
    p.add_argument("--experiment", type=int, choices=(1, 2), default=1,
                   help="1: Caputo, e^{it} at x=0; 2: conformable, e^{i t^d/d} at x=0")
    p.add_argument("--sense", choices=[s.value for s in Sense], default=None,
                   help="derivative sense; must match the experiment (default: implied by it)")
    p.add_argument("--gamma", type=float, default=0.5, help="space order in (0, 1]")
    p.add_argument("--delta", type=float, default=0.5, help="time order in (0, 1]")
    p.add_argument("--depth", type=int, default=2, help="highest series index N (Psi_0..Psi_N)")
    p.add_argument("--mode", choices=reporting.MODES, default=mode_default,
                   help="mechanized recursion or the printed series")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-", help="output path, '-' for standard output")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0],
                                     formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="evaluate E_{xi,zeta}(z)", formatter_class=fmt)
    p.add_argument("--xi", type=float, default=1.0, help="first index, > 0")
    p.add_argument("--zeta", type=float, default=1.0, help="second index (real)")
    p.add_argument("--re", type=float, default=0.0, help="real part of z")
    p.add_argument("--im", type=float, default=0.0, help="imaginary part of z")
    p.set_defaults(func=cmd_ml)

    p = sub.add_parser("solve", help="print a series term by term", formatter_class=fmt)
    _add_series_args(p, "mechanized")
    p.add_argument("--raw", action="store_true",
                   help="print atoms as computed, without rewriting E(t,-n,c) as exponentials")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare the mechanized and printed series (JSON)",
                       formatter_class=fmt)
    p.add_argument("--experiment", type=int, choices=(1, 2), required=True, help="experiment number")
    p.add_argument("--gamma", type=float, required=True, help="space order in (0, 1]")
    p.add_argument("--delta", type=float, required=True, help="time order in (0, 1]")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grid", help="sample the partial sum on a rectangular grid", formatter_class=fmt)
    _add_series_args(p, "paper")
    p.add_argument("--nx", type=int, default=50, help="number of x nodes")
    p.add_argument("--nt", type=int, default=50, help="number of t nodes")
    p.add_argument("--x-min", type=float, help="smallest x node", default=0.02)
    p.add_argument("--x-max", type=float, help="largest x node", default=1.0)
    p.add_argument("--t-min", type=float, help="smallest t node", default=0.02)
    p.add_argument("--t-max", type=float, help="largest t node", default=1.0)
    _add_output_args(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("table1", help="recompute the comparison table", formatter_class=fmt)
    p.add_argument("--depth", type=int, choices=(0, 1, 2), default=2, help="highest series index")
    p.add_argument("--mode", choices=reporting.MODES, default="paper",
                   help="mechanized recursion or the printed series")
    p.add_argument("--with-printed", action="store_true",
                   help="append the printed approximations and per-cell deltas")
    _add_output_args(p)
    p.set_defaults(func=cmd_table1)
    return parser


def _series(args):
    experiment = Experiment(args.experiment)
    if args.sense is not None and Sense(args.sense) is not experiment.sense:
        raise FracError(
            f"experiment {int(experiment)} is posed in the {experiment.sense.value} sense, "
            f"not {args.sense}"
        )
    return reporting.series_for(experiment, args.gamma, args.delta, args.depth, args.mode)


def cmd_ml(args) -> int:
    value = mittag_leffler(args.xi, args.zeta, complex(args.re, args.im))
    print(f"{_fmt12(value.real)} {_fmt12(value.imag)}")
    return 0


def cmd_solve(args) -> int:
    series = _series(args)
    if not args.raw:
        series = series.collapsed()
    sys.stdout.write(series.to_text())
    return 0


def cmd_verify(args) -> int:
    experiment = Experiment(args.experiment)
    mechanized = solve(experiment_spec(experiment, args.gamma, args.delta, depth=2))
    transcribed = paper_series(experiment, args.gamma, args.delta)
    report = compare(mechanized, transcribed).to_dict()
    doc = {
        "experiment": int(experiment),
        "sense": experiment.sense.value,
        "gamma": mechanized.spec.gamma,
        "delta": mechanized.spec.delta,
        **report,
    }
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _export(rows, args, kind) -> None:
    if args.format == "csv":
        reporting.export_csv(rows, args.out, kind)
    else:
        reporting.export_json(rows, args.out, kind)


def cmd_grid(args) -> int:
    grid = reporting.GridSpec(args.x_min, args.x_max, args.t_min, args.t_max, args.nx, args.nt)
    rows = reporting.evaluate_grid(_series(args), grid)
    _export(rows, args, reporting.SampleRow)
    return 0


def cmd_table1(args) -> int:
    if args.with_printed:
        rows = reporting.table1_comparison(args.depth, args.mode)
        kind = reporting.Table1Comparison
    else:
        rows = reporting.table1(args.depth, args.mode)
        kind = reporting.Table1Row
    _export(rows, args, kind)
    return 0


def _fail(code: int, message: str) -> int:
    print(f"{PROG}: error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BasisOverflow as exc:
        where = f" at order {exc.order}" if exc.order is not None else ""
        return _fail(EXIT_OVERFLOW, f"basis overflow{where}: {exc}")
    except FracError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))


if __name__ == "__main__":
    sys.exit(main())
