"""Command-line interface: ``indexcvm {test,simulate,ppplot,critval}``.

Exit codes: 0 success, 2 data/argument error, 3 empty cell, 4 unidentified
direction, 5 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .config import load_grid
from .data import Direction, load_csv
from .errors import ConfigError, DataError, EmptyCellError, IndexCvmError
from .harness import emit_pairs_csv, emit_table_csv, pp_gap, pp_plot_data, run_grid
from .index import AdeConfig
from .limit import STANDARD_LEVELS, cvm_limit_quantile
from .process import run_test

log = logging.getLogger("indexcvm")

EXIT_OK = 0
EXIT_DATA = 2
EXIT_EMPTY_CELL = 3
EXIT_UNIDENTIFIED = 4
EXIT_CONFIG = 5


def _direction(spec: str):
    if spec.strip().lower() == "estimate":
        return None
    try:
        v = [float(s) for s in spec.replace(";", ",").split(",") if s.strip()]
    except ValueError:
        raise DataError(f"--direction must be 'estimate' or a comma-separated vector, got {spec!r}") from None
    return Direction.normalized(v)


def _ade_from_args(args) -> AdeConfig:
    return AdeConfig(bandwidth_scale=args.bandwidth_scale, round_to_grid=not args.no_round_to_grid)


def _print_report(res, level, fmt, out):
    if fmt == "json-lines":
        rec = res.to_dict()
        rec["level"] = level
        rec["reject"] = res.p_value_cvm < level
        out.write(json.dumps(rec) + "\n")
        return
    out.write(f"T_n (Cramer-von Mises) : {res.t_n!r}\n")
    out.write(f"KS statistic           : {res.ks_n!r}  (no p-value)\n")
    out.write(f"p-value                : {res.p_value_cvm!r}\n")
    out.write(f"reject at level {level:g}  : {'yes' if res.p_value_cvm < level else 'no'}\n")
    out.write(f"m                      : {res.m}\n")
    out.write(f"mode                   : {res.mode}\n")
    out.write(f"direction              : {', '.join(repr(float(b)) for b in res.direction)}\n")
    out.write(f"normalizer             : {res.normalizer!r}\n")
    out.write(f"n0, n1                 : {res.n0}, {res.n1}\n")
    out.write("cell counts (k: class0 class1)\n")
    for k in range(res.m):
        out.write(f"  {k + 1:4d}: {res.counts[0, k]:6d} {res.counts[1, k]:6d}\n")


def cmd_test(args) -> int:
    ds = load_csv(args.data, x_prefix=args.x_prefix, y_col=args.y_col, z_col=args.z_col)
    direction = _direction(args.direction)
    ade = _ade_from_args(args)
    m = args.m
    while True:
        try:
            res = run_test(ds, m, direction, ade=ade, allow_single_class=args.allow_single_class_cells)
            break
        except EmptyCellError as exc:
            if not args.auto_shrink_m or m <= 1:
                raise
            log.warning("%s; retrying with m=%d", exc, m - 1)
            m -= 1
    _print_report(res, args.level, args.format, sys.stdout)
    return EXIT_OK


def cmd_simulate(args) -> int:
    grid = load_grid(args.config, seed=args.seed)
    if args.reps is not None:
        grid = type(grid)(**{**grid.__dict__, "reps": args.reps})
    table = run_grid(grid, workers=args.workers, checkpoint_dir=args.checkpoint_dir)
    emit_table_csv(table, args.out, pivot=args.pivot)
    for row in table:
        c = row.cell
        flag = "  ABORTED" if row.aborted else ""
        print(f"d={c.d} m={c.m} sigma={c.sigma:g} theta={c.theta:g} {c.mode:8s} "
              f"rate={row.rate:.3f} se={row.mc_se:.4f} invalid={row.invalid}{flag}")
    print(f"wrote {len(table)} rows to {args.out}")
    return EXIT_OK


def cmd_ppplot(args) -> int:
    ade = _ade_from_args(args)
    pairs = pp_plot_data(args.d, args.sigma, args.m, args.mode, args.n, args.reps, args.seed,
                         ade=ade, workers=args.workers)
    emit_pairs_csv(pairs, args.out)
    print(f"wrote {len(pairs)} pairs to {args.out}; sup-gap {pp_gap(pairs):.6f}")
    return EXIT_OK


def cmd_critval(args) -> int:
    for p in args.levels:
        if not 0.0 < p < 1.0:
            raise DataError(f"level must lie in (0, 1), got {p!r}")
    for p in args.levels:
        print(f"{p:g}\t{cvm_limit_quantile(p):.6f}")
    return EXIT_OK


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_ade_options(p):
    p.add_argument("--bandwidth-scale", type=float, default=1.0,
                   help="multiplier on the default average-derivative bandwidths")
    p.add_argument("--no-round-to-grid", action="store_true",
                   help="skip rounding the estimated direction to the 1/sqrt(n) grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indexcvm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run the test on a CSV file")
    p.add_argument("data", help="CSV with columns x1..xd, y, z")
    p.add_argument("--m", type=_positive_int, required=True, help="number of cells")
    p.add_argument("--direction", default="estimate",
                   help="'estimate' (average derivative) or a comma-separated index vector")
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--format", choices=("text", "json-lines"), default="text")
    p.add_argument("--auto-shrink-m", action="store_true", help="retry with m-1 while a cell lacks a class")
    p.add_argument("--allow-single-class-cells", action="store_true",
                   help="accept cells that contain only one class")
    p.add_argument("--x-prefix", default="x")
    p.add_argument("--y-col", default="y")
    p.add_argument("--z-col", default="z")
    _add_ade_options(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="run a size/power experiment grid")
    p.add_argument("config", help="grid config file, or a bundled name such as table1.cfg")
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    p.add_argument("--reps", type=_positive_int, default=None, help="replications (overrides the config)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--checkpoint-dir", default=None)
    p.add_argument("--pivot", action="store_true", help="lay out rates like the published tables")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ppplot", help="PP-plot pairs of the null statistic against its limit law")
    p.add_argument("--d", type=_positive_int, default=3)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--m", type=_positive_int, default=20)
    p.add_argument("--mode", choices=("oracle", "estimate"), default="estimate")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--reps", type=_positive_int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", required=True)
    _add_ade_options(p)
    p.set_defaults(func=cmd_ppplot)

    p = sub.add_parser("critval", help="quantiles of the asymptotic null law")
    p.add_argument("levels", type=float, nargs="*", default=list(STANDARD_LEVELS))
    p.set_defaults(func=cmd_critval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except EmptyCellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_CELL
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IndexCvmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
