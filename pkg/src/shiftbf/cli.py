"""Command-line front end.

Subcommands:
  filter     run the constant-time or the direct bilateral filter on a PGM
  compute-t  exact dynamic range of an image over a square window
  tables     order-threshold / truncation summary tables (CSV)
  bench      timing grid over sigma_s x sigma_r (CSV)

Exit codes: 0 success, 2 flag error, 3 I/O or parse error, 4 numeric
configuration error (e.g. polynomial order cap, term budget).
"""

import argparse
import csv
import math
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _core
from .bilateral import FilterParams, direct_bf, gaussian_range, shiftable_bf
from .errors import (
    InvalidParameterError,
    PgmParseError,
    TermBudgetError,
    UnsupportedOrderError,
)
from .image import checkerboard
from .kernels import KernelFamily, order_threshold, select_plan
from .maxfilter import compute_T
from .metrics import metrics
from .pgmio import inspect_pgm, load_pgm, save_pgm
from .spatial import Box, FirGaussian, IteratedBox

CSV_HEADER = ["method", "sigma_s", "sigma_r", "epsilon", "T", "N", "M",
              "retained_terms", "wall_millis", "mse_vs_direct"]

N0_TABLE_SIGMAS = [5, 10, 20, 30, 40, 60, 80, 100]
TRUNCATION_TABLE_SIGMAS = [3, 5, 8, 10, 12, 15]


@dataclass
class BenchRecord:
    method: str
    sigma_s: float
    sigma_r: float
    epsilon: float
    T: float
    N: int
    M: int
    retained_terms: int
    wall_millis: float
    mse_vs_direct: Optional[float] = None

    def __post_init__(self):
        if self.retained_terms != self.N - 2 * self.M + 1:
            raise InvalidParameterError(
                "retained_terms must equal N - 2M + 1")

    def to_csv_row(self):
        return [self.method, repr(self.sigma_s), repr(self.sigma_r),
                repr(self.epsilon), repr(self.T), str(self.N), str(self.M),
                str(self.retained_terms), repr(self.wall_millis),
                "" if self.mse_vs_direct is None else repr(self.mse_vs_direct)]

    @classmethod
    def from_csv_row(cls, row):
        return cls(method=row[0], sigma_s=float(row[1]), sigma_r=float(row[2]),
                   epsilon=float(row[3]), T=float(row[4]), N=int(row[5]),
                   M=int(row[6]), retained_terms=int(row[7]),
                   wall_millis=float(row[8]),
                   mse_vs_direct=None if row[9] == "" else float(row[9]))

    def human_line(self):
        mse = "-" if self.mse_vs_direct is None else f"{self.mse_vs_direct:.6g}"
        return (f"method={self.method} sigma_s={self.sigma_s:g} "
                f"sigma_r={self.sigma_r:g} epsilon={self.epsilon:g} "
                f"T={self.T:g} N={self.N} M={self.M} "
                f"retained={self.retained_terms} "
                f"wall_millis={self.wall_millis:.3f} mse_vs_direct={mse}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shiftbf",
        description="Constant-time edge-preserving filtering with shiftable range kernels")
    parser.add_argument("--backend", choices=_core.available_backends(),
                        help="force a compute backend (default: best available)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="bilateral-filter a PGM image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--sigma-s", type=float, required=True)
    p.add_argument("--sigma-r", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="truncation tolerance as a fraction of the kernel peak")
    p.add_argument("--kernel", choices=["cosine", "poly"], default="cosine")
    p.add_argument("--spatial", choices=["box", "gauss"], default="gauss",
                   help="box: constant spatial filter; gauss: iterated-box Gaussian")
    p.add_argument("--radius", type=int, default=None,
                   help="window radius (box: the box radius, default ceil(sigma-s); "
                        "gauss: dynamic-range scan radius, default spatial support)")
    p.add_argument("--method", choices=["shiftable", "direct"], default="shiftable",
                   help="direct runs the brute-force Gaussian-range baseline")
    p.add_argument("--fixed-t", type=float, default=None,
                   help="override the computed dynamic range T")
    p.add_argument("--float-out", default=None,
                   help="also dump raw little-endian float64 samples to this path")
    p.add_argument("--csv", default=None, help="append the record to a CSV file")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("compute-t", help="exact windowed dynamic range of an image")
    p.add_argument("--input", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_compute_t)

    p = sub.add_parser("tables", help="emit summary tables as CSV")
    p.add_argument("--which", choices=["n0", "truncation"], required=True)
    p.add_argument("--t", type=float, default=255.0, help="dynamic range")
    p.add_argument("--epsilon", type=float, default=0.05,
                   help="tolerance for the truncation table")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("bench", help="run a timing grid and emit CSV records")
    p.add_argument("--input", default=None,
                   help="PGM input (default: bundled 256x256 synthetic checker)")
    p.add_argument("--sigma-s", default="15", help="comma-separated grid values")
    p.add_argument("--sigma-r", default="10,20,40", help="comma-separated grid values")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--spatial", choices=["box", "gauss"], default="gauss")
    p.add_argument("--repeats", type=int, default=5,
                   help="timing repetitions; the median is reported")
    p.add_argument("--with-direct", action="store_true",
                   help="also run the direct baseline and record the MSE against it")
    p.add_argument("--csv", default=None, help="write CSV here (default stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def _spatial_mode(parser, kind, sigma_s, radius):
    if kind == "box":
        r = radius if radius is not None else max(1, math.ceil(sigma_s))
        if r < 1:
            parser.error("--radius must be >= 1 for the box spatial filter")
        return Box(r)
    return IteratedBox(sigma_s)


def _positive(parser, value, name):
    if value is None or value <= 0:
        parser.error(f"{name} must be positive")
    return value


def cmd_filter(parser, args):
    _positive(parser, args.sigma_s, "--sigma-s")
    _positive(parser, args.sigma_r, "--sigma-r")
    if not 0 <= args.epsilon < 1:
        parser.error("--epsilon must lie in [0, 1)")
    header = inspect_pgm(args.input)
    img = load_pgm(args.input)
    mode = _spatial_mode(parser, args.spatial, args.sigma_s, args.radius)
    window_radius = args.radius if args.spatial == "gauss" else None
    family = KernelFamily.POLYNOMIAL if args.kernel == "poly" else KernelFamily.RAISED_COSINE
    if family is KernelFamily.POLYNOMIAL:
        img = img / header.maxval  # the polynomial family runs on [0, 1]
    params = FilterParams(sigma_s=args.sigma_s, sigma_r=args.sigma_r,
                          epsilon=args.epsilon, spatial=mode, family=family,
                          window_radius=window_radius, fixed_T=args.fixed_t)

    start = time.perf_counter()
    if args.method == "shiftable":
        result = shiftable_bf(img, params)
        out, plan = result.image, result.plan
    else:
        radius = params.resolved_radius()
        T = args.fixed_t if args.fixed_t is not None else compute_T(img, radius)
        if args.spatial == "gauss":
            direct_mode = FirGaussian(args.sigma_s, radius)
        else:
            direct_mode = mode
        out = direct_bf(img, direct_mode, gaussian_range(args.sigma_r))
        # record the approximation plan the fast path would have used
        plan = select_plan(T, args.sigma_r, args.epsilon, family)
    wall = (time.perf_counter() - start) * 1e3

    if family is KernelFamily.POLYNOMIAL:
        out = out * header.maxval
    save_pgm(out, args.output, maxval=header.maxval)
    if args.float_out:
        with open(args.float_out, "wb") as fh:
            fh.write(np.ascontiguousarray(out, dtype="<f8").tobytes())
    record = BenchRecord(method=args.method, sigma_s=args.sigma_s,
                         sigma_r=args.sigma_r, epsilon=args.epsilon, T=plan.T,
                         N=plan.N, M=plan.M, retained_terms=plan.retained_terms,
                         wall_millis=wall)
    print(record.human_line())
    if args.csv:
        _append_csv(args.csv, [record])
    return 0


def cmd_compute_t(parser, args):
    if args.radius < 0:
        parser.error("--radius must be >= 0")
    img = load_pgm(args.input)
    start = time.perf_counter()
    t_value = compute_T(img, args.radius)
    wall = (time.perf_counter() - start) * 1e3
    print(f"T={t_value:g} wall_millis={wall:.3f}")
    return 0


def cmd_tables(parser, args):
    _positive(parser, args.t, "--t")
    writer = csv.writer(sys.stdout)
    if args.which == "n0":
        writer.writerow(["sigma_r", "N0"])
        for sigma_r in N0_TABLE_SIGMAS:
            writer.writerow([sigma_r, order_threshold(args.t, sigma_r, mode="round")])
    else:
        if not 0 < args.epsilon < 1:
            parser.error("--epsilon must lie in (0, 1) for the truncation table")
        writer.writerow(["sigma_r", "N_before", "N_after", "pct_dropped"])
        for sigma_r in TRUNCATION_TABLE_SIGMAS:
            plan = select_plan(args.t, sigma_r, args.epsilon)
            pct = 100.0 * (plan.N + 1 - plan.retained_terms) / (plan.N + 1)
            writer.writerow([sigma_r, plan.N, plan.retained_terms, f"{pct:.0f}"])
    return 0


def cmd_bench(parser, args):
    if args.repeats < 1:
        parser.error("--repeats must be >= 1")
    img = load_pgm(args.input) if args.input else checkerboard(256, 256, 32)
    try:
        sigma_s_grid = [float(v) for v in args.sigma_s.split(",") if v]
        sigma_r_grid = [float(v) for v in args.sigma_r.split(",") if v]
    except ValueError:
        parser.error("--sigma-s/--sigma-r must be comma-separated numbers")
    if not sigma_s_grid or not sigma_r_grid:
        parser.error("empty parameter grid")
    records = []
    for sigma_s in sigma_s_grid:
        _positive(parser, sigma_s, "--sigma-s")
        for sigma_r in sigma_r_grid:
            _positive(parser, sigma_r, "--sigma-r")
            mode = _spatial_mode(parser, args.spatial, sigma_s, None)
            params = FilterParams(sigma_s=sigma_s, sigma_r=sigma_r,
                                  epsilon=args.epsilon, spatial=mode)
            walls = []
            for _ in range(args.repeats):
                start = time.perf_counter()
                result = shiftable_bf(img, params)
                walls.append((time.perf_counter() - start) * 1e3)
            mse = None
            if args.with_direct:
                radius = params.resolved_radius()
                direct_mode = mode if isinstance(mode, Box) else FirGaussian(sigma_s, radius)
                baseline = direct_bf(img, direct_mode, gaussian_range(sigma_r))
                mse = metrics(result.image, baseline).mse
            plan = result.plan
            records.append(BenchRecord(
                method="shiftable", sigma_s=sigma_s, sigma_r=sigma_r,
                epsilon=args.epsilon, T=plan.T, N=plan.N, M=plan.M,
                retained_terms=plan.retained_terms,
                wall_millis=statistics.median(walls), mse_vs_direct=mse))
    if args.csv:
        _append_csv(args.csv, records)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.to_csv_row())
    return 0


def _append_csv(path, records):
    needs_header = True
    try:
        with open(path, "r", newline="") as fh:
            needs_header = fh.read(1) == ""
    except FileNotFoundError:
        pass
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh)
        if needs_header:
            writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.to_csv_row())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    previous_backend = None
    if args.backend:
        try:
            previous_backend = _core.use_backend(args.backend)
        except ValueError as exc:
            parser.error(str(exc))
    try:
        return args.func(parser, args)
    except (PgmParseError, OSError) as exc:
        print(f"shiftbf: error: {exc}", file=sys.stderr)
        return 3
    except (UnsupportedOrderError, TermBudgetError, InvalidParameterError) as exc:
        print(f"shiftbf: error: {exc}", file=sys.stderr)
        return 4
    finally:
        if previous_backend is not None:
            _core.use_backend(previous_backend)


if __name__ == "__main__":
    sys.exit(main())
