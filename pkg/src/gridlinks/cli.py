"""Command-line front end: ``gridlinks {enumerate,sample,exact,fit}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from gridlinks import exact
from gridlinks.enumeration import exact_table_by_enumeration
from gridlinks.errors import DegenerateDesign, SizeLimitExceeded
from gridlinks.experiments import (
    EXPERIMENTS,
    FORMAT_VERSION,
    MODELS,
    PRESETS,
    fit_columns,
    format_csv,
    format_json,
    run_experiment,
    summary_rows,
    verify,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"7"``, ``"2..7"``, ``"10..500:10"``, or a comma list of those such as ``"2..5,20"``."""
    values: list[int] = []
    try:
        for part in text.split(","):
            if ".." not in part:
                values.append(int(part))
                continue
            body, _, step = part.partition(":")
            lo, hi = body.split("..")
            values.extend(range(int(lo), int(hi) + 1, int(step) if step else 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N, A..B or A..B:STEP") from None
    if not values:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return values


def _margin(m) -> str:
    return str(m) if isinstance(m, Fraction) else f"{m:.20g}"


def _decimal(q: Fraction, digits: int = 30) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(q.numerator) / Decimal(q.denominator))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header: list[str], rows: list[list], comment: str) -> str:
    buf = io.StringIO()
    buf.write(f"# {FORMAT_VERSION} {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_enumerate(args) -> int:
    k_cols = max(3, max(n // 2 for n in args.n))
    header = ["n"] + [f"c_n{k}" for k in range(1, k_cols + 1)] + ["c_n", "mean_k", "mean_k_exact"]
    rows, problems = [], []
    for n in args.n:
        row = exact_table_by_enumeration(n, allow_large=args.allow_large)
        mean = row.mean_components
        rows.append(
            [n]
            + [row.counts.get(k, "") for k in range(1, k_cols + 1)]
            + [row.total, f"{float(mean):.4f}", f"{mean.numerator}/{mean.denominator}"]
        )
        if args.verify:
            table = exact.cbar_table_recurrence(max(n, 2))
            for k in range(1, n // 2 + 1):
                if row.counts.get(k, 0) != table.c(n, k):
                    problems.append(f"n={n} k={k}: enumerated {row.counts.get(k, 0)}, exact {table.c(n, k)}")
            if row.total != exact.count_links(n):
                problems.append(f"n={n}: enumerated {row.total} diagrams, exact {exact.count_links(n)}")
            if mean != exact.expected_components(n):
                problems.append(f"n={n}: mean {mean} vs exact {exact.expected_components(n)}")
    _emit(_table(header, rows, "enumerate"), args.out)
    for p in problems:
        print(f"verify: {p}", file=sys.stderr)
    return EXIT_VERIFY if problems else EXIT_OK


def cmd_sample(args) -> int:
    preset = PRESETS[args.experiment]
    n_values = args.n if args.n is not None else list(preset["n_values"])
    samples = args.samples if args.samples is not None else preset["samples"]
    if args.experiment == "writhe-length" and len(n_values) != 1:
        raise UsageError("writhe-length takes a single --n: the largest grid size")
    results = run_experiment(
        args.experiment,
        n_values,
        samples,
        seed=args.seed,
        workers=args.threads,
        stream_size=args.stream_size,
        bin_width=args.bin_width,
        length_cap=args.length_cap,
    )
    rows = summary_rows(args.experiment, results)
    text = format_json(args.experiment, rows) if args.format == "json" else format_csv(args.experiment, rows)
    _emit(text, args.out)
    if args.verify:
        failures = verify(args.experiment, results)
        for f in failures:
            print(f"verify: {f}", file=sys.stderr)
        if failures:
            return EXIT_VERIFY
    return EXIT_OK


def cmd_exact(args) -> int:
    if max(args.n) > 500:
        raise UsageError("exact tables are limited to n <= 500")
    if min(args.n) < 2:
        raise UsageError("n must be at least 2")
    k_max = args.k_max
    if args.long:
        table = exact.cbar_table_recurrence(max(args.n), k_max)
        header = ["n", "k", "c_nk", "cbar_num", "cbar_den", "bound_margin"]
        rows = []
        for n in args.n:
            for k in range(1, min(k_max, n // 2) + 1):
                v = table.cbar_nk(n, k)
                rows.append([n, k, table.c(n, k), v.numerator, v.denominator, _margin(exact.bound_margin(n, k, v))])
        _emit(_table(header, rows, "exact-long"), args.out)
        return EXIT_OK
    header = (
        ["n", "c_n"]
        + [f"c_n{k}" for k in range(1, k_max + 1)]
        + ["ev_num", "ev_den", "ev", "var_num", "var_den", "var", "cbar_n", "min_bound_margin"]
    )
    rows = []
    for r in exact.summary_rows(args.n, k_max):
        ev, var = r["ev"], r["var"]
        rows.append(
            [r["n"], r["c_n"]]
            + r["c_nk"]
            + [ev.numerator, ev.denominator, _decimal(ev, 20), var.numerator, var.denominator, _decimal(var, 20)]
            + [_decimal(r["cbar_n"]), _margin(r["min_bound_margin"])]
        )
    _emit(_table(header, rows, "exact"), args.out)
    return EXIT_OK


def cmd_fit(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    if not rows:
        raise UsageError(f"{args.input} has no data rows")
    try:
        fit = fit_columns(rows, args.x_col, args.y_col, args.model, args.x_power)
    except KeyError as e:
        raise UsageError(f"column {e.args[0]!r} not found in {args.input}") from None
    except DegenerateDesign as e:
        raise UsageError(f"degenerate design: {e}") from None
    out = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "n_points": fit.n_points,
        "residual_std_error": fit.residual_std_error,
        "model": args.model,
        "x_col": args.x_col,
        "y_col": args.y_col,
        "x_power": args.x_power,
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridlinks", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="exhaustive component counts for small grids")
    e.add_argument("--n", "--n-range", dest="n", type=parse_range, required=True)
    e.add_argument("--verify", action="store_true", help="exit 1 unless counts match the exact tables")
    e.add_argument("--allow-large", action="store_true", help="permit n=8 (about 595 million diagrams)")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("sample", help="Monte Carlo sweep; one summary row per grid size or length bin")
    s.add_argument("experiment", choices=EXPERIMENTS)
    s.add_argument("--n", "--n-range", dest="n", type=parse_range, help="grid sizes (writhe-length: largest size)")
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--stream-size", type=int, default=1000, help="samples per random stream")
    s.add_argument("--bin-width", type=int, default=10_000)
    s.add_argument("--length-cap", type=int, default=650_000)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.add_argument("--verify", action="store_true", help="exit 1 if a mean is more than 4 SE from its exact value")
    s.set_defaults(func=cmd_sample)

    x = sub.add_parser("exact", help="exact counts, component mean/variance, bound margins")
    x.add_argument("--n", "--n-range", dest="n", type=parse_range, required=True)
    x.add_argument("--k-max", type=int, default=3)
    x.add_argument("--long", action="store_true", help="one row per (n, k) instead of per n")
    x.add_argument("--out")
    x.set_defaults(func=cmd_exact)

    f = sub.add_parser("fit", help="least-squares fit of two columns of a sample CSV")
    f.add_argument("input")
    f.add_argument("--model", choices=MODELS, default="linear")
    f.add_argument("--x-col", default="n")
    f.add_argument("--y-col", default="mean")
    f.add_argument("--x-power", type=float, default=1.0, help="raise x to this power before fitting")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SizeLimitExceeded, ValueError) as e:
        print(f"gridlinks {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
