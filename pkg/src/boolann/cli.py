"""Command-line front end.

Exit status: 0 on success, 1 when the input is valid but outside an
operation's domain (or a resource cap is hit), 2 on bad arguments.
Data goes to stdout (or ``--out``); progress goes to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import logging
import sys

from . import annihilator, experiments, probability, rmweights
from .boolfn import BooleanFunction, anf_from_truth_table, format_anf, parse_anf, parse_truth_table, truth_table_from_anf

log = logging.getLogger("boolann")


class UsageError(Exception):
    pass


def _function(args) -> BooleanFunction:
    if args.tt and args.anf:
        raise UsageError("give either --tt or --anf, not both")
    if args.tt:
        return parse_truth_table(args.tt, args.n)
    if args.anf:
        if args.n is None:
            raise UsageError("--anf needs --n")
        return truth_table_from_anf(parse_anf(args.anf, args.n))
    raise UsageError("a function is required (--tt or --anf)")


def _need(args, *names):
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(f"missing {' '.join(missing)}")


def cmd_anf(args, out):
    f = _function(args)
    out.write(f"tt: {f.to_text()}\n")
    out.write(f"anf: {format_anf(anf_from_truth_table(f))}\n")
    out.write(f"weight: {f.weight}\n")
    out.write(f"degree: {anf_from_truth_table(f).degree}\n")


def cmd_annihilate(args, out):
    f = _function(args)
    _need(args, "d")
    if args.incremental:
        report = annihilator.find_annihilators_incremental(f, args.d, args.seed)
    else:
        report = annihilator.find_annihilators(f, args.d)
    out.write(report.to_text() + "\n")


def cmd_immunity(args, out):
    f = _function(args)
    out.write(f"{annihilator.min_annihilator_degree(f)}\n")


def cmd_rm_census(args, out):
    _need(args, "n", "d")
    dist = rmweights.brute_force_distribution(args.n, args.d, args.max_s)
    out.write(dist.to_csv())


def cmd_rm_minweight(args, out):
    _need(args, "n", "d")
    count = rmweights.min_weight_count(args.n, args.d)
    if args.check:
        census = rmweights.brute_force_distribution(args.n, args.d, args.max_s)
        found = census.counts.get(1 << (args.n - args.d), 0)
        if found != count:
            raise AssertionError(f"census gives {found}, closed form {count}")
    out.write(f"{count}\n")


def _breakdown(n, d, args):
    dist = None
    if args.census and annihilator.classify_degree(n, d) == "below-half":
        cap = rmweights.MAX_CENSUS_S if args.max_s is None else args.max_s
        if annihilator.monomial_basis(n, d).s <= cap:
            dist = rmweights.brute_force_distribution(n, d, cap)
        else:
            log.warning("n=%d d=%d: census beyond cap s<=%d; minimum-weight term only", n, d, cap)
    return probability.p_an(n, d, dist)


def cmd_prob(args, out):
    if args.grid:
        pairs = probability.GRID_PAIRS
    else:
        _need(args, "n", "d")
        pairs = [(args.n, args.d)]
    rows = [_breakdown(n, d, args) for n, d in pairs]
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(probability.ProbabilityBreakdown.CSV_COLUMNS + probability.ProbabilityBreakdown.LOG2_COLUMNS)
        for row in rows:
            writer.writerow(row.csv_row(args.digits))
    else:
        for row in rows:
            out.write(row.human(args.digits) + "\n")


def cmd_bound(args, out):
    _need(args, "n", "d")
    bound = probability.upper_bound8(args.n, args.d)
    if args.format == "csv":
        out.write("n,d,bound8,bound8_log2\n")
        out.write(f"{args.n},{args.d},{bound.render(args.digits)},{bound.log2!r}\n")
    else:
        out.write(f"n={args.n} d={args.d} bound8={bound.render(args.digits)} log2={bound.log2:g}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_experiment(args, out):
    trials = args.trials
    if args.kind == "table6":
        if not args.ns:
            raise UsageError("table6 needs --ns, e.g. --ns 7,9,11")
        rows = experiments.table6_campaign(_int_list(args.ns), trials, args.seed)
        out.write(experiments.campaign_csv(rows, args.seed))
        return
    _need(args, "n", "d")
    cfg = experiments.ExperimentConfig(
        args.n,
        args.d,
        trials or 10_000,
        args.seed,
        weight_sweep=_int_list(args.weight) if args.weight else None,
        max_nullspace_enum=args.max_enum,
        min_hits=args.min_hits,
        workers=args.workers,
    )
    if args.kind == "pex":
        rows = [experiments.estimate_p_ex(cfg)]
        out.write(experiments.sweep_csv(cfg, rows))
    elif args.kind == "sweep":
        out.write(experiments.sweep_csv(cfg, experiments.sweep_weights(cfg)))
    elif args.kind == "histogram":
        out.write(experiments.histogram_csv(cfg, experiments.observation1_histogram(cfg)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolann", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, function=False):
        p.add_argument("--n", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--out", help="write data here instead of stdout")
        p.add_argument("--format", choices=("csv", "human"), default="human")
        p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
        p.add_argument("--max-s", type=int, default=None, help="census cap on s (default: BOOLANN_MAX_CENSUS_S or 26)")
        if function:
            p.add_argument("--tt", help="truth table, n:<int>;tt:<hex> or hex with --n")
            p.add_argument("--anf", help="ANF such as '1 + x1 + x2*x3' (needs --n)")
        return p

    common(sub.add_parser("anf", help="convert between truth table and ANF"), function=True).set_defaults(run=cmd_anf)
    p = common(sub.add_parser("annihilate", help="annihilators of degree <= d"), function=True)
    p.add_argument("--incremental", action="store_true", help="low-weight substitution solver with verification")
    p.set_defaults(run=cmd_annihilate)
    common(sub.add_parser("immunity", help="minimum annihilator degree"), function=True).set_defaults(run=cmd_immunity)
    common(sub.add_parser("rm-census", help="full weight distribution of RM(d, n)")).set_defaults(run=cmd_rm_census)
    p = common(sub.add_parser("rm-minweight", help="number of minimum-weight codewords of RM(d, n)"))
    p.add_argument("--check", action="store_true", help="cross-check against a full census")
    p.set_defaults(run=cmd_rm_minweight)
    p = common(sub.add_parser("prob", help="annihilator existence probability breakdown"))
    p.add_argument("--grid", action="store_true", help="all tabulated (n, d) pairs")
    p.add_argument("--census", action="store_true", help="feed a full census when s is within the cap")
    p.add_argument("--digits", type=int, default=probability.DEFAULT_DIGITS)
    p.set_defaults(run=cmd_prob)
    p = common(sub.add_parser("bound", help="closed-form upper bound on the minimum-weight term"))
    p.add_argument("--digits", type=int, default=2)
    p.set_defaults(run=cmd_bound)
    p = common(sub.add_parser("experiment", help="Monte-Carlo campaigns (CSV output)"))
    p.add_argument("kind", choices=("pex", "sweep", "histogram", "table6"))
    p.add_argument("--trials", type=int)
    p.add_argument("--weight", help="comma-separated wt(f) values for sweep")
    p.add_argument("--ns", help="comma-separated odd n for table6")
    p.add_argument("--min-hits", type=int, default=None)
    p.add_argument("--max-enum", type=int, default=annihilator.MAX_WEIGHT_ENUM)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(run=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr
    )
    buf = io.StringIO()
    try:
        args.run(args, buf)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"boolann: error: {exc}", file=sys.stderr)
        return 2
    except (annihilator.DomainError, rmweights.CensusTooLarge, rmweights.Unavailable) as exc:
        print(f"boolann: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"boolann: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        with contextlib.suppress(BrokenPipeError):
            sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
