"""Command-line front end: ``mmplc {simulate,fig1,edges,lsv,regime,plot}``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import experiments as ex
from .channel import SystemParams
from .io import emit_svg_scatter, read_csv, write_json

SEED_ENV = "MMPLC_SEED"


def resolve_seed(flag: int | None) -> int:
    """CLI flag, else ``$MMPLC_SEED``, else 0."""
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise SystemExit(f"{SEED_ENV}={env!r} is not an integer")
    return 0


def _dump(obj: dict, path: str | None):
    if path:
        write_json(obj, path)
    else:
        print(json.dumps(obj, indent=2))


def cmd_simulate(args) -> int:
    params = SystemParams(args.nt, args.nr or args.nt, args.nrp or args.nt, args.m, args.alpha, args.beta)
    config = ex.SimConfig(
        params=params,
        precoder=args.precoder,
        trials=args.trials,
        master_seed=resolve_seed(args.seed),
        epsilon=args.eps,
        epsilon_prime=args.epsp,
        clamp_mode=args.clamp,
        noise_mode="cap" if args.noise_cap else "fixed",
        output_path=args.out,
    )
    result = ex.run_monte_carlo(config, workers=args.workers)
    _dump(result.report.to_dict(), args.json)
    return 0


def cmd_fig1(args) -> int:
    result = ex.fig1_experiment(
        args.n, args.trials, resolve_seed(args.seed), workers=args.workers, output_path=args.out
    )
    rep = result.report
    if args.svg:
        series = [r.log10_adv for r in result.records if not r.failed]
        emit_svg_scatter(
            series,
            {"mean": rep.log10_adv.mean, f"log10({args.n}^2)": rep.reference_log10_adv},
            args.svg,
            title=f"advantage ratio, inverse precoder, n={args.n}",
        )
    _dump(rep.to_dict(), args.json)
    return 0


def cmd_edges(args) -> int:
    rep = ex.edge_law_experiment(args.nt, args.yp, args.trials, resolve_seed(args.seed))
    _dump(ex._jsonable(rep.__dict__), args.json)
    return 0


def cmd_lsv(args) -> int:
    rep = ex.lsv_law_experiment(args.n, args.trials, resolve_seed(args.seed))
    _dump(rep.to_dict(), args.json)
    return 0


def cmd_regime(args) -> int:
    rows = ex.regime_scan(args.nt, args.yp, args.eps, args.epsp, margin=args.margin)
    if args.json:
        write_json(
            {
                "rows": [
                    {"n_t": r.n_t, "y_prime": r.y_prime, "n_r_prime": r.n_r_prime,
                     "m_alpha": r.m_alpha, "report": ex._jsonable(r.report.__dict__)}
                    for r in rows
                ],
                "minimal_y_prime": {str(k): v for k, v in ex.minimal_contradicting_y_prime(rows).items()},
            },
            args.json,
        )
        return 0
    print(f"{'n_t':>6} {'y_prime':>8} {'m*alpha':>8} {'m2a2':>9} {'zf_thr':>10} hard  break contra")
    for r in rows:
        thr = "-" if r.report.zf_threshold is None else f"{r.report.zf_threshold:10.3f}"
        print(
            f"{r.n_t:>6} {r.y_prime:>8g} {r.m_alpha:>8.3f} {r.m_alpha**2:>9.3f} {thr:>10} "
            f"{int(r.report.hardness_holds):>4} {int(r.report.zf_breaks):>6} {int(r.report.contradiction):>6}"
        )
    mins = ex.minimal_contradicting_y_prime(rows)
    for n_t, yp in mins.items():
        print(f"n_t={n_t}: minimal contradicting y' = {yp}")
    if sum(v is not None for v in mins.values()) >= 1:
        print(f"fitted y'_min ~ c*log(n_t): c = {ex.fit_log_scaling(mins):.3f}")
    return 0


def cmd_plot(args) -> int:
    records = [r for r in read_csv(args.csv) if not r.failed]
    series = [r.log10_adv for r in records]
    refs = {}
    if series:
        refs["mean"] = sum(series) / len(series)
    if args.n:
        refs[f"log10({args.n}^2)"] = math.log10(args.n**2)
    emit_svg_scatter(series, refs, args.out, title=f"log10(adv) from {args.csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmplc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
        p.add_argument("--json", default=None, help="write the JSON report here instead of stdout")

    p = sub.add_parser("simulate", help="Monte-Carlo run of one configuration")
    p.add_argument("--nt", type=int, required=True)
    p.add_argument("--nr", type=int, default=None, help="default: n_t")
    p.add_argument("--nrp", type=int, default=None, help="default: n_t")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=None, help="default: alpha")
    p.add_argument("--precoder", choices=["svd", "inverse", "identity"], default="svd")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--epsp", type=float, default=0.01)
    p.add_argument("--clamp", action="store_true", help="clamp estimates to the constellation")
    p.add_argument("--noise-cap", action="store_true",
                   help="per-trial noise at B's correctness cap for --eps (overrides alpha/beta)")
    p.add_argument("--out", default=None, help="CSV path for per-trial records")
    p.add_argument("--workers", type=int, default=1)
    seeded(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fig1", help="advantage ratio of the inverse precoder on square channels")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--out", default=None, help="CSV path")
    p.add_argument("--svg", default=None, help="SVG scatter path")
    p.add_argument("--workers", type=int, default=1)
    seeded(p)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("edges", help="extreme singular values of tall Gaussian matrices")
    p.add_argument("--nt", type=int, default=200)
    p.add_argument("--yp", type=float, default=4.0)
    p.add_argument("--trials", type=int, default=500)
    seeded(p)
    p.set_defaults(func=cmd_edges)

    p = sub.add_parser("lsv", help="least singular value law for square Gaussian matrices")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--trials", type=int, default=1000)
    seeded(p)
    p.set_defaults(func=cmd_lsv)

    p = sub.add_parser("regime", help="scan hardness vs ZF-break conditions")
    p.add_argument("--nt", type=int, nargs="+", default=[64, 128, 256, 512])
    p.add_argument("--yp", type=float, nargs="+", default=list(ex.DEFAULT_Y_PRIME_GRID))
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--epsp", type=float, default=0.01)
    p.add_argument("--margin", type=float, default=1.0125, help="m*alpha = margin*sqrt(n_t)")
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("plot", help="render a CSV of trial records as an SVG scatter")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=None, help="draw the log10(n^2) reference line")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"mmplc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
