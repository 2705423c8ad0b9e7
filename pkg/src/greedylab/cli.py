"""Command line entry point: ``greedylab verify | counterexample | replay``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .harness.config import DEFAULT_NORMS, SUITES, VerifyConfig
from .harness.report import dumps, write_csv
from .harness.runner import any_failed, replay, run_document


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _constants(items) -> dict:
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        out[key.strip()] = float(val)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="greedylab", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--suite", default="all", help="all or a comma list of " + ",".join(SUITES))
    v.add_argument("--norm", action="append", help="norm spec, repeatable (default: lp:1, lp:2, lp:inf)")
    v.add_argument("--no-norms", action="store_true", help="run with an empty oracle list")
    v.add_argument("--dim", type=int, default=VerifyConfig.dim)
    v.add_argument("--m-max", type=int, default=VerifyConfig.m_max)
    v.add_argument("--tau-grid", type=_floats, default=VerifyConfig.tau_grid)
    v.add_argument("--trials", type=int, default=VerifyConfig.trials, help="instances per (oracle, tau), split over m")
    v.add_argument("--seed", type=int, default=VerifyConfig.seed)
    v.add_argument("--constant", action="append", metavar="NAME=VALUE",
                   help="override a structural constant (turns on exact mode for every oracle)")
    v.add_argument("--out", type=Path)
    v.add_argument("--csv", type=Path)
    v.add_argument("--plot", type=Path, help="SVG histogram of extremal ratios")

    c = sub.add_parser("counterexample", help="build the weighted-tail counterexample")
    c.add_argument("--blocks", type=int, default=20)
    c.add_argument("--k", type=int, default=2, help="block index of the threshold")
    c.add_argument("--trials", type=int, default=10_000, help="random sets for the uniform (A) check")
    c.add_argument("--max-size", type=int, default=3, help="largest random set size")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--report", type=Path)
    c.add_argument("--weights-csv", type=Path, help="export a dense weight prefix")
    c.add_argument("--weights-limit", type=int, default=10_000)
    c.add_argument("--plot", type=Path, help="SVG of the ratio growth curve")

    r = sub.add_parser("replay", help="re-evaluate the violations stored in a report")
    r.add_argument("report", type=Path)
    r.add_argument("--norm", help="evaluate against this norm instead of the stored one")
    return p


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else tuple(s.strip() for s in args.suite.split(","))
    norms = () if args.no_norms else tuple(args.norm or DEFAULT_NORMS)
    cfg = VerifyConfig(norms=norms, suites=suites, dim=args.dim, m_max=args.m_max, tau_grid=args.tau_grid,
                       trials=args.trials, seed=args.seed, constants=_constants(args.constant))
    t0 = time.perf_counter()
    doc, reports = run_document(cfg)
    text = dumps(doc)
    if args.out:
        args.out.write_text(text)
    if args.csv:
        write_csv(args.csv, reports)
    if args.plot:
        _plot_ratios(reports, args.plot)
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
    for r in reports:
        if r.status == "fail":
            print(f"FAIL {r.check_id} {r.oracle} m={r.config.get('m')} tau={r.config.get('tau')} "
                  f"violations={r.violation_count} {r.reason}")
    print(f"{len(reports)} checks: {counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped "
          f"({time.perf_counter() - t0:.1f}s)")
    return 1 if any_failed(reports) else 0


def _plot_ratios(reports, path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    vals = [r.extremal_ratio for r in reports if isinstance(r.extremal_ratio, float)]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(vals, bins=40)
    ax.axvline(1.0, color="k", lw=0.8)
    ax.set_xlabel("extremal lhs/rhs ratio per check")
    ax.set_ylabel("checks")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_counterexample(args) -> int:
    from . import counterexample_space as cs
    from .normed_space import save_weights_csv

    w = cs.build_weights(args.blocks)
    ratios = [cs.qg_violation_ratio(args.k, w, K) for K in range(args.k + 1, args.blocks + 1)]
    ua = cs.uniform_A_check(args.max_size, w, args.trials, args.seed)
    adv = cs.adversarial_uniform_A(w)
    doc = {"blocks": args.blocks, "N": [int(n) for n in w.N], "b": list(w.b),
           "ratios": [{"K": q.K, "ratio": q.ratio, "certificate": q.certificate, "analytic_sum": q.analytic_sum}
                      for q in ratios],
           "uniform_A": ua.to_json(), "adversarial_uniform_A": {k: v for k, v in adv.items() if k != "ratios"}}
    text = json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n"
    if args.report:
        args.report.write_text(text)
    else:
        sys.stdout.write(text)
    if args.weights_csv:
        save_weights_csv(args.weights_csv, w.dense_weights(args.weights_limit))
    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot([q.K for q in ratios], [q.ratio for q in ratios], marker="o")
        ax.set_xlabel("blocks K")
        ax.set_ylabel(f"||T x|| / ||x|| (k={args.k})")
        fig.tight_layout()
        fig.savefig(args.plot, format="svg", metadata={"Date": None})
        plt.close(fig)
    print(f"uniform (A) sampled max {ua.max_ratio:.6f}, top-weight probe {adv['max_ratio']:.6f} "
          f"at |A|={adv['size']}", file=sys.stderr)
    return 0


def cmd_replay(args) -> int:
    from .normed_space import parse_norm_spec

    oracle = parse_norm_spec(args.norm) if args.norm else None
    rows = replay(args.report, oracle)
    for row in rows:
        print(json.dumps(row, sort_keys=True))
    print(f"{sum(r['violates'] for r in rows)} of {len(rows)} stored violations reproduce", file=sys.stderr)
    return 1 if any(r["violates"] for r in rows) else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return {"verify": cmd_verify, "counterexample": cmd_counterexample, "replay": cmd_replay}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
