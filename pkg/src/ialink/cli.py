"""Experiment driver: seeded Monte-Carlo sweeps and analytic evaluations.

Subcommands
-----------
simulate     run the IA Monte-Carlo sweep described by a scenario config
analytic     evaluate the closed-form laws for a scenario config
compare      run a figure preset (fig2 .. fig7)
list-presets show the available presets

Every run writes schema-validated UTF-8 CSV files plus a ``manifest.json``
into the output directory; given the same config, seed and build the CSV
bytes are identical run to run.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from .analytic import sinr_dist_imperfect, sinr_dist_perfect
from .channel import Scenario
from .config import ConfigError, parse_scenario
from .metrics import BPSK, empirical_ser, ergodic_rate, ser
from .presets import PRESETS, _ia_stream_scaling, contour_beta_grid, theoretical_ratio_surface
from .runner import run_ia_sweep
from .schemas import write_csv, write_manifest
from .solver import check_feasibility


def _load_scenario(args) -> Scenario:
    if not args.config:
        raise ConfigError("this command requires --config")
    sc = parse_scenario(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        sc = Scenario(
            k=sc.k, nt=sc.nt, nr=sc.nr, d=sc.d, alpha=sc.alpha, beta=sc.beta,
            gamma_db=sc.gamma_db, trials=overrides.get("trials", sc.trials),
            seed=overrides.get("seed", sc.seed),
        )
    return sc


def cmd_simulate(args) -> int:
    sc = _load_scenario(args)
    report = check_feasibility(sc.k, sc.nt, sc.nr, sc.d)
    if not report.feasible:
        print(f"infeasible scenario: {report.reason}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    t0 = time.time()
    res = run_ia_sweep(sc, workers=args.threads)
    samples_set = res.sample_set(0)
    rows = []
    d = sc.d[0]
    for gi, gdb in enumerate(sc.gamma_db):
        for user in range(sc.k):
            for stream in range(d):
                samples = samples_set.cell(gi, user, stream)
                rows.append(
                    (
                        gdb, user, stream,
                        float(samples.mean()),
                        float(np.mean(np.log2(1.0 + samples))),
                        empirical_ser(samples, BPSK),
                        samples.size,
                    )
                )
    entry = write_csv(os.path.join(args.out, "sinr_sweep.csv"), "sinr_sweep", rows)
    write_manifest(
        args.out, "simulate", sc, [entry], time.time() - t0,
        trials=res.trials, degenerate=res.degenerate, nonconverged=res.nonconverged,
    )
    print(f"simulate: {len(rows)} rows -> {args.out}/sinr_sweep.csv "
          f"(kept {res.trials_kept}/{res.trials} trials)")
    return 0


def cmd_analytic(args) -> int:
    sc = _load_scenario(args)
    report = check_feasibility(sc.k, sc.nt, sc.nr, sc.d)
    if not report.feasible:
        print(f"infeasible scenario: {report.reason}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    t0 = time.time()
    d = sc.d[0]
    rt = sc.correlation()
    sigma2 = np.ones(d)
    cal_i = float(sc.k)
    if abs(sc.alpha) > 0:
        from .analytic import csi_interference_scale, precoder_covariance_approx

        approx = precoder_covariance_approx(rt, sc.k, sc.d, 0)
        sigma2 = approx.sigma2
        cal_i = csi_interference_scale(rt, sc.k, sc.d)

    mean_rows, pdf_rows = [], []
    for gdb in sc.gamma_db:
        gamma = 10.0 ** (gdb / 10.0)
        for stream in range(d):
            if sc.beta == 0.0 and abs(sc.alpha) == 0.0:
                law = sinr_dist_perfect(gamma, d)
            else:
                law = sinr_dist_imperfect(gamma, d, sc.beta, float(sigma2[stream]), cal_i)
            mean_rows.append((gdb, stream, law.mean, ergodic_rate(law), ser(law, BPSK)))
            if stream == 0:
                grid = np.linspace(0.0, 5.0 * law.mean, 65)
                pdf_rows.extend((gdb, float(x), float(law.pdf(x))) for x in grid)
    outputs = [
        write_csv(os.path.join(args.out, "analytic_means.csv"), "analytic_means", mean_rows),
        write_csv(os.path.join(args.out, "analytic_pdf.csv"), "analytic_pdf", pdf_rows),
    ]
    if sc.nt == sc.nr and len(set(sc.d)) == 1:
        alphas = np.round(np.arange(0.0, 0.701, 0.05), 10)
        betas = contour_beta_grid()
        surfaces = theoretical_ratio_surface(alphas, betas, sc.gamma_db, k=sc.k, n=sc.nt)
        ratio_rows = [
            (float(a), float(b), gdb, float(surfaces[gi, ai, bi]))
            for gi, gdb in enumerate(sc.gamma_db)
            for ai, a in enumerate(alphas)
            for bi, b in enumerate(betas)
        ]
        outputs.append(
            write_csv(os.path.join(args.out, "ratio_surface.csv"), "ratio_surface", ratio_rows)
        )
    write_manifest(args.out, "analytic", sc, outputs, time.time() - t0, trials=0)
    print(f"analytic: wrote {len(outputs)} files -> {args.out}")
    return 0


def cmd_compare(args) -> int:
    if args.preset not in PRESETS:
        print(f"unknown preset {args.preset!r}; try list-presets", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    runner, _ = PRESETS[args.preset]
    t0 = time.time()
    kwargs = {"workers": args.threads}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.seed is not None:
        kwargs["seed"] = args.seed
    outputs, counters = runner(args.out, **kwargs)
    write_manifest(
        args.out, f"compare:{args.preset}", None, outputs, time.time() - t0,
        trials=counters["trials"], degenerate=counters["degenerate"],
        nonconverged=counters["nonconverged"],
        extra={"preset": args.preset},
    )
    print(f"compare {args.preset}: wrote {[o['path'] for o in outputs]} -> {args.out}")
    return 0


def cmd_list_presets(_args) -> int:
    width = max(len(name) for name in PRESETS)
    for name, (_, desc) in PRESETS.items():
        print(f"{name:<{width}}  {desc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ialink", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--config", help="scenario config file (key = value text)")
        if needs_out:
            p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--trials", type=int, default=None, help="override the trial count")
        p.add_argument("--threads", type=int, default=1, help="worker threads for trial batches")

    p_sim = sub.add_parser("simulate", help="Monte-Carlo SINR sweep from a config")
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_ana = sub.add_parser("analytic", help="closed-form evaluations from a config")
    common(p_ana)
    p_ana.set_defaults(func=cmd_analytic)

    p_cmp = sub.add_parser("compare", help="run a figure preset")
    common(p_cmp)
    p_cmp.add_argument("--preset", required=True, choices=sorted(PRESETS), help="figure preset")
    p_cmp.set_defaults(func=cmd_compare)

    p_list = sub.add_parser("list-presets", help="list figure presets")
    p_list.set_defaults(func=cmd_list_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
