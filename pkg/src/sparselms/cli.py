"""Command-line harness: run experiments, list presets, run verification suites."""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import experiments, verification
from .harness import (
    run_experiment,
    write_curves_csv,
    write_gnuplot_dat,
    write_summary_csv,
)


def _cmd_list(args) -> int:
    for name in experiments.REGISTRY:
        print(f"{name:15s} {experiments.DESCRIPTIONS[name]}")
    return 0


def _resolve_specs(args):
    target = args.experiment
    if target in experiments.REGISTRY:
        built = experiments.get_experiment(
            target, trials=args.trials, n=args.scale, seed=args.seed
        )
        return built if isinstance(built, list) else [built]
    path = Path(target)
    if not path.exists():
        raise SystemExit(f"no such experiment or config file: {target}")
    specs = experiments.load_specs(path)
    if args.trials is not None or args.seed is not None:
        from dataclasses import replace

        specs = [
            replace(
                s,
                trials=args.trials if args.trials is not None else s.trials,
                seed=args.seed if args.seed is not None else s.seed,
            )
            for s in specs
        ]
    if args.scale is not None:
        raise SystemExit("--scale applies to registry experiments only")
    return specs


def _cmd_run(args) -> int:
    specs = _resolve_specs(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sweep_rows = []
    for spec in specs:
        t0 = time.perf_counter()
        result = run_experiment(spec)
        elapsed = time.perf_counter() - t0
        write_curves_csv(result, out / f"{spec.name}_curves.csv")
        write_summary_csv(result, out / f"{spec.name}_summary.csv")
        if args.gnuplot:
            write_gnuplot_dat(result, out / f"{spec.name}_curves.dat")
        print(f"{spec.name}: {spec.trials} trial(s), {elapsed:.1f}s")
        for label in result.curves_db:
            ss = result.steady_state_db(label)
            print(f"  {label:18s} final {result.curves_db[label][-1]:8.2f} dB"
                  f"  steady {ss:8.2f} dB")
            sweep_rows.append([spec.name, label, spec.sensing.m, f"{ss:.6f}"])
    if len(specs) > 1:
        sweep_path = out / "msweep_summary.csv"
        with open(sweep_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["experiment", "label", "m", "steady_rmse_db"])
            w.writerows(sweep_rows)
        print(f"wrote {sweep_path}")
    return 0


def _cmd_verify(args) -> int:
    suites = [
        verification.theorem2_suite(args.draws, args.seed),
        verification.theorem3_suite(args.draws, args.seed + 1),
        verification.tightness_suite(seed=args.seed + 2),
    ]
    ok = True
    for suite in suites:
        print(suite)
        ok = ok and suite.passed
    return 0 if ok else 1


def _cmd_oracle(args) -> int:
    suites = [
        verification.hard_threshold_oracle_suite(args.draws, args.seed),
        verification.sensing_identity_suite(),
        verification.roundtrip_suite(args.seed + 1),
    ]
    ok = True
    for suite in suites:
        print(suite)
        ok = ok and suite.passed
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sparselms",
        description="Online sparse spectrum estimation from sub-Nyquist samples",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registry experiments").set_defaults(func=_cmd_list)

    run = sub.add_parser("run", help="run an experiment by name or config path")
    run.add_argument("experiment")
    run.add_argument("--trials", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--scale", type=int, default=None, metavar="N",
                     help="rebuild a registry experiment at window length N")
    run.add_argument("--out", default="results")
    run.add_argument("--gnuplot", action="store_true",
                     help="also write a wide gnuplot-style .dat file")
    run.set_defaults(func=_cmd_run)

    verify = sub.add_parser("verify", help="randomized support-recovery suites")
    verify.add_argument("--draws", type=int, default=100_000)
    verify.add_argument("--seed", type=int, default=7)
    verify.set_defaults(func=_cmd_verify)

    oracle = sub.add_parser("oracle", help="brute-force cross-checks")
    oracle.add_argument("--draws", type=int, default=10_000)
    oracle.add_argument("--seed", type=int, default=11)
    oracle.set_defaults(func=_cmd_oracle)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
