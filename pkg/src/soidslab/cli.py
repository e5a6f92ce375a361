"""Command-line entry point: ``soidslab {run,verify,plot,instance}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="soidslab", description="Sparse linear bandit laboratory.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("--config", required=True, help="INI experiment config")
    run.add_argument("--seed", type=int, help="master seed (overrides experiment.seed)")
    run.add_argument("--workers", type=int, help="parallel runs (overrides experiment.workers)")
    run.add_argument("--output", help="output directory (overrides experiment.output_dir)")
    run.add_argument("--verbose", action="store_true", help="progress on stderr")
    run.add_argument("overrides", nargs="*", metavar="section.key=value")

    ver = sub.add_parser("verify", help="run numerical checks, print JSON reports")
    ver.add_argument("--lemma", action="append", help="check name (repeatable); default all")
    ver.add_argument("--seed", type=int, help="reseed every randomized check")
    ver.add_argument("--verbose", action="store_true")

    plot = sub.add_parser("plot", help="render aggregate CSVs as SVG")
    plot.add_argument("csv", nargs="+")
    plot.add_argument("--output", default="regret.svg")

    inst = sub.add_parser("instance", help="print a benchmark instance as JSON")
    inst.add_argument("--d", type=int, default=20)
    inst.add_argument("--K", type=int, default=200)
    inst.add_argument("--seed", type=int, default=0)
    return p


def _run(args) -> int:
    from .harness import load_config, run_experiment

    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"experiment.seed={args.seed}")
    if args.workers is not None:
        overrides.append(f"experiment.workers={args.workers}")
    if args.output is not None:
        overrides.append(f"experiment.output_dir={args.output}")
    try:
        cfg = load_config(args.config, overrides)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        manifest = run_experiment(cfg, verbose=args.verbose)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    json.dump(manifest["final_regret"], sys.stdout, indent=2)
    print()
    return 0


def _verify(args) -> int:
    from .verify import CHECKS, run_all

    names = args.lemma or list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        print(f"error: unknown check(s) {unknown}; available: {', '.join(CHECKS)}", file=sys.stderr)
        return 2
    reports = run_all(names, seed=args.seed)
    json.dump([r.to_dict() for r in reports], sys.stdout, indent=2)
    print()
    failed = [r.lemma for r in reports if not r.passed]
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def _plot(args) -> int:
    from .svg import CSVParseError, emit_plot

    try:
        out = emit_plot(args.csv, args.output)
    except (OSError, CSVParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


def _instance(args) -> int:
    from .env import make_benchmark_instance

    if args.d < 1 or args.K < 1:
        print("error: d and K must be positive", file=sys.stderr)
        return 2
    inst = make_benchmark_instance(args.d, args.K, np.random.default_rng(args.seed))
    print(inst.to_json())
    return 0


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"run": _run, "verify": _verify, "plot": _plot, "instance": _instance}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
