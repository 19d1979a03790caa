"""Command line entry point: ``rcsim <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from rcsim.complex import make_rng, sample_growth_order, sample_ynp, save_json
from rcsim.errors import CapacityError, ConfigError, InvalidInputError
from rcsim.harness import ExperimentConfig, dump_mismatches, run_experiment, trial_key
from rcsim.process import run_hitting_times

EXIT_CONFIG = 2
EXIT_CAPACITY = 3


def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (inclusive stop) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + i * step, 12) for i in range(count))
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from None


def _common(p: argparse.ArgumentParser, n: int, trials: int) -> None:
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, help="JSON report path")
    p.add_argument("--csv", type=Path, help="per-trial CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcsim", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    betti = sub.add_parser("betti", help="distribution of beta^{k-1} in Y_k(n,p)")
    _common(betti, 100, 2000)
    betti.add_argument("--c", type=float, default=0.0)
    betti.add_argument("--p", type=float)
    betti.add_argument("--dump-dir", type=Path, help="save complexes with beta != isolated")

    iso = sub.add_parser("isolated", help="isolated (k-1)-face counts")
    _common(iso, 100, 2000)
    iso.add_argument("--c", type=float, default=0.0)
    iso.add_argument("--p", type=float)

    hit = sub.add_parser("hitting", help="hitting times of the growth process")
    _common(hit, 80, 300)
    hit.add_argument("--trace-dir", type=Path, help="per-trial CSV traces (m, isolated, components, rank)")

    sweep = sub.add_parser("sweep", help="vanishing frequency over a c grid")
    _common(sweep, 100, 500)
    sweep.add_argument("--c-grid", default="-2:2:0.5")

    oracle = sub.add_parser("oracle-check", help="betti_top vs exhaustive enumeration")
    _common(oracle, 6, 500)
    oracle.add_argument("--n-min", type=int, default=4)
    oracle.add_argument("--n-max", type=int, default=6)

    gen = sub.add_parser("generate", help="sample one complex or growth order")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--p", type=float)
    gen.add_argument("--c", type=float)
    gen.add_argument("--order", action="store_true", help="emit a growth order instead")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, required=True)
    return parser


def _config(args: argparse.Namespace) -> ExperimentConfig:
    common = dict(k=args.k, trials=args.trials, master_seed=args.seed, workers=args.workers)
    if args.command == "betti":
        return ExperimentConfig(n=args.n, c=args.c, p=args.p, mode="betti-dist", **common)
    if args.command == "isolated":
        return ExperimentConfig(n=args.n, c=args.c, p=args.p, mode="isolated-dist", **common)
    if args.command == "hitting":
        return ExperimentConfig(n=args.n, c=None, mode="hitting", **common)
    if args.command == "sweep":
        return ExperimentConfig(
            n=args.n, c=None, c_grid=parse_grid(args.c_grid), mode="vanish-sweep", **common
        )
    return ExperimentConfig(
        n=args.n_max, n_min=args.n_min, c=None, mode="oracle-check", **common
    )


def _generate(args: argparse.Namespace) -> None:
    rng = make_rng(args.seed)
    if args.order:
        save_json(sample_growth_order(args.n, args.k, rng), args.out)
        return
    if args.p is None:
        if args.c is None:
            raise ConfigError("generate needs --p or --c")
        args.p = ExperimentConfig(n=args.n, k=args.k, trials=1, c=args.c).resolved_p()
    save_json(sample_ynp(args.n, args.k, args.p, rng), args.out)


def _write_traces(cfg: ExperimentConfig, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(cfg.trials):
        order = sample_growth_order(cfg.n, cfg.k, make_rng(trial_key(cfg, i)))
        with open(directory / f"trace_trial{i}.csv", "w", newline="") as fh:
            run_hitting_times(order, trace=fh)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "generate":
            _generate(args)
            return 0
        cfg = _config(args)
        report = run_experiment(cfg)
        if args.out:
            report.write_json(args.out)
        else:
            print(report.to_json())
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                report.write_csv(fh)
        if getattr(args, "dump_dir", None):
            dump_mismatches(report, args.dump_dir)
        if getattr(args, "trace_dir", None):
            _write_traces(cfg, args.trace_dir)
    except (ConfigError, InvalidInputError) as exc:
        print(f"rcsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"rcsim: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    return 0


if __name__ == "__main__":
    sys.exit(main())
