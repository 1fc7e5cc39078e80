"""Command-line entry point: ``typmix run | list-experiments | check-oracles``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import EXPERIMENTS, ConfigError, default_config, load_config, validate
from .experiments import emit_csv, oracle_suite, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ORACLE = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="typmix", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("config")
    run.add_argument("--out", default=None, help="output directory (default: out/<experiment>)")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--workers", type=int, default=None)
    sub.add_parser("list-experiments", help="print the experiment names with their default sizes")
    chk = sub.add_parser("check-oracles", help="compare every closed-form channel with the dense oracle")
    chk.add_argument("--tolerance", type=float, default=1e-8)
    chk.add_argument("--triples", type=int, default=100)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-experiments":
        for name in EXPERIMENTS:
            cfg = default_config(name)
            print(f"{name:24s} sizes={','.join(map(str, cfg.sizes))} n_samples={cfg.n_samples}")
        return EXIT_OK
    if args.command == "check-oracles":
        table = oracle_suite(args.tolerance, args.triples)
        emit_csv(table, sys.stdout)
        return EXIT_OK if all(table.column("passed")) else EXIT_ORACLE
    try:
        cfg = load_config(args.config)
        changes = {k: v for k, v in (("seed", args.seed), ("workers", args.workers)) if v is not None}
        cfg = validate(dataclasses.replace(cfg, **changes))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or f"out/{cfg.experiment}"
    result = run_experiment(cfg, out)
    for w in result.meta.get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)
    print(f"{cfg.experiment}: {len(result.summary.rows)} summary rows written to {out} "
          f"({result.meta['wall_time_s']:.1f} s)")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
