"""Command-line entry point.

Subcommands: simulate, se, limit-se, thresholds, verify-prop1.
Exit codes: 0 success, 2 configuration error, 3 numeric failure.
The SCVAMP_OUT_DIR environment variable overrides the output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, DecodeDivergedError, SEDivergedError
from .harness import (ExperimentConfig, run_limit_se, run_se, run_simulate,
                      run_thresholds, run_verify_prop1)

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scvamp",
                                description="SC-SS / SC-VAMP simulation harness")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("simulate", "se", "limit-se", "thresholds", "verify-prop1"):
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, help="JSON config path")
        s.add_argument("--out", default=None, help="output directory")
        s.add_argument("--seed", type=int, default=None,
                       help="override the base seed")
        s.add_argument("--threads", type=int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = ExperimentConfig.from_file(args.config)
        if args.seed is not None:
            config = ExperimentConfig(**{**vars(config), "base_seed": args.seed})
        out_dir = Path(os.environ.get("SCVAMP_OUT_DIR")
                       or args.out or config.out_dir)
        if args.command == "simulate":
            summary = run_simulate(config, out_dir, threads=args.threads)
            json.dump(summary, sys.stdout, indent=2)
            print()
        elif args.command == "se":
            run_se(config, out_dir)
        elif args.command == "limit-se":
            run_limit_se(config, out_dir)
        elif args.command == "thresholds":
            doc = run_thresholds(config, out_dir)
            json.dump(doc, sys.stdout, indent=2)
            print()
        elif args.command == "verify-prop1":
            reports = run_verify_prop1(config, out_dir)
            json.dump(reports, sys.stdout, indent=2)
            print()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DecodeDivergedError, SEDivergedError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
