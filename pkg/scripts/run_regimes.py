#!/usr/bin/env python3
"""
Run the bundled regime configurations through the command line interface.

Each JSON file under scripts/configs/ describes one studied regime; outputs
(CSV curves/maps plus a JSON summary per run) land in the chosen directory.
"""

import argparse
import sys
from pathlib import Path

from squeezed_arrays import cli

CONFIG_DIR = Path(__file__).resolve().parent / "configs"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory (default: results)")
    parser.add_argument("--only", default="", help="substring filter on config file names")
    parser.add_argument("--workers", type=int, default=None, help="processes for sweep points")
    args = parser.parse_args(argv)

    configs = sorted(CONFIG_DIR.glob("*.json"))
    if args.only:
        configs = [c for c in configs if args.only in c.name]
    if not configs:
        print(f"no configs under {CONFIG_DIR} match {args.only!r}", file=sys.stderr)
        return 1

    Path(args.out).mkdir(parents=True, exist_ok=True)
    failed = []
    for config in configs:
        print(f"== {config.name}")
        cli_args = [str(config), "--out", args.out]
        if args.workers is not None:
            cli_args += ["--workers", str(args.workers)]
        if cli.main(cli_args) != 0:
            failed.append(config.name)
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
