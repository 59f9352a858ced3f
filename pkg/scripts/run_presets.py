#!/usr/bin/env python3
"""Run every experiment preset at desk scale (or --full) into an output tree.

Usage:
    python scripts/run_presets.py out/ [--full] [--threads 8] [--master-seed 0]
"""

import argparse
import sys
import time

from entperc.cli import run_preset
from entperc.presets import PRESET_NAMES


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out")
    parser.add_argument("--full", action="store_true")
    parser.add_argument("--threads", type=int, default=8)
    parser.add_argument("--master-seed", type=int, default=0)
    parser.add_argument("--only", nargs="*", default=None,
                        help="subset of preset names")
    args = parser.parse_args()

    names = args.only or PRESET_NAMES
    for name in names:
        t0 = time.monotonic()
        manifests = run_preset(name, args.out, args.full, args.master_seed,
                               args.threads, None)
        print(f"{name}: {len(manifests)} runs in {time.monotonic() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
