"""figkit command line: render one panel spec or a whole manifest tree.

Exit codes: 0 success, 2 schema/config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .discover import render_all
from .panels import SchemaError, render, spec_from_json


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figkit",
                                     description="render simulation CSVs to figure panels")
    sub = parser.add_subparsers(dest="command", required=True)
    one = sub.add_parser("render", help="render a single panel spec")
    one.add_argument("--panel", type=Path, required=True, help="panel spec JSON")
    many = sub.add_parser("render-all", help="render every manifest under a directory")
    many.add_argument("directory", type=Path)
    many.add_argument("--out", type=Path, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            path = render(spec_from_json(args.panel))
            print(path)
        else:
            for path in render_all(args.directory, args.out):
                print(path)
        return 0
    except (SchemaError, OSError, ValueError) as exc:
        print(f"figkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
