"""figgen: render simulator CSV outputs as figures.

    figgen <kind> --in CSV [CSV ...] --out IMG [--title S]

Kinds: schedule, trace, sweep (one or more curves), sweep-grid (exactly
four panels).  Exits nonzero on missing or malformed input, naming the
file and line.
"""

from __future__ import annotations

import argparse
import sys

from .csvio import CsvFormatError
from .render import KINDS, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figgen", description=__doc__.splitlines()[0])
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="CSV")
    parser.add_argument("--out", required=True, metavar="IMG")
    parser.add_argument("--title", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.kind in ("schedule", "trace") and len(args.inputs) != 1:
        print(f"error: {args.kind} takes exactly one CSV", file=sys.stderr)
        return 2
    try:
        path = render(args.kind, args.inputs, args.out, title=args.title)
    except CsvFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: cannot write figure: {e}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
