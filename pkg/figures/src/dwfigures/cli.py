"""CLI wrapper: render --fig <1..5> --in <csv> --out <png>."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, SchemaError, render

EXIT_OK = 0
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a dwcavity sweep CSV as a publication-style figure.",
    )
    parser.add_argument("--fig", type=int, required=True, choices=range(1, 6),
                        help="figure number (1..5)")
    parser.add_argument("--in", dest="input_csv", required=True,
                        help="input CSV from the dwcavity CLI")
    parser.add_argument("--out", dest="output_image", required=True,
                        help="output PNG path")
    parser.add_argument(
        "--offsets",
        help="comma-separated per-curve vertical shifts (figure 1 only)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    offsets = ()
    if args.offsets:
        try:
            offsets = tuple(float(x) for x in args.offsets.split(","))
        except ValueError:
            print(f"invalid offsets: {args.offsets!r}", file=sys.stderr)
            return EXIT_INPUT
    try:
        spec = FigureSpec(
            figure_id=args.fig,
            input_csv=args.input_csv,
            output_image=args.output_image,
            offsets=offsets,
        )
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
