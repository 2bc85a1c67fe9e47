"""Command line entry: render --csv PATH --figure N --out PATH [--svg]."""

from __future__ import annotations

import argparse
import sys

from .render import RenderJob, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="xfid-render",
        description="render one sweep CSV into its figure image")
    parser.add_argument("--csv", required=True, help="sweep CSV produced by xfid")
    parser.add_argument("--figure", required=True, type=int, help="figure preset 1..10")
    parser.add_argument("--out", required=True, help="image destination path")
    parser.add_argument("--svg", action="store_true",
                        help="write SVG instead of PNG")
    args = parser.parse_args(argv)

    job_format = "svg" if args.svg else "png"
    try:
        render(RenderJob(csv_path=args.csv, figure_id=args.figure,
                         output_path=args.out, format=job_format))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
