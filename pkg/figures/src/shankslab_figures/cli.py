"""Figure rendering front end.

    shankslab-plot --kind scatter --n 1 --in scatter_n1.csv --out fig1.png

Exit codes: 0 success, 2 usage error, 4 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .plots import DEFAULT_POINT_LIMIT, PlotDataError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shankslab-plot",
        description="render a shankslab CSV export as a PNG figure")
    ap.add_argument("--kind", required=True,
                    choices=("scatter", "residual-ratio"))
    ap.add_argument("--n", type=int, required=True,
                    help="derivative order of the input data")
    ap.add_argument("--in", dest="input_csv", required=True,
                    help="scatter or series CSV")
    ap.add_argument("--out", dest="output_image", required=True,
                    help="PNG path to write")
    ap.add_argument("--point-limit", type=int, default=DEFAULT_POINT_LIMIT,
                    help="uniform-stride downsample threshold")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.n < 1:
        print(f"error: order must be >= 1, got {args.n}", file=sys.stderr)
        return 2
    if args.point_limit < 1:
        print(f"error: point limit must be >= 1, got {args.point_limit}",
              file=sys.stderr)
        return 2
    try:
        spec = PlotSpec(input_csv=args.input_csv, kind=args.kind,
                        n=args.n, output_image=args.output_image,
                        point_limit=args.point_limit)
        out = render(spec)
    except PlotDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
