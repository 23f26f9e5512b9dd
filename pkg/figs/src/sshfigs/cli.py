"""Command-line entry point: figs <figure-id> --in <dir> --out <file>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import FigsInputError
from .render import FIGURE_INPUTS, FigureJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figs",
                                     description="Render figure analogs from simulation CSVs")
    parser.add_argument("figure_id", choices=sorted(FIGURE_INPUTS),
                        help="which figure to render")
    parser.add_argument("--in", dest="input_dir", required=True,
                        help="directory holding the input CSVs")
    parser.add_argument("--out", dest="output_path", required=True,
                        help="output image path (.png, .svg, or .pdf)")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(figure_id=args.figure_id, input_dir=Path(args.input_dir),
                    output_path=Path(args.output_path), dpi=args.dpi)
    try:
        out = render(job)
    except FigsInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
