"""Command-line interface: render one CSV dataset into one figure file."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .contract import ContractError
from .figures import KINDS, PlotJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a deltashell CSV dataset into a figure file.",
    )
    parser.add_argument(
        "--version", action="version", version=f"render {__version__}"
    )
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("input", help="input CSV path")
    parser.add_argument("output", help="output image path")
    parser.add_argument(
        "--dpi", type=int, default=150, help="raster resolution (default 150)"
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = PlotJob(
            input_path=args.input,
            kind=args.kind,
            output_path=args.output,
            dpi=args.dpi,
        )
        render(job)
    except (ContractError, ValueError, OSError) as exc:
        print(f"render: error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
