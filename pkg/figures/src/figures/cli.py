"""Command line entry points, one per figure kind."""

import argparse
import sys
from pathlib import Path

from .io import SchemaError
from .render import FigureSpec, render


def _parse_markers(text: str) -> tuple[float, ...]:
    if not text:
        return ()
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise SchemaError(f"--markers: expected comma-separated numbers, got {text!r}") from exc


def _main(kind: str, argv) -> int:
    parser = argparse.ArgumentParser(
        prog=f"render_{kind.replace('-', '_')}",
        description=f"Render a {kind} figure from a simulator CSV file.",
    )
    parser.add_argument("--in", dest="in_path", required=True, help="input CSV file")
    parser.add_argument("--out", dest="out_path", default=None, help="output PNG (default: input with .png)")
    parser.add_argument("--xlabel", default="", help="x axis label override")
    parser.add_argument("--ylabel", default="", help="y axis label override")
    if kind in ("spectrum", "spectrum-db"):
        parser.add_argument("--markers", default="", help="comma-separated frequencies to mark")
    args = parser.parse_args(argv)

    out_path = args.out_path or str(Path(args.in_path).with_suffix(".png"))
    try:
        spec = FigureSpec(
            in_path=args.in_path,
            kind=kind,
            out_path=out_path,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
            markers=_parse_markers(getattr(args, "markers", "")),
        )
        written = render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(written)
    return 0


def heatmap_main(argv=None) -> int:
    return _main("heatmap", argv)


def sweep_main(argv=None) -> int:
    return _main("sweep", argv)


def spectrum_main(argv=None) -> int:
    return _main("spectrum", argv)


def spectrum_db_main(argv=None) -> int:
    return _main("spectrum-db", argv)
