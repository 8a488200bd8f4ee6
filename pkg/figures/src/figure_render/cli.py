"""render_figures <fig-id> --in <csv...> --out <image>"""

import argparse
import sys

from .csvdata import CsvError, read_sweep_csv
from .render import FIGURES, render_figure


def build_parser():
    ap = argparse.ArgumentParser(
        prog="render_figures",
        description="Render a figure from lattice-casimir sweep CSV files",
    )
    ap.add_argument("fig_id", choices=sorted(FIGURES))
    ap.add_argument(
        "--in",
        dest="inputs",
        nargs="+",
        required=True,
        metavar="CSV",
        help="input CSV file(s) from the lattice-casimir CLI",
    )
    ap.add_argument(
        "--out",
        required=True,
        help="output image path; format from the extension",
    )
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        tables = [read_sweep_csv(p) for p in args.inputs]
        warnings = render_figure(args.fig_id, tables, args.out)
    except CsvError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    for w in warnings:
        print("warning: %s" % w, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
