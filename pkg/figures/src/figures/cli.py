"""figures <command> --in <csv> --out <png>"""

from __future__ import annotations

import argparse
import sys

from .plots import CsvFormatError, plot_babai_vs_cvp, plot_sweep


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="figures", description="Render ntruvfk CSV output to PNG charts."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("babai-vs-cvp", help="per-trial distance scatter from a bench CSV")
    p.add_argument("--in", dest="src", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="", help="parameters for the title, e.g. 'N=677, P=6, q=70, k=10'")
    p.set_defaults(fn=lambda a: plot_babai_vs_cvp(a.src, a.out, label=a.label))

    p = sub.add_parser("sweep", help="success rate by oracle range from an attack/sweep CSV")
    p.add_argument("--in", dest="src", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="")
    p.set_defaults(fn=lambda a: plot_sweep(a.src, a.out, label=a.label))

    args = ap.parse_args(argv)
    try:
        args.fn(args)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
