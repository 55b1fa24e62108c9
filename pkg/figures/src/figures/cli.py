"""Command line front end: ``figures render <figure_id> --data DIR --out FILE``."""

from __future__ import annotations

import argparse
import json
import sys

from .render import FIGURE_IDS, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render standard figures from unruh-preth scenario outputs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure to SVG")
    p_render.add_argument("figure_id", choices=FIGURE_IDS)
    p_render.add_argument("--data", required=True,
                          help="directory containing the scenario output subdirectories")
    p_render.add_argument("--out", required=True, help="output SVG path")
    args = parser.parse_args(argv)

    try:
        summary = render(args.figure_id, args.data, args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
