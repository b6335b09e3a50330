#!/usr/bin/env python3
import argparse
import logging
from logging import getLogger
from pathlib import Path

from steenrod_desk.algebra import trivial_module
from steenrod_desk.chart import emit_chart
from steenrod_desk.homalg import build_An, ext

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(name)s: %(message)s"
)
logger = getLogger(__file__)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-root", type=Path, default="./charts", help="Output directory")
    parser.add_argument("--max-n", type=int, default=1, help="Chart A(0), ..., A(max-n)")
    parser.add_argument("--max-s", type=int, default=6, help="Largest homological degree")
    parser.add_argument("--max-t", type=int, default=20, help="Largest internal degree")
    args = parser.parse_args()
    return args


def main():
    args = parse_args()
    args.out_root.mkdir(parents=True, exist_ok=True)

    for n in range(args.max_n + 1):
        algebra = build_An(n)
        f2 = trivial_module(algebra)
        chart = ext(algebra, f2, f2, args.max_s, args.max_t)
        for fmt, suffix in (("ascii", "txt"), ("svg", "svg")):
            path = args.out_root / f"ext_A{n}.{suffix}"
            with open(path, "w", encoding="utf-8") as f:
                f.write(emit_chart(chart, fmt) + "\n")
            logger.info(f"wrote {path}")


if __name__ == "__main__":
    main()
