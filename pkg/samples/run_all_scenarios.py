#!/usr/bin/env python3
import argparse
import logging
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, List

from tabulate import tabulate

from steenrod_desk.config import ScenarioConfig
from steenrod_desk.vanishing import run_vanishing_chain

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(name)s: %(message)s"
)
logger = getLogger(__file__)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--scenario-root",
        type=Path,
        default=Path(__file__).parent.parent / "scenarios",
        help="Directory of scenario files",
    )
    args = parser.parse_args()
    return args


def main():
    args = parse_args()

    summary: List[Dict[str, Any]] = []
    for path in sorted(args.scenario_root.glob("*.json")):
        config = ScenarioConfig.from_file(path)
        report = run_vanishing_chain(config)
        summary.append(
            {
                "file": path.name,
                "scenario": report.scenario,
                "n": "" if report.n is None else report.n,
                "windows": len(report.windows),
                "result": "passed" if report.passed else f"FAILED: {report.aborted}",
            }
        )
    print(tabulate(summary, headers="keys"))


if __name__ == "__main__":
    main()
