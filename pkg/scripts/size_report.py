#!/usr/bin/env python3
"""
Matrix Size Report Generator

Encodes a seeded corpus of random circuits (plus the four-qubit worked
example) and writes the graph-fix dimension table to the docs site. The
docs build runs the same generator through docs/hooks/size_report.py.

Usage:
    python3 scripts/size_report.py [--trials N] [--seed S] [--output PATH]
"""

import argparse
import logging
import sys
from pathlib import Path

# Add repository root to Python path
SCRIPT_DIR = Path(__file__).resolve().parent
REPO_ROOT = SCRIPT_DIR.parent
sys.path.append(str(REPO_ROOT))

from permcirc.report import SizeReportGenerator, default_corpus  # noqa: E402

WORKED_EXAMPLE = REPO_ROOT / "circuits" / "four_qubit.txt"


def main():
    parser = argparse.ArgumentParser(description="Generate the matrix size report.")
    parser.add_argument("--trials", type=int, default=30, help="Random circuits (default 30)")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument(
        "--output",
        type=Path,
        default=REPO_ROOT / "docs" / "src" / "size-report.md",
        help="Markdown file to write",
    )
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

    corpus = default_corpus(WORKED_EXAMPLE, args.trials, args.seed)
    report_file = SizeReportGenerator(corpus).generate_report(args.output)
    print(f"Size report saved to: {report_file}")


if __name__ == "__main__":
    main()
