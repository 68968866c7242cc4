"""mkdocs hook: regenerate size-report.md before every build.

The page is not kept in the source tree; it is always the output of
``SizeReportGenerator`` over the default corpus (30 random circuits, seed
2024, plus the worked example).
"""

import logging
from pathlib import Path

from permcirc.report import SizeReportGenerator, default_corpus

logger = logging.getLogger("mkdocs.hooks.size_report")

WORKED_EXAMPLE = Path(__file__).resolve().parents[2] / "circuits" / "four_qubit.txt"


def on_pre_build(config, **kwargs) -> None:
    target = Path(config["docs_dir"]) / "size-report.md"
    SizeReportGenerator(default_corpus(WORKED_EXAMPLE)).generate_report(target)
    logger.info(f"size report written to {target}")
