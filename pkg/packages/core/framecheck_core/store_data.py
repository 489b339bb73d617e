import os

import pandas as pd

from framecheck_core.corpus_runner import CorpusReport


def corpus_tables(report: CorpusReport) -> dict[str, pd.DataFrame]:
    """The rates, patterns and scenes tables of a corpus report."""
    rates = pd.DataFrame(
        [
            {
                "test": check.value,
                "name": check.display_name,
                "category": check.category,
                "failure_rate": rate,
            }
            for check, rate in report.per_test_failure_rate.items()
        ]
    )
    patterns = pd.DataFrame(
        [
            {
                "tests": "+".join(c.value for c in p.tests),
                "count": p.count,
                "fraction": p.fraction,
            }
            for p in report.cofailure_patterns
        ],
        columns=["tests", "count", "fraction"],
    )
    scenes = pd.DataFrame(
        [
            {
                "scene": d.scene_id,
                "overall_pass": d.overall_pass,
                "failed": " ".join(c.value for c in d.failed),
                "violations": d.violation_count,
                "tsi": d.tsi,
                "digest": d.digest,
            }
            for d in report.per_scene
        ],
        columns=["scene", "overall_pass", "failed", "violations", "tsi", "digest"],
    )
    return {"rates": rates, "patterns": patterns, "scenes": scenes}


def store_corpus_report_to_excel(
    report: CorpusReport, filename: str | os.PathLike[str]
) -> None:
    """
    Saves a corpus report to an Excel workbook, one sheet per table.
    An existing workbook is replaced.
    """
    with pd.ExcelWriter(filename, mode="w", engine="openpyxl") as writer:
        for sheet_name, df in corpus_tables(report).items():
            df.to_excel(writer, sheet_name=sheet_name, index=False)
