"""
Batch validation of a directory of scene files: marginal failure rates,
exact co-failure patterns and the LoD 350 reading of each failure.
"""

import hashlib
import json
import logging

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, NamedTuple

from framecheck_core.constants import (
    LOD_350_REQUIREMENTS,
    SCENE_FILE_SUFFIX,
    SCHEMA_VERSION,
)
from framecheck_core.errors import ConfigError, FramecheckError
from framecheck_core.scene_model import load_scene
from framecheck_core.validators.params import ValidationParams, check_validation_params
from framecheck_core.validators.report import (
    ALL_CHECKS,
    CheckId,
    SuiteReport,
    report_to_dict,
)
from framecheck_core.validators.span_table import SpanTable
from framecheck_core.validators.suite import run_suite


class SceneDigest(NamedTuple):
    scene_id: str
    overall_pass: bool
    failed: tuple[CheckId, ...]
    violation_count: int
    tsi: float
    digest: str


class CofailurePattern(NamedTuple):
    tests: tuple[CheckId, ...]
    count: int
    fraction: float


class CorpusReport(NamedTuple):
    per_test_failure_rate: dict[CheckId, float]
    cofailure_patterns: tuple[CofailurePattern, ...]
    pass_rate: float
    per_scene: tuple[SceneDigest, ...]
    scene_count: int
    evaluated_count: int
    failing_count: int
    unreadable: tuple[tuple[str, str], ...] = ()
    not_evaluable: tuple[tuple[str, str], ...] = ()


class LodFinding(NamedTuple):
    check_id: CheckId
    lod_requirement: str
    narrative: str


_LOD_BY_CHECK = {
    CheckId(test): (requirement, row["narrative"])
    for requirement, row in LOD_350_REQUIREMENTS.items()
    for test in row["tests"]
}


def lod_map(report: SuiteReport) -> list[LodFinding]:
    """One finding per failed test, in test order."""
    return [
        LodFinding(check_id, *_LOD_BY_CHECK[check_id])
        for check_id in ALL_CHECKS
        if report.verdicts.get(check_id) == "fail"
    ]


def report_digest(report: SuiteReport) -> str:
    canonical = json.dumps(report_to_dict(report), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def scene_files(directory: Path) -> list[Path]:
    return sorted(
        p for p in Path(directory).rglob(f"*{SCENE_FILE_SUFFIX}") if p.is_file()
    )


class _Outcome(NamedTuple):
    scene_id: str
    report: SuiteReport | None
    error: str | None = None


def _evaluate(
    path: Path, root: Path, table: SpanTable, params: ValidationParams
) -> _Outcome:
    scene_id = path.relative_to(root).as_posix()
    try:
        scene = load_scene(path)
    except (OSError, FramecheckError) as e:
        logging.error(f"Skipping unreadable scene {scene_id}: {e}")
        return _Outcome(scene_id, None, str(e))
    return _Outcome(scene_id, run_suite(scene, table, params))


def _pattern_key(pattern: tuple[CheckId, ...]) -> tuple[int, ...]:
    return tuple(c.number for c in pattern)


def aggregate(outcomes: list[_Outcome]) -> CorpusReport:
    """Order-free reduction of per-scene outcomes into a corpus report."""
    outcomes = sorted(outcomes, key=lambda o: o.scene_id)
    unreadable = tuple(
        (o.scene_id, o.error or "") for o in outcomes if o.report is None
    )
    not_evaluable = tuple(
        (o.scene_id, o.report.error or "")
        for o in outcomes
        if o.report is not None and not o.report.evaluable
    )
    evaluated = [
        (o.scene_id, o.report)
        for o in outcomes
        if o.report is not None and o.report.evaluable
    ]

    digests = tuple(
        SceneDigest(
            scene_id,
            report.overall_pass,
            report.failed_checks(),
            len(report.violations),
            report.tsi,
            report_digest(report),
        )
        for scene_id, report in evaluated
    )
    n = len(digests)
    failing = [d for d in digests if not d.overall_pass]
    failures = Counter(c for d in failing for c in d.failed)
    rates = {c: (failures[c] / n if n else 0.0) for c in ALL_CHECKS}

    patterns = Counter(d.failed for d in failing)
    ranked = sorted(
        patterns.items(), key=lambda item: (-item[1], _pattern_key(item[0]))
    )
    cofailure = tuple(
        CofailurePattern(tests, count, count / len(failing)) for tests, count in ranked
    )
    return CorpusReport(
        per_test_failure_rate=rates,
        cofailure_patterns=cofailure,
        pass_rate=(n - len(failing)) / n if n else 0.0,
        per_scene=digests,
        scene_count=len(outcomes),
        evaluated_count=n,
        failing_count=len(failing),
        unreadable=unreadable,
        not_evaluable=not_evaluable,
    )


def run_corpus(
    directory: Path,
    table: SpanTable,
    params: ValidationParams | None = None,
    workers: int = 1,
) -> CorpusReport:
    """
    Validates every scene file under `directory`. Unreadable files are
    recorded and left out of every rate.

    Raises:
        ConfigError: the directory holds no scene files.
    """
    params = params or ValidationParams()
    problems = check_validation_params(params)
    if problems:
        raise ConfigError("; ".join(problems))
    root = Path(directory)
    files = scene_files(root)
    if not files:
        raise ConfigError(f"no {SCENE_FILE_SUFFIX} scene files under '{root}'")
    logging.info(
        f"📂 Validating {len(files)} scenes from {root} with {workers} workers"
    )

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(lambda p: _evaluate(p, root, table, params), files))

    report = aggregate(outcomes)
    logging.info(
        f"Corpus done: {report.evaluated_count} evaluated, "
        f"{report.failing_count} failing, {len(report.unreadable)} unreadable"
    )
    return report


def corpus_records(report: CorpusReport) -> list[dict[str, Any]]:
    """One record per scene, then a summary record."""
    records: list[dict[str, Any]] = []
    for d in report.per_scene:
        records.append(
            {
                "schema_version": SCHEMA_VERSION,
                "record": "scene",
                "scene": d.scene_id,
                "overall_pass": d.overall_pass,
                "failed": [c.value for c in d.failed],
                "violations": d.violation_count,
                "tsi": d.tsi,
                "digest": d.digest,
            }
        )
    for kind, skipped in (
        ("unreadable", report.unreadable),
        ("not_evaluable", report.not_evaluable),
    ):
        records.extend(
            {
                "schema_version": SCHEMA_VERSION,
                "record": kind,
                "scene": scene_id,
                "error": error,
            }
            for scene_id, error in skipped
        )
    records.append(
        {
            "schema_version": SCHEMA_VERSION,
            "record": "summary",
            "scene_count": report.scene_count,
            "evaluated": report.evaluated_count,
            "failing": report.failing_count,
            "pass_rate": report.pass_rate,
            "failure_rates": {
                c.value: r for c, r in report.per_test_failure_rate.items()
            },
            "patterns": [
                {
                    "tests": [c.value for c in p.tests],
                    "count": p.count,
                    "fraction": p.fraction,
                }
                for p in report.cofailure_patterns
            ],
        }
    )
    return records


def records_to_jsonl(records: list[dict[str, Any]]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
