"""
Allowable span tables (joists and rafters) keyed by nominal section.

Tables are configuration: the engine never embeds code-book values. A
documented fixture table ships as package data for tests and fixtures.
"""

import json
import logging
import math
import re

from importlib import resources
from pathlib import Path
from typing import Any, Literal, NamedTuple

from framecheck_core.errors import SpanTableError


SectionMM = tuple[int, int]
SpanKind = Literal["joist", "rafter"]

_KEY_PATTERN = re.compile(r"^\s*(\d+)\s*x\s*(\d+)\s*$")


class SpanTable(NamedTuple):
    joist_spans: dict[SectionMM, float]
    rafter_spans: dict[SectionMM, float]

    def spans(self, kind: SpanKind) -> dict[SectionMM, float]:
        return self.joist_spans if kind == "joist" else self.rafter_spans


def _parse_key(key: str) -> SectionMM:
    match = _KEY_PATTERN.match(key)
    if match is None:
        raise SpanTableError(f"span table key {key!r} is not of the form WxD")
    w, d = int(match.group(1)), int(match.group(2))
    return (min(w, d), max(w, d))


def _parse_spans(raw: Any, kind: str) -> dict[SectionMM, float]:
    if not isinstance(raw, dict):
        raise SpanTableError(f"span table '{kind}' must be an object")
    spans = {}
    for key, value in raw.items():
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise SpanTableError(f"{kind} span for {key!r} must be a number")
        if not math.isfinite(value) or value <= 0:
            raise SpanTableError(f"{kind} span for {key!r} must be positive")
        spans[_parse_key(key)] = float(value)
    return spans


def parse_span_table(document: str | bytes) -> SpanTable:
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise SpanTableError(
            f"span table is not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})"
        ) from e
    if not isinstance(raw, dict) or "joist" not in raw or "rafter" not in raw:
        raise SpanTableError("span table needs 'joist' and 'rafter' maps")
    return SpanTable(
        _parse_spans(raw["joist"], "joist"), _parse_spans(raw["rafter"], "rafter")
    )


def load_span_table(path: Path) -> SpanTable:
    try:
        document = Path(path).read_bytes()
    except OSError as e:
        raise SpanTableError(f"cannot read span table '{path}': {e.strerror}") from e
    table = parse_span_table(document)
    logging.info(
        f"Loaded span table {path}: {len(table.joist_spans)} joist, "
        f"{len(table.rafter_spans)} rafter entries"
    )
    return table


def fixture_span_table() -> SpanTable:
    """The documented fixture table bundled with the package."""
    data = resources.files("framecheck_core").joinpath("data/fixture_span_table.json")
    return parse_span_table(data.read_bytes())


def nearest_standard_section(
    section_m: tuple[float, float], lumber_set: tuple[SectionMM, ...]
) -> SectionMM:
    """Closest Λ pair (Euclidean distance in mm); ties go to the earlier pair."""
    w_mm, d_mm = section_m[0] * 1000.0, section_m[1] * 1000.0
    best = lumber_set[0]
    best_distance = math.inf
    for candidate in lumber_set:
        distance = math.hypot(w_mm - candidate[0], d_mm - candidate[1])
        if distance < best_distance:
            best, best_distance = candidate, distance
    return best


def allowable_span(
    table: SpanTable,
    kind: SpanKind,
    section_m: tuple[float, float],
    lumber_set: tuple[SectionMM, ...],
    member_name: str = "",
) -> tuple[SectionMM, float]:
    """
    Looks up the allowable span for a section after rounding it to the
    nearest standard pair.

    Raises:
        SpanTableError: the table has no entry for the rounded section.
    """
    key = nearest_standard_section(section_m, lumber_set)
    spans = table.spans(kind)
    if key not in spans:
        raise SpanTableError(
            f"no {kind} span for section {key[0]}x{key[1]} "
            f"(member '{member_name}')"
        )
    return key, spans[key]
