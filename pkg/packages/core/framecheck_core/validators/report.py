import math

from enum import Enum
from typing import Any, NamedTuple

from framecheck_core.constants import CHECK_NAMES, SCHEMA_VERSION


class CheckId(Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    T7 = "T7"
    T8 = "T8"
    T9 = "T9"
    T10 = "T10"

    @property
    def number(self) -> int:
        return int(self.value[1:])

    @property
    def display_name(self) -> str:
        return CHECK_NAMES[self.value][0]

    @property
    def category(self) -> str:
        return CHECK_NAMES[self.value][1]


ALL_CHECKS = tuple(CheckId)


class Quantity(NamedTuple):
    value: float
    unit: str = ""


class Violation(NamedTuple):
    check_id: CheckId
    members: tuple[str, ...]
    measured: Quantity
    limit: Quantity
    message: str
    tag: str = ""
    cells: tuple[tuple[int, int], ...] = ()


class TestOutcome(NamedTuple):
    __test__ = False  # not a pytest class

    check_id: CheckId
    passed: bool
    violations: tuple[Violation, ...] = ()
    metric: float | None = None


class SuiteReport(NamedTuple):
    verdicts: dict[CheckId, str]
    violations: tuple[Violation, ...]
    tsi: float
    overall_pass: bool
    outcomes: tuple[TestOutcome, ...] = ()
    rho: float | None = None
    gamma: float | None = None
    evaluable: bool = True
    error: str | None = None

    def failed_checks(self) -> tuple[CheckId, ...]:
        return tuple(c for c in ALL_CHECKS if self.verdicts.get(c) == "fail")


def format_number(value: float) -> str:
    """Up to three decimals, at least one (3.0, 4.326); ints stay bare."""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if math.isinf(value):
        return "inf"
    if math.isnan(value):
        return "nan"
    text = f"{value:.3f}".rstrip("0")
    if text.endswith("."):
        text += "0"
    return "0.0" if text == "-0.0" else text


def format_quantity(quantity: Quantity) -> str:
    return f"{format_number(quantity.value)} {quantity.unit}".rstrip()


def describe_members(members: tuple[str, ...], scope: str) -> str:
    if not members:
        return scope
    if len(members) == 1:
        return f"in {members[0]}"
    if len(members) == 2:
        return f"between {members[0]} and {members[1]}"
    return f"across {', '.join(members[:3])}, ... ({len(members)} members)"


def make_violation(
    check_id: CheckId,
    subject: str,
    relation: str,
    limit: Quantity,
    measured: Quantity,
    members: tuple[str, ...] = (),
    quantity: str = "",
    tag: str = "",
    cells: tuple[tuple[int, int], ...] = (),
    scope: str = "across scene",
) -> Violation:
    """
    Builds a violation whose message reads
    "<subject> <relation> <limit>; detected <measured> <where>".
    """
    detected = format_quantity(measured)
    if quantity:
        detected = f"{quantity} {detected}"
    message = (
        f"{subject} {relation} {format_quantity(limit)}; "
        f"detected {detected} {describe_members(members, scope)}"
    )
    if tag:
        message += f" ({tag})"
    return Violation(check_id, members, measured, limit, message, tag, cells)


def outcome(
    check_id: CheckId, violations: list[Violation], metric: float | None = None
) -> TestOutcome:
    return TestOutcome(check_id, not violations, tuple(violations), metric)


def _violation_sort_key(violation: Violation) -> tuple[int, str, str]:
    first = violation.members[0] if violation.members else ""
    return (violation.check_id.number, first, violation.message)


def sorted_violations(
    violations: tuple[Violation, ...] | list[Violation]
) -> list[Violation]:
    return sorted(violations, key=_violation_sort_key)


def quantity_to_dict(quantity: Quantity) -> dict[str, Any]:
    """Non-finite values become None so the record stays strict JSON."""
    value = quantity.value if math.isfinite(quantity.value) else None
    return {"value": value, "unit": quantity.unit}


def violation_to_dict(violation: Violation) -> dict[str, Any]:
    record = violation._asdict()
    record["check_id"] = violation.check_id.value
    record["members"] = list(violation.members)
    record["measured"] = quantity_to_dict(violation.measured)
    record["limit"] = quantity_to_dict(violation.limit)
    record["cells"] = [list(c) for c in violation.cells]
    return record


def format_feedback(report: SuiteReport, machine: bool = False) -> Any:
    """
    Feedback for a suite run: one line per violation, ordered by test id and
    then member name. With `machine=True` the same records come back as plain
    dicts instead of text.
    """
    ordered = sorted_violations(report.violations)
    if machine:
        return [violation_to_dict(v) for v in ordered]
    return "\n".join(v.message for v in ordered)


def report_to_dict(report: SuiteReport) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "overall_pass": report.overall_pass,
        "evaluable": report.evaluable,
        "error": report.error,
        "tsi": report.tsi,
        "rho": report.rho,
        "gamma": report.gamma,
        "verdicts": {
            c.value: report.verdicts[c] for c in ALL_CHECKS if c in report.verdicts
        },
        "violations": format_feedback(report, machine=True),
    }
