import argparse
import json
import logging
import os
import sys

from pathlib import Path
from typing import Any

from framecheck_core.config import RunConfig, apply_overrides, load_config
from framecheck_core.constants import SCHEMA_VERSION, SPAN_TABLE_ENV_VAR
from framecheck_core.corpus_runner import (
    corpus_records,
    lod_map,
    records_to_jsonl,
    run_corpus,
)
from framecheck_core.errors import ConfigError, FramecheckError
from framecheck_core.fidelity.topology import topo_scores
from framecheck_core.fidelity.visual import joint_pass, load_views, visual_scores
from framecheck_core.fixtures.generator import FixtureSpec, generate_gable
from framecheck_core.fixtures.mutations import apply_mutation, parse_mutation
from framecheck_core.plan_check import (
    PlanContext,
    check_plan,
    parse_plan,
    phase_warnings,
)
from framecheck_core.scene_model import RoofType, load_scene, serialize_scene
from framecheck_core.store_data import store_corpus_report_to_excel
from framecheck_core.utils.logging_config import configure_logging, set_debug_level
from framecheck_core.validators.report import (
    ALL_CHECKS,
    SuiteReport,
    format_feedback,
    format_number,
    report_to_dict,
)
from framecheck_core.validators.span_table import SpanTable, load_span_table
from framecheck_core.validators.suite import run_suite


EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(data: Any) -> None:
    _emit(json.dumps(data, indent=2, sort_keys=True))


def _run_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if args.config is not None:
        config = load_config(args.config)
    return apply_overrides(config, args.param)


def _span_table(args: argparse.Namespace, required: bool = True) -> SpanTable | None:
    path = args.span_table or os.environ.get(SPAN_TABLE_ENV_VAR)
    if not path:
        if required:
            raise ConfigError(
                f"no span table: pass --span-table or set {SPAN_TABLE_ENV_VAR}"
            )
        return None
    return load_span_table(Path(path))


def _report_text(report: SuiteReport) -> str:
    status = "PASS" if report.overall_pass else "FAIL"
    lines = [f"{status} (tsi {format_number(report.tsi)})"]
    for check in ALL_CHECKS:
        verdict = report.verdicts.get(check, "-")
        lines.append(f"  {check.value:<4} {check.display_name:<20} {verdict}")
    feedback = format_feedback(report)
    if feedback:
        lines += ["", feedback]
    findings = lod_map(report)
    if findings:
        lines.append("")
        lines += [f"LoD 350 {f.lod_requirement}: {f.narrative}" for f in findings]
    return "\n".join(lines)


def cmd_validate(args: argparse.Namespace) -> int:
    config = _run_config(args)
    table = _span_table(args)
    assert table is not None
    report = run_suite(load_scene(args.scene), table, config.validation)
    if not report.evaluable:
        raise ConfigError(f"scene not evaluable: {report.error}")
    if args.json:
        data = report_to_dict(report)
        data["lod_findings"] = [
            {"test": f.check_id.value, "requirement": f.lod_requirement}
            for f in lod_map(report)
        ]
        _emit_json(data)
    else:
        _emit(_report_text(report))
    return EXIT_OK if report.overall_pass else EXIT_FAIL


def cmd_score(args: argparse.Namespace) -> int:
    config = _run_config(args)
    reference = load_scene(args.reference)
    generated = load_scene(args.generated)
    topo = topo_scores(reference, generated, config.fidelity)
    data: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "topology": topo._asdict(),
    }
    passed = True

    visual = None
    if args.generated_views or args.reference_views:
        if not (args.generated_views and args.reference_views):
            raise ConfigError("--generated-views and --reference-views go together")
        visual = visual_scores(
            load_views(args.generated_views),
            load_views(args.reference_views),
            config.fidelity,
        )
        data["visual"] = {
            "per_view": {v.value: s for v, s in visual.per_view.items()},
            "mean_s": visual.mean_s,
            "joint_visual_pass": visual.joint_visual_pass,
        }
        passed = visual.joint_visual_pass

    table = _span_table(args, required=False)
    if table is not None:
        report = run_suite(generated, table, config.validation)
        data["structural"] = report_to_dict(report)
        passed = passed and report.overall_pass
        if visual is not None:
            data["joint_pass"] = joint_pass(report, visual)

    if args.json:
        _emit_json(data)
    else:
        lines = [
            f"census C    {format_number(topo.census_c)}",
            f"match M     {format_number(topo.match_m)}",
            f"voxel V     {format_number(topo.voxel_v)}",
            f"composite T {format_number(topo.composite_t)}",
        ]
        if visual is not None:
            lines += [
                f"view {v.value:<12} {format_number(s)}"
                for v, s in visual.per_view.items()
            ]
            lines.append(f"visual mean {format_number(visual.mean_s)}")
            lines.append(f"visual pass {visual.joint_visual_pass}")
        if "structural" in data:
            lines.append(f"structural pass {data['structural']['overall_pass']}")
        if "joint_pass" in data:
            lines.append(f"joint pass {data['joint_pass']}")
        _emit("\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_corpus(args: argparse.Namespace) -> int:
    config = _run_config(args)
    table = _span_table(args)
    assert table is not None
    report = run_corpus(args.directory, table, config.validation, workers=args.workers)
    if args.excel is not None:
        store_corpus_report_to_excel(report, args.excel)
        logging.info(f"Excel results saved to {args.excel}")

    if args.json:
        sys.stdout.write(records_to_jsonl(corpus_records(report)))
    else:
        lines = [
            f"scenes {report.scene_count}, evaluated {report.evaluated_count}, "
            f"failing {report.failing_count}, "
            f"pass rate {format_number(report.pass_rate)}",
            "",
            "failure rate per test:",
        ]
        lines += [
            f"  {c.value:<4} {c.display_name:<20} {format_number(r)}"
            for c, r in report.per_test_failure_rate.items()
        ]
        if report.cofailure_patterns:
            lines += ["", "co-failure patterns:"]
            lines += [
                f"  {'+'.join(c.value for c in p.tests):<24} {p.count:>5} "
                f"{format_number(p.fraction)}"
                for p in report.cofailure_patterns
            ]
        for scene_id, error in (*report.unreadable, *report.not_evaluable):
            lines.append(f"skipped {scene_id}: {error}")
        _emit("\n".join(lines))
    return EXIT_OK if report.failing_count == 0 else EXIT_FAIL


def cmd_plan_check(args: argparse.Namespace) -> int:
    plan = parse_plan(Path(args.plan).read_bytes())
    ctx = PlanContext(args.lot_width, args.lot_depth, args.stories, RoofType(args.roof))
    violations = check_plan(plan, ctx)
    warnings = phase_warnings(plan)
    if args.json:
        _emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "accepted": not violations,
                "violations": [v._asdict() for v in violations],
                "warnings": [w._asdict() for w in warnings],
            }
        )
    else:
        lines = ["ACCEPTED" if not violations else "REJECTED"]
        lines += [f"{v.kind}: {v.message}" for v in violations]
        lines += [f"warning {w.kind}: {w.message}" for w in warnings]
        _emit("\n".join(lines))
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_gen_fixture(args: argparse.Namespace) -> int:
    config = _run_config(args)
    spec = FixtureSpec(
        width=args.width,
        depth=args.depth,
        stories=args.stories,
        roof_pitch_ratio=args.pitch,
        center_beam=args.center_beam,
    )
    table = _span_table(args, required=False)
    scene = generate_gable(spec, table, config.validation)
    for text in args.mutate:
        scene = apply_mutation(scene, parse_mutation(text))
    document = serialize_scene(scene)

    if args.output is None:
        sys.stdout.write(document.decode("utf-8"))
        return EXIT_OK
    args.output.write_bytes(document)
    logging.info(f"Fixture saved to {args.output}")
    if args.json:
        _emit_json(
            {
                "schema_version": SCHEMA_VERSION,
                "path": str(args.output),
                "members": len(scene.members),
            }
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable output.")
    common.add_argument("--config", type=Path, help="JSON file of parameter overrides.")
    common.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override one parameter; dotted keys reach contact.* and fidelity.*.",
    )
    common.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug logging for detailed output.",
    )

    parser = argparse.ArgumentParser(
        prog="framecheck",
        description="Validates and scores timber-frame structures.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command")

    validate = sub.add_parser(
        "validate", parents=[common], help="Run the ten structural tests."
    )
    validate.add_argument("scene", type=Path)
    validate.add_argument(
        "--span-table", help=f"Span table file (or ${SPAN_TABLE_ENV_VAR})."
    )
    validate.set_defaults(handler=cmd_validate)

    score = sub.add_parser(
        "score",
        parents=[common],
        help="Score a generated scene against a reference.",
    )
    score.add_argument("reference", type=Path)
    score.add_argument("generated", type=Path)
    score.add_argument("--generated-views", type=Path)
    score.add_argument("--reference-views", type=Path)
    score.add_argument("--span-table")
    score.set_defaults(handler=cmd_score)

    corpus = sub.add_parser(
        "corpus", parents=[common], help="Validate every scene in a directory."
    )
    corpus.add_argument("directory", type=Path)
    corpus.add_argument("--workers", type=int, default=1)
    corpus.add_argument(
        "--excel", type=Path, help="Also write the report to an Excel workbook."
    )
    corpus.add_argument("--span-table")
    corpus.set_defaults(handler=cmd_corpus)

    plan = sub.add_parser(
        "plan-check", parents=[common], help="Check a construction plan."
    )
    plan.add_argument("plan", type=Path)
    plan.add_argument("--lot-width", type=float, required=True)
    plan.add_argument("--lot-depth", type=float, required=True)
    plan.add_argument("--stories", type=int, required=True)
    plan.add_argument("--roof", choices=[r.value for r in RoofType], required=True)
    plan.set_defaults(handler=cmd_plan_check)

    fixture = sub.add_parser(
        "gen-fixture", parents=[common], help="Generate a gable fixture scene."
    )
    fixture.add_argument("--width", type=float, required=True)
    fixture.add_argument("--depth", type=float, required=True)
    fixture.add_argument("--stories", type=int, default=1)
    fixture.add_argument(
        "--pitch",
        type=float,
        default=FixtureSpec._field_defaults["roof_pitch_ratio"],
    )
    fixture.add_argument("--center-beam", action="store_true")
    fixture.add_argument(
        "--mutate", action="append", default=[], metavar="KIND:TARGET[:MAG]"
    )
    fixture.add_argument("--span-table")
    fixture.add_argument("-o", "--output", type=Path)
    fixture.set_defaults(handler=cmd_gen_fixture)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI application."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    configure_logging()
    if args.debug:
        set_debug_level()

    try:
        status: int = args.handler(args)
    except (FramecheckError, OSError) as e:
        logging.error(f"{args.command}: {e}")
        return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
