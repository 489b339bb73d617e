import json

from importlib import resources

import pytest

from framecheck_cli.main import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from framecheck_core.constants import SPAN_TABLE_ENV_VAR
from framecheck_core.scene_model import parse_scene, serialize_scene


PLAN = {
    "analysis": {
        "stories": 1,
        "roof_type": "gable",
        "lot_size": {"width": 10.0, "depth": 8.0, "area": 80.0},
    },
    "sections": [
        {"name": "main", "bounds": {"x_min": 0, "x_max": 10, "y_min": 0, "y_max": 8}}
    ],
    "construction_order": [
        {"step": 1, "section": "main", "phase": "foundation"},
        {"step": 2, "section": "main", "phase": "floor", "depends_on": [1]},
    ],
}


@pytest.fixture(autouse=True)
def _no_span_table_env(monkeypatch):
    monkeypatch.delenv(SPAN_TABLE_ENV_VAR, raising=False)


@pytest.fixture
def span_table(tmp_path):
    path = tmp_path / "spans.json"
    data = resources.files("framecheck_core").joinpath("data/fixture_span_table.json")
    path.write_bytes(data.read_bytes())
    return str(path)


@pytest.fixture
def scene_file(tmp_path):
    path = tmp_path / "gable.json"
    assert main(["gen-fixture", "--width", "6", "--depth", "4", "-o", str(path)]) == 0
    return str(path)


def test_gen_fixture_writes_the_gable(scene_file, gable):
    with open(scene_file, "rb") as f:
        assert f.read() == serialize_scene(gable)


def test_gen_fixture_to_stdout(capsys):
    assert main(["gen-fixture", "--width", "2", "--depth", "2"]) == EXIT_OK
    scene = parse_scene(capsys.readouterr().out)
    assert any(m.name.startswith("Ridge") for m in scene.members)


def test_validate_passing_scene(scene_file, span_table, capsys):
    assert main(["validate", scene_file, "--span-table", span_table]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("PASS (tsi 1.0)")
    assert "LoD 350" not in out


def test_validate_failing_scene(tmp_path, span_table, capsys):
    path = str(tmp_path / "no_ridge.json")
    args = ["gen-fixture", "--width", "6", "--depth", "4", "--mutate", "remove_ridge"]
    assert main([*args, "-o", path]) == EXIT_OK
    assert main(["validate", path, "--span-table", span_table]) == EXIT_FAIL
    out = capsys.readouterr().out
    assert out.startswith("FAIL")
    assert "hinge failure" in out
    assert "LoD 350 (iii) interface definition" in out


def test_validate_json(scene_file, span_table, capsys):
    assert main(["validate", scene_file, "--span-table", span_table, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["overall_pass"] is True
    assert data["lod_findings"] == []


def test_span_table_from_environment(scene_file, span_table, monkeypatch):
    monkeypatch.setenv(SPAN_TABLE_ENV_VAR, span_table)
    assert main(["validate", scene_file]) == EXIT_OK


def test_validate_usage_errors(scene_file, span_table, tmp_path):
    assert main(["validate", scene_file]) == EXIT_USAGE
    args = ["validate", scene_file, "--span-table", span_table]
    assert main(["validate", str(tmp_path / "missing.json"), *args[2:]]) == EXIT_USAGE
    assert main([*args, "--param", "nope=1"]) == EXIT_USAGE

    empty = tmp_path / "empty_spans.json"
    empty.write_text('{"joist": {}, "rafter": {}}', encoding="utf-8")
    assert main(["validate", scene_file, "--span-table", str(empty)]) == EXIT_USAGE


def test_score_scene_against_itself(scene_file, span_table, capsys):
    assert main(["score", scene_file, scene_file, "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["topology"]["census_c"] == 1.0
    assert data["topology"]["composite_t"] == pytest.approx(1.0)
    assert "structural" not in data

    assert main(["score", scene_file, scene_file, "--span-table", span_table]) == 0
    assert "structural pass True" in capsys.readouterr().out


def test_score_needs_both_view_directories(scene_file, tmp_path):
    args = ["score", scene_file, scene_file, "--generated-views", str(tmp_path)]
    assert main(args) == EXIT_USAGE


def test_corpus(tmp_path, span_table, capsys):
    scenes = tmp_path / "scenes"
    scenes.mkdir()
    base = ["gen-fixture", "--width", "6", "--depth", "4"]
    assert main([*base, "-o", str(scenes / "ok.json")]) == 0
    bad = str(scenes / "bad.json")
    assert main([*base, "--mutate", "remove_ridge", "-o", bad]) == 0
    capsys.readouterr()

    excel = tmp_path / "corpus.xlsx"
    args = ["corpus", str(scenes), "--span-table", span_table, "--excel", str(excel)]
    assert main(args) == EXIT_FAIL
    assert "pass rate 0.5" in capsys.readouterr().out
    assert excel.is_file()

    assert main([*args[:4], "--json", "--workers", "2"]) == EXIT_FAIL
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert records[-1]["record"] == "summary"
    assert records[-1]["patterns"] == [{"tests": ["T10"], "count": 1, "fraction": 1.0}]


def test_plan_check(tmp_path, capsys):
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(PLAN), encoding="utf-8")
    ctx = ["--lot-depth", "8", "--stories", "1", "--roof", "gable"]
    assert main(["plan-check", str(path), "--lot-width", "10", *ctx]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ACCEPTED")

    assert main(["plan-check", str(path), "--lot-width", "12", *ctx, "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["accepted"] is False
    assert [v["kind"] for v in data["violations"]] == ["lot_size", "lot_size"]


def test_no_command_prints_usage(capsys):
    assert main([]) == EXIT_USAGE
    assert "usage: framecheck" in capsys.readouterr().err
