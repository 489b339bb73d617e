import pandas as pd

from framecheck_core.corpus_runner import run_corpus
from framecheck_core.fixtures.mutations import (
    MutationKind,
    apply_mutation,
    make_mutation,
)
from framecheck_core.scene_model import dump_scene
from framecheck_core.store_data import corpus_tables, store_corpus_report_to_excel


def _report(tmp_path, gable, table):
    scenes = tmp_path / "scenes"
    scenes.mkdir()
    dump_scene(gable, scenes / "ok.json")
    no_ridge = apply_mutation(gable, make_mutation(MutationKind.REMOVE_RIDGE))
    dump_scene(no_ridge, scenes / "no_ridge.json")
    return run_corpus(scenes, table)


def test_corpus_tables(tmp_path, gable, table):
    tables = corpus_tables(_report(tmp_path, gable, table))
    assert list(tables) == ["rates", "patterns", "scenes"]
    assert len(tables["rates"]) == 10
    assert tables["patterns"]["tests"].tolist() == ["T10"]
    assert tables["scenes"]["scene"].tolist() == ["no_ridge.json", "ok.json"]


def test_store_corpus_report_to_excel(tmp_path, gable, table):
    path = tmp_path / "corpus.xlsx"
    store_corpus_report_to_excel(_report(tmp_path, gable, table), path)
    sheets = pd.read_excel(path, sheet_name=None)
    assert list(sheets) == ["rates", "patterns", "scenes"]
    rates = sheets["rates"].set_index("test")["failure_rate"]
    assert rates["T10"] == 0.5
    assert rates["T1"] == 0.0
    assert sheets["scenes"]["overall_pass"].tolist() == [False, True]
