import json

import pytest

from idseval.errors import SchemaError
from idseval.rubrics import (
    RubricSheet,
    RubricWeightRow,
    check_criteria,
    load_definition,
    load_sheet,
    load_weight_matrix,
)


def test_bundled_definitions_have_expected_sizes():
    assert len(load_definition("TeRS").criteria) == 14
    assert len(load_definition("ECS").criteria) == 16
    assert len(load_definition("DQS").criteria) == 8


def test_bundled_weight_matrices_cover_all_industries():
    for rubric_id in ("TeRS", "ECS"):
        matrix = load_weight_matrix(rubric_id)
        assert set(matrix) == {"healthcare", "finance", "retail", "government", "energy"}
        definition = load_definition(rubric_id)
        for row in matrix.values():
            assert set(row.weights) == set(definition.criterion_ids)
            assert all(1 <= w <= 5 for w in row.weights.values())


def test_dqs_carries_no_industry_weights():
    with pytest.raises(SchemaError):
        load_weight_matrix("DQS")


def test_sheet_scores_validated():
    with pytest.raises(SchemaError):
        RubricSheet(rubric_id="DQS", dataset_name="x", scores={"class_balance": 6})
    with pytest.raises(SchemaError):
        RubricSheet(rubric_id="DQS", dataset_name="x", scores={"class_balance": -1})
    with pytest.raises(SchemaError):
        RubricSheet(rubric_id="bogus", dataset_name="x", scores={})


def test_check_criteria_requires_exact_set():
    definition = load_definition("DQS")
    complete = {cid: 3 for cid in definition.criterion_ids}
    check_criteria(RubricSheet("DQS", "x", complete), definition)

    partial = dict(complete)
    partial.pop("class_balance")
    with pytest.raises(SchemaError, match="class_balance"):
        check_criteria(RubricSheet("DQS", "x", partial), definition)

    extra = dict(complete, bonus_round=4)
    with pytest.raises(SchemaError, match="bonus_round"):
        check_criteria(RubricSheet("DQS", "x", extra), definition)


def test_weight_row_requires_positive_weights():
    with pytest.raises(SchemaError):
        RubricWeightRow(rubric_id="TeRS", industry_name="x", weights={"a": 0.0})


def test_load_sheet_file(tmp_path):
    path = tmp_path / "sheet.json"
    path.write_text(
        json.dumps(
            {
                "rubric_id": "DQS",
                "dataset_name": "demo",
                "scores": {"class_balance": 2},
                "evidence": {"class_balance": "readme section 3"},
            }
        )
    )
    sheet = load_sheet(path)
    assert sheet.dataset_name == "demo"
    assert sheet.scores == {"class_balance": 2}
    assert sheet.evidence["class_balance"] == "readme section 3"


def test_load_sheet_missing_field(tmp_path):
    path = tmp_path / "sheet.json"
    path.write_text(json.dumps({"rubric_id": "DQS", "scores": {}}))
    with pytest.raises(SchemaError):
        load_sheet(path)


def test_published_sheet_fixtures_load_cleanly(fixtures_dir):
    ecs_def = load_definition("ECS")
    dqs_def = load_definition("DQS")
    sheet_dir = fixtures_dir / "sheets"
    paths = sorted(sheet_dir.glob("*.json"))
    assert len(paths) == 18
    for path in paths:
        sheet = load_sheet(path)
        definition = ecs_def if sheet.rubric_id == "ECS" else dqs_def
        check_criteria(sheet, definition)
