"""Rubric definitions, analyst score sheets and industry weight matrices.

Rubric scores are analyst-supplied inputs, never derived from raw data.
Definitions and weight matrices ship as bundled JSON but can be replaced
by files of the same shape.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import SchemaError

RUBRIC_IDS = ("TeRS", "ECS", "DQS")
MAX_SCORE = 5

_BUNDLED_DEFINITIONS = {"TeRS": "rubric_ters.json", "ECS": "rubric_ecs.json", "DQS": "rubric_dqs.json"}
_BUNDLED_WEIGHTS = {"TeRS": "weights_ters.json", "ECS": "weights_ecs.json"}


@dataclass(frozen=True)
class RubricCriterion:
    criterion_id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class RubricDefinition:
    rubric_id: str
    criteria: tuple[RubricCriterion, ...]

    def __post_init__(self):
        if self.rubric_id not in RUBRIC_IDS:
            raise SchemaError(f"unknown rubric id {self.rubric_id!r}")
        ids = [c.criterion_id for c in self.criteria]
        if len(set(ids)) != len(ids):
            raise SchemaError(f"duplicate criterion ids in rubric {self.rubric_id}")

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.criterion_id for c in self.criteria)


@dataclass(frozen=True)
class RubricSheet:
    rubric_id: str
    dataset_name: str
    scores: dict[str, int]
    evidence: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.rubric_id not in RUBRIC_IDS:
            raise SchemaError(f"unknown rubric id {self.rubric_id!r}")
        for cid, score in self.scores.items():
            if not isinstance(score, int) or not 0 <= score <= MAX_SCORE:
                raise SchemaError(
                    f"score {score!r} for {cid} in {self.dataset_name} "
                    f"must be an integer in [0, {MAX_SCORE}]"
                )


@dataclass(frozen=True)
class RubricWeightRow:
    rubric_id: str
    industry_name: str
    weights: dict[str, float]

    def __post_init__(self):
        for cid, weight in self.weights.items():
            if weight <= 0:
                raise SchemaError(
                    f"weight for {cid} ({self.industry_name}) must be positive"
                )


def check_criteria(sheet: RubricSheet, definition: RubricDefinition) -> None:
    """Score sheets must cover a rubric's criteria exactly."""
    if sheet.rubric_id != definition.rubric_id:
        raise SchemaError(
            f"sheet rubric {sheet.rubric_id} does not match definition "
            f"{definition.rubric_id}"
        )
    expected = set(definition.criterion_ids)
    got = set(sheet.scores)
    if expected != got:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        raise SchemaError(
            f"criterion mismatch for {sheet.dataset_name} ({sheet.rubric_id}): "
            f"missing {missing}, unexpected {extra}"
        )


def _read_bundled(name: str) -> str:
    return resources.files("idseval.data").joinpath(name).read_text()


def load_definition(rubric_id: str, path: str | Path | None = None) -> RubricDefinition:
    if path is None:
        text = _read_bundled(_BUNDLED_DEFINITIONS[rubric_id])
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    if doc.get("rubric_id") != rubric_id:
        raise SchemaError(f"definition file declares {doc.get('rubric_id')!r}, expected {rubric_id}")
    criteria = tuple(
        RubricCriterion(
            criterion_id=c["criterion_id"],
            name=c.get("name", c["criterion_id"]),
            description=c.get("description", ""),
        )
        for c in doc["criteria"]
    )
    return RubricDefinition(rubric_id=rubric_id, criteria=criteria)


def load_weight_matrix(
    rubric_id: str, path: str | Path | None = None
) -> dict[str, RubricWeightRow]:
    """Industry name -> weight row, for TeRS or ECS."""
    if rubric_id not in _BUNDLED_WEIGHTS:
        raise SchemaError(f"rubric {rubric_id} carries no industry weights")
    if path is None:
        text = _read_bundled(_BUNDLED_WEIGHTS[rubric_id])
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    if doc.get("rubric_id") != rubric_id:
        raise SchemaError(f"weight file declares {doc.get('rubric_id')!r}, expected {rubric_id}")
    return {
        industry: RubricWeightRow(
            rubric_id=rubric_id,
            industry_name=industry,
            weights={cid: float(w) for cid, w in weights.items()},
        )
        for industry, weights in doc["industries"].items()
    }


def load_sheet(path: str | Path) -> RubricSheet:
    doc = json.loads(Path(path).read_text())
    try:
        return RubricSheet(
            rubric_id=doc["rubric_id"],
            dataset_name=doc["dataset_name"],
            scores={cid: int(s) for cid, s in doc["scores"].items()},
            evidence=dict(doc.get("evidence", {})),
        )
    except KeyError as exc:
        raise SchemaError(f"rubric sheet {path} missing field {exc}") from exc
