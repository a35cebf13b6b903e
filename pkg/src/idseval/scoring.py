"""The five metrics and their combination.

ARS comes in two readings that are both computed: the headline
frequency-weighted form (feeds the combined score) and the
coverage-weighted form (feeds the gap diagnostics). TeRS and ECS are
weighted rubric means normalized by the maximum rubric score; DQS is the
unweighted mean. The combined score is the arithmetic mean of the five.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .dataset import DatasetProfile
from .embeddings import MappingResult
from .errors import DomainError, SchemaError
from .industry import TechniqueWeights
from .rubrics import MAX_SCORE, RubricSheet, RubricWeightRow, check_criteria
from .temporal import CveLink, TemporalConfig, dataset_decay, technique_relevance

DEFAULT_FALLBACK_WEIGHT = 0.10
HIGH_PRIORITY_PERCENTILE = 0.75


@dataclass(frozen=True)
class CoverageEntry:
    attack_id: str
    name: str
    weight: float


def ars_frequency(
    profile: DatasetProfile,
    mapping: MappingResult,
    weights: TechniqueWeights,
    fallback_weight: float = DEFAULT_FALLBACK_WEIGHT,
) -> float:
    """Frequency-weighted mean of the industry weights of mapped techniques.

    Unmapped labels contribute ``fallback_weight``; the denominator uses the
    global maximum weight (1 after normalization).
    """
    if not profile.labels:
        raise DomainError("dataset profile has no attack labels")
    if not 0.0 < fallback_weight < 1.0:
        raise DomainError(f"fallback weight {fallback_weight} outside (0, 1)")
    w_max = max(weights.weights.values()) if weights.weights else 1.0
    numerator = 0.0
    denominator = 0.0
    for label in profile.labels:
        freq = profile.frequencies[label]
        label_map = mapping.per_label.get(label)
        if label_map is not None and label_map.top is not None:
            w = weights.weights.get(label_map.top[0], fallback_weight)
        else:
            w = fallback_weight
        numerator += freq * w
        denominator += freq * w_max
    return min(1.0, numerator / denominator)


def ars_coverage(
    weights: TechniqueWeights,
    mapped_ids: set[str],
    names: Mapping[str, str] | None = None,
) -> tuple[float, list[CoverageEntry], list[CoverageEntry]]:
    """Weighted coverage of the industry technique set by the dataset's mapping.

    Returns (score, covered, missing) with the lists sorted by weight
    descending. Zero total weight scores 0.
    """
    names = names or {}
    covered, missing = [], []
    total_weight = 0.0
    covered_weight = 0.0
    for attack_id, weight in weights.weights.items():
        entry = CoverageEntry(attack_id, names.get(attack_id, attack_id), weight)
        total_weight += weight
        if attack_id in mapped_ids:
            covered_weight += weight
            covered.append(entry)
        else:
            missing.append(entry)
    order = lambda e: (-e.weight, e.attack_id)  # noqa: E731
    covered.sort(key=order)
    missing.sort(key=order)
    score = covered_weight / total_weight if total_weight > 0 else 0.0
    return score, covered, missing


def missing_high_priority(
    weights: TechniqueWeights, missing: list[CoverageEntry]
) -> list[CoverageEntry]:
    """Missing techniques at or above the 75th-percentile weight (nearest rank)."""
    if not missing or not weights.weights:
        return []
    ordered = sorted(weights.weights.values())
    rank = math.ceil(HIGH_PRIORITY_PERCENTILE * len(ordered))  # 1-based nearest rank
    threshold = ordered[rank - 1]
    return [e for e in missing if e.weight >= threshold]


def trs(
    mapping: MappingResult,
    weights: TechniqueWeights,
    links: Mapping[str, list[CveLink]],
    creation_year: int,
    cfg: TemporalConfig,
) -> float:
    """Dataset decay times the weight-averaged technique relevance.

    Runs over the distinct top-mapped techniques; techniques absent from the
    weight map count at 0.1.
    """
    technique_ids = sorted(mapping.top_technique_ids())
    if not technique_ids:
        return 0.0
    phi_d = dataset_decay(creation_year, cfg)
    weighted_sum = 0.0
    weight_sum = 0.0
    for tid in technique_ids:
        weight = weights.weights.get(tid, 0.1)
        rho = technique_relevance(links.get(tid, []), cfg)
        weighted_sum += weight * rho
        weight_sum += weight
    return min(1.0, phi_d * weighted_sum / weight_sum)


def _weighted_rubric_score(
    sheet: RubricSheet, row: RubricWeightRow, expected_rubric: str
) -> float:
    if sheet.rubric_id != expected_rubric or row.rubric_id != expected_rubric:
        raise DomainError(
            f"expected {expected_rubric} inputs, got sheet={sheet.rubric_id} "
            f"weights={row.rubric_id}"
        )
    if set(sheet.scores) != set(row.weights):
        raise SchemaError(
            f"criterion sets differ between sheet and weights for "
            f"{sheet.dataset_name} ({expected_rubric})"
        )
    weight_sum = sum(row.weights.values())
    score_sum = sum(sheet.scores[cid] * row.weights[cid] for cid in sheet.scores)
    # clamp against float rounding so downstream range checks hold
    return min(1.0, max(0.0, score_sum / (MAX_SCORE * weight_sum)))


def ters(sheet: RubricSheet, row: RubricWeightRow) -> float:
    """Technical-environment relevance: weighted rubric mean in [0, 1]."""
    return _weighted_rubric_score(sheet, row, "TeRS")


def ecs(sheet: RubricSheet, row: RubricWeightRow) -> float:
    """Ethical compliance: weighted rubric mean in [0, 1]."""
    return _weighted_rubric_score(sheet, row, "ECS")


def dqs(sheet: RubricSheet) -> float:
    """Data quality: unweighted rubric mean in [0, 1]."""
    if sheet.rubric_id != "DQS":
        raise DomainError(f"expected a DQS sheet, got {sheet.rubric_id}")
    if not sheet.scores:
        raise DomainError("DQS sheet has no criteria")
    return sum(sheet.scores.values()) / (len(sheet.scores) * MAX_SCORE)


def combined(
    ars: float, trs_value: float, ters_value: float, ecs_value: float, dqs_value: float
) -> float:
    """Arithmetic mean of the five metrics."""
    values = (ars, trs_value, ters_value, ecs_value, dqs_value)
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"metric value {v} outside [0, 1]")
    return math.fsum(values) / 5.0
