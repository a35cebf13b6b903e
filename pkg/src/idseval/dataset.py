"""Dataset profiling and attack-context generation.

Profiles one tabular IDS dataset: attack-label frequencies (normal rows
excluded from the frequency base), per-label feature means with their
relative difference from normal traffic, and protocol/service annotations.
Contexts are deterministic natural-language renderings of those deviations,
suitable for sentence encoding.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import ProfilingError, SchemaError, UnknownLabelError

EPSILON = 1e-9

# bump when the context wording changes so stale vectors can be detected
TEMPLATE_VERSION = "1.0"

DEFAULT_TOP_K_FEATURES = 5
HIGH_DEVIATION = 1.0
MODERATE_DEVIATION = 0.3


@dataclass(frozen=True)
class DatasetDescriptor:
    dataset_name: str
    creation_year: int
    label_column: str
    normal_label: str
    protocol_column: str | None = None
    service_column: str | None = None
    feature_columns: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.label_column:
            raise SchemaError("label_column must be non-empty")
        if self.creation_year < 1990:
            raise SchemaError(f"implausible creation_year {self.creation_year}")


def load_descriptor(path: str | Path) -> DatasetDescriptor:
    rec = json.loads(Path(path).read_text())
    try:
        return DatasetDescriptor(
            dataset_name=rec["dataset_name"],
            creation_year=int(rec["creation_year"]),
            label_column=rec["label_column"],
            normal_label=rec["normal_label"],
            protocol_column=rec.get("protocol_column"),
            service_column=rec.get("service_column"),
            feature_columns=tuple(rec.get("feature_columns", [])),
        )
    except KeyError as exc:
        raise SchemaError(f"descriptor {path} missing field {exc}") from exc


class FeatureStat(NamedTuple):
    mean: float
    relative_difference: float


@dataclass(frozen=True)
class DatasetProfile:
    dataset_name: str
    labels: tuple[str, ...]
    frequencies: dict[str, float]
    per_label_stats: dict[str, dict[str, FeatureStat]]
    normal_stats: dict[str, float]
    protocols: dict[str, tuple[str, ...]]
    services: dict[str, tuple[str, ...]]
    row_count: int
    skipped_cells: int = 0


@dataclass(frozen=True)
class AttackContext:
    label: str
    context_text: str
    deviation_levels: dict[str, str] = field(default_factory=dict)


class _Running:
    __slots__ = ("total", "count")

    def __init__(self):
        self.total = 0.0
        self.count = 0

    def add(self, value: float) -> None:
        self.total += value
        self.count += 1

    @property
    def mean(self) -> float:
        return self.total / self.count


def profile_dataset(
    rows: Iterable[Mapping[str, str]], desc: DatasetDescriptor
) -> DatasetProfile:
    """Single-pass profile of a record stream. Row order never matters."""
    label_counts: dict[str, int] = {}
    stats: dict[str, dict[str, _Running]] = {}  # label (incl. normal) -> feature -> sums
    protocols: dict[str, set[str]] = {}
    services: dict[str, set[str]] = {}
    skipped_cells = 0
    row_count = 0
    feature_columns: list[str] | None = list(desc.feature_columns) or None

    for row in rows:
        row_count += 1
        if desc.label_column not in row:
            raise SchemaError(
                f"row {row_count} of {desc.dataset_name} lacks label column "
                f"{desc.label_column!r}"
            )
        label = row[desc.label_column]
        if feature_columns is None:
            reserved = {desc.label_column, desc.protocol_column, desc.service_column}
            feature_columns = [c for c in row.keys() if c not in reserved]
        label_counts[label] = label_counts.get(label, 0) + 1
        per_feature = stats.setdefault(label, {})
        for col in feature_columns:
            cell = row.get(col)
            if cell is None or cell == "":
                skipped_cells += 1
                continue
            try:
                value = float(cell)
            except ValueError:
                skipped_cells += 1
                continue
            per_feature.setdefault(col, _Running()).add(value)
        if label != desc.normal_label:
            if desc.protocol_column and row.get(desc.protocol_column):
                protocols.setdefault(label, set()).add(row[desc.protocol_column])
            if desc.service_column and row.get(desc.service_column):
                services.setdefault(label, set()).add(row[desc.service_column])

    attack_counts = {
        label: n for label, n in label_counts.items() if label != desc.normal_label
    }
    total_attacks = sum(attack_counts.values())
    if total_attacks == 0:
        raise ProfilingError(f"dataset {desc.dataset_name!r} contains no attack rows")

    normal_stats = {
        col: acc.mean for col, acc in stats.get(desc.normal_label, {}).items()
    }
    per_label_stats: dict[str, dict[str, FeatureStat]] = {}
    for label in attack_counts:
        feature_stats = {}
        for col, acc in stats.get(label, {}).items():
            if col not in normal_stats:
                continue  # no normal baseline, deviation undefined
            normal_mean = normal_stats[col]
            rel = abs(acc.mean - normal_mean) / (abs(normal_mean) + EPSILON)
            feature_stats[col] = FeatureStat(mean=acc.mean, relative_difference=rel)
        per_label_stats[label] = feature_stats

    return DatasetProfile(
        dataset_name=desc.dataset_name,
        labels=tuple(sorted(attack_counts)),
        frequencies={a: n / total_attacks for a, n in sorted(attack_counts.items())},
        per_label_stats=per_label_stats,
        normal_stats=normal_stats,
        protocols={a: tuple(sorted(v)) for a, v in protocols.items()},
        services={a: tuple(sorted(v)) for a, v in services.items()},
        row_count=row_count,
        skipped_cells=skipped_cells,
    )


def read_rows(path: str | Path, delimiter: str = ",") -> Iterable[dict[str, str]]:
    """Stream rows from a delimited text file with a header row."""
    with open(path, newline="", encoding="utf-8") as handle:
        yield from csv.DictReader(handle, delimiter=delimiter)


def deviation_level(
    relative_difference: float,
    high: float = HIGH_DEVIATION,
    moderate: float = MODERATE_DEVIATION,
) -> str:
    if relative_difference >= high:
        return "high"
    if relative_difference >= moderate:
        return "moderate"
    return "low"


def generate_attack_context(
    profile: DatasetProfile,
    label: str,
    top_k_features: int = DEFAULT_TOP_K_FEATURES,
    high_threshold: float = HIGH_DEVIATION,
    moderate_threshold: float = MODERATE_DEVIATION,
) -> AttackContext:
    """Deterministic textual context for one attack label.

    Uses the ``top_k_features`` largest relative differences (ties broken by
    feature name ascending); empty protocol/service lists render as
    "unspecified".
    """
    if label not in profile.labels:
        raise UnknownLabelError(
            f"label {label!r} not present in dataset {profile.dataset_name!r}"
        )
    feature_stats = profile.per_label_stats.get(label, {})
    levels = {
        col: deviation_level(stat.relative_difference, high_threshold, moderate_threshold)
        for col, stat in feature_stats.items()
    }
    ranked = sorted(
        feature_stats.items(), key=lambda item: (-item[1].relative_difference, item[0])
    )[:top_k_features]
    protocols = ", ".join(profile.protocols.get(label, ())) or "unspecified"
    services = ", ".join(profile.services.get(label, ())) or "unspecified"
    parts = [
        f"Network attack {label} observed over protocols {protocols} "
        f"targeting services {services}."
    ]
    parts.extend(
        f"{col} shows {levels[col]} deviation from normal traffic." for col, _ in ranked
    )
    return AttackContext(label=label, context_text=" ".join(parts), deviation_levels=levels)
