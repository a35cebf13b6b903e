"""Run configuration and (dataset, industry) evaluation jobs.

Everything an evaluation needs flows through a config file (no environment
variables, no wall clock) so reruns on identical inputs are byte-identical.
Relative paths in the config resolve against the config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from . import attack_kb, embeddings, industry, rubrics, scoring, temporal
from .dataset import (
    DEFAULT_TOP_K_FEATURES,
    TEMPLATE_VERSION,
    DatasetDescriptor,
    generate_attack_context,
    load_descriptor,
    profile_dataset,
    read_rows,
)
from .errors import ConfigError
from .report import MetricReport, Provenance


@dataclass(frozen=True)
class DatasetEntry:
    data: Path
    descriptor: Path


@dataclass(frozen=True)
class RunConfig:
    bundle_path: Path
    datasets: tuple[DatasetEntry, ...]
    vectors_path: Path
    rubric_sheets: dict[str, dict[str, Path]]  # dataset -> rubric id (lower) -> path
    as_of: date
    profiles_path: Path | None = None
    cve_links_path: Path | None = None
    ters_weights_path: Path | None = None
    ecs_weights_path: Path | None = None
    industries: tuple[str, ...] = ()
    theta_sim: float = embeddings.DEFAULT_THETA_SIM
    decay_lambda: float = temporal.DEFAULT_LAMBDA
    default_rho: float = temporal.DEFAULT_RHO
    fallback_weight: float = scoring.DEFAULT_FALLBACK_WEIGHT
    include_subtechniques: bool = False
    top_k_features: int = DEFAULT_TOP_K_FEATURES
    delimiter: str = ","


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    base = path.parent

    def resolve(value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else base / p

    def required_path(key: str) -> Path:
        if key not in doc:
            raise ConfigError(f"config {path} lacks required key {key!r}")
        resolved = resolve(doc[key])
        if not resolved.exists():
            raise ConfigError(f"config {path}: {key} path does not exist: {resolved}")
        return resolved

    def optional_path(key: str) -> Path | None:
        if key not in doc or doc[key] is None:
            return None
        resolved = resolve(doc[key])
        if not resolved.exists():
            raise ConfigError(f"config {path}: {key} path does not exist: {resolved}")
        return resolved

    datasets = []
    for entry in doc.get("datasets", []):
        try:
            data = resolve(entry["data"])
            descriptor = resolve(entry["descriptor"])
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad dataset entry {entry!r} in {path}") from exc
        for p in (data, descriptor):
            if not p.exists():
                raise ConfigError(f"config {path}: dataset path does not exist: {p}")
        datasets.append(DatasetEntry(data=data, descriptor=descriptor))
    if not datasets:
        raise ConfigError(f"config {path} declares no datasets")

    sheets: dict[str, dict[str, Path]] = {}
    for dataset_name, per_rubric in doc.get("rubric_sheets", {}).items():
        sheets[dataset_name] = {}
        for rubric_key, sheet_path in per_rubric.items():
            resolved = resolve(sheet_path)
            if not resolved.exists():
                raise ConfigError(
                    f"config {path}: rubric sheet does not exist: {resolved}"
                )
            sheets[dataset_name][rubric_key.lower()] = resolved

    if "as_of" not in doc:
        raise ConfigError(f"config {path} must pin an as_of date")
    try:
        as_of = date.fromisoformat(doc["as_of"])
    except ValueError as exc:
        raise ConfigError(f"config {path}: bad as_of date {doc['as_of']!r}") from exc

    return RunConfig(
        bundle_path=required_path("bundle"),
        datasets=tuple(datasets),
        vectors_path=required_path("vectors"),
        rubric_sheets=sheets,
        profiles_path=optional_path("profiles"),
        cve_links_path=optional_path("cve_links"),
        ters_weights_path=optional_path("ters_weights"),
        ecs_weights_path=optional_path("ecs_weights"),
        industries=tuple(doc.get("industries", [])),
        theta_sim=float(doc.get("theta_sim", embeddings.DEFAULT_THETA_SIM)),
        decay_lambda=float(doc.get("lambda", temporal.DEFAULT_LAMBDA)),
        as_of=as_of,
        default_rho=float(doc.get("default_rho", temporal.DEFAULT_RHO)),
        fallback_weight=float(doc.get("fallback_weight", scoring.DEFAULT_FALLBACK_WEIGHT)),
        include_subtechniques=bool(doc.get("include_subtechniques", False)),
        top_k_features=int(doc.get("top_k_features", DEFAULT_TOP_K_FEATURES)),
        delimiter=doc.get("delimiter", ","),
    )


def context_records(
    kb: attack_kb.KnowledgeBase,
    desc: DatasetDescriptor,
    profile,
    top_k_features: int,
    include_subtechniques: bool,
) -> list[tuple[str, str]]:
    """All (key, text) records one dataset contributes to the encoder handoff."""
    records = []
    for label in profile.labels:
        ctx = generate_attack_context(profile, label, top_k_features)
        records.append(
            (embeddings.context_key(desc.dataset_name, label), ctx.context_text)
        )
    for attack_id in sorted(attack_kb.active_techniques(kb, include_subtechniques)):
        technique = kb.techniques[attack_id]
        records.append(
            (embeddings.technique_key(attack_id), embeddings.technique_text(technique))
        )
    return records


def run_score(config: RunConfig) -> list[MetricReport]:
    """Score every (dataset, industry) pair of the run."""
    kb = attack_kb.parse_bundle(config.bundle_path.read_bytes())
    profiles = industry.load_profiles(config.profiles_path)
    if config.industries:
        by_name = {p.industry_name: p for p in profiles}
        try:
            profiles = [by_name[name] for name in config.industries]
        except KeyError as exc:
            raise ConfigError(f"unknown industry {exc} in config") from exc

    store = embeddings.load_vector_file(config.vectors_path)
    links = (
        temporal.load_cve_links(config.cve_links_path)
        if config.cve_links_path
        else {}
    )
    temporal_cfg = temporal.TemporalConfig(
        as_of=config.as_of,
        decay_lambda=config.decay_lambda,
        default_rho=config.default_rho,
    )
    ters_def = rubrics.load_definition("TeRS")
    ecs_def = rubrics.load_definition("ECS")
    dqs_def = rubrics.load_definition("DQS")
    ters_weights = rubrics.load_weight_matrix("TeRS", config.ters_weights_path)
    ecs_weights = rubrics.load_weight_matrix("ECS", config.ecs_weights_path)

    industry_weights = {
        p.industry_name: industry.derive_industry_weights(
            kb, p, config.include_subtechniques
        )
        for p in profiles
    }
    technique_names = {t.attack_id: t.name for t in kb.techniques.values()}

    reports = []
    for entry in config.datasets:
        desc = load_descriptor(entry.descriptor)
        profile = profile_dataset(read_rows(entry.data, config.delimiter), desc)
        contexts = [
            generate_attack_context(profile, label, config.top_k_features)
            for label in profile.labels
        ]
        sheet_paths = config.rubric_sheets.get(desc.dataset_name)
        if not sheet_paths:
            raise ConfigError(f"no rubric sheets configured for {desc.dataset_name!r}")
        loaded_sheets = {}
        for rubric_key, definition in (("ters", ters_def), ("ecs", ecs_def), ("dqs", dqs_def)):
            if rubric_key not in sheet_paths:
                raise ConfigError(
                    f"missing {rubric_key} sheet for {desc.dataset_name!r}"
                )
            sheet = rubrics.load_sheet(sheet_paths[rubric_key])
            rubrics.check_criteria(sheet, definition)
            loaded_sheets[rubric_key] = sheet
        dqs_value = scoring.dqs(loaded_sheets["dqs"])

        for profile_def in profiles:
            name = profile_def.industry_name
            weights = industry_weights[name]
            mapping = embeddings.map_attacks(
                contexts,
                {t: kb.techniques[t] for t in weights.weights},
                store,
                config.theta_sim,
                weights,
                desc.dataset_name,
            )
            ars = scoring.ars_frequency(profile, mapping, weights, config.fallback_weight)
            coverage_score, covered, missing = scoring.ars_coverage(
                weights, mapping.matched_technique_ids(), technique_names
            )
            high_priority = scoring.missing_high_priority(weights, missing)
            trs_value = scoring.trs(mapping, weights, links, desc.creation_year, temporal_cfg)
            ters_value = scoring.ters(loaded_sheets["ters"], ters_weights[name])
            ecs_value = scoring.ecs(loaded_sheets["ecs"], ecs_weights[name])
            combined = scoring.combined(ars, trs_value, ters_value, ecs_value, dqs_value)
            reports.append(
                MetricReport(
                    dataset_name=desc.dataset_name,
                    industry_name=name,
                    ars=ars,
                    ars_coverage=coverage_score,
                    trs=trs_value,
                    ters=ters_value,
                    ecs=ecs_value,
                    dqs=dqs_value,
                    combined=combined,
                    covered=tuple(covered),
                    missing=tuple(missing),
                    missing_high_priority=tuple(high_priority),
                    provenance=Provenance(
                        kb_digest=kb.source_digest,
                        encoder_tag=store.encoder_tag,
                        theta_sim=config.theta_sim,
                        decay_lambda=config.decay_lambda,
                        as_of=config.as_of.isoformat(),
                        fallback_weight=config.fallback_weight,
                    ),
                )
            )
    return reports
