"""Industry-specific suitability scoring for network IDS/IPS datasets."""

from .attack_kb import KnowledgeBase, Technique, ThreatGroup, active_techniques, parse_bundle
from .dataset import (
    DatasetDescriptor,
    DatasetProfile,
    generate_attack_context,
    load_descriptor,
    profile_dataset,
    read_rows,
)
from .embeddings import (
    EmbeddingStore,
    EmbeddingVector,
    MappingResult,
    cosine_similarity,
    load_vector_file,
    map_attacks,
    read_context_file,
    write_context_file,
    write_vector_file,
)
from .errors import (
    BundleParseError,
    ConfigError,
    DomainError,
    IdsEvalError,
    IngestError,
    MissingKeyError,
    ProfilingError,
    SchemaError,
    UnknownLabelError,
)
from .industry import (
    IndustryProfile,
    TechniqueWeights,
    derive_industry_weights,
    derive_weights,
    load_profiles,
    match_relevant_groups,
)
from .pipeline import RunConfig, load_config, run_score
from .report import MetricReport, Provenance, render_table, round3
from .rubrics import RubricDefinition, RubricSheet, RubricWeightRow, load_definition, load_sheet, load_weight_matrix
from .scoring import ars_coverage, ars_frequency, combined, dqs, ecs, missing_high_priority, ters, trs
from .temporal import CveLink, TemporalConfig, dataset_decay, decay, load_cve_links, technique_relevance, weighted_cve_age

__version__ = "0.1.0"

__all__ = [
    "KnowledgeBase",
    "Technique",
    "ThreatGroup",
    "active_techniques",
    "parse_bundle",
    "DatasetDescriptor",
    "DatasetProfile",
    "generate_attack_context",
    "load_descriptor",
    "profile_dataset",
    "read_rows",
    "EmbeddingStore",
    "EmbeddingVector",
    "MappingResult",
    "cosine_similarity",
    "load_vector_file",
    "map_attacks",
    "read_context_file",
    "write_context_file",
    "write_vector_file",
    "BundleParseError",
    "ConfigError",
    "DomainError",
    "IdsEvalError",
    "IngestError",
    "MissingKeyError",
    "ProfilingError",
    "SchemaError",
    "UnknownLabelError",
    "IndustryProfile",
    "TechniqueWeights",
    "derive_industry_weights",
    "derive_weights",
    "load_profiles",
    "match_relevant_groups",
    "RunConfig",
    "load_config",
    "run_score",
    "MetricReport",
    "Provenance",
    "render_table",
    "round3",
    "RubricDefinition",
    "RubricSheet",
    "RubricWeightRow",
    "load_definition",
    "load_sheet",
    "load_weight_matrix",
    "ars_coverage",
    "ars_frequency",
    "combined",
    "dqs",
    "ecs",
    "missing_high_priority",
    "ters",
    "trs",
    "CveLink",
    "TemporalConfig",
    "dataset_decay",
    "decay",
    "load_cve_links",
    "technique_relevance",
    "weighted_cve_age",
]
