"""Industry keyword profiles and technique weight derivation.

A threat group is industry-relevant when any profile keyword matches its
name, description or an alias as a whole word (token-boundary match, not
raw substring, so 'POS' never matches "purpose"). Usage counts of active
techniques by relevant groups are floored at 1/|active| and normalized so
the maximum weight is exactly 1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .attack_kb import KnowledgeBase, active_techniques
from .errors import DomainError, SchemaError


@dataclass(frozen=True)
class IndustryProfile:
    industry_name: str
    keywords: tuple[str, ...]

    def __post_init__(self):
        keywords = tuple(k.strip() for k in self.keywords)
        if not keywords or any(not k for k in keywords):
            raise SchemaError(
                f"industry profile {self.industry_name!r} needs non-empty keywords"
            )
        object.__setattr__(self, "keywords", keywords)


@dataclass(frozen=True)
class TechniqueWeights:
    industry_name: str
    weights: dict[str, float]
    usage_counts: dict[str, int]
    relevant_groups: frozenset[str]
    min_weight: float
    kb_digest: str


def _keyword_pattern(keyword: str) -> re.Pattern:
    # multi-word keywords match as contiguous token sequences
    tokens = re.findall(r"\w+", keyword)
    body = r"\W+".join(re.escape(t) for t in tokens)
    return re.compile(rf"(?<!\w){body}(?!\w)", re.IGNORECASE | re.UNICODE)


def match_relevant_groups(kb: KnowledgeBase, profile: IndustryProfile) -> set[str]:
    """Group ids whose name, description or aliases match any profile keyword."""
    patterns = [_keyword_pattern(k) for k in profile.keywords]
    relevant = set()
    for group in kb.groups.values():
        texts = [group.name, group.description, *group.aliases]
        if any(p.search(t) for p in patterns for t in texts if t):
            relevant.add(group.group_id)
    return relevant


def derive_weights(
    kb: KnowledgeBase,
    relevant: set[str],
    active: set[str],
    industry_name: str = "",
) -> TechniqueWeights:
    """Normalized per-technique weights from relevant-group usage counts.

    raw_weight[t] = max(count[t]/total_uses, 1/|active|), then divided by the
    maximum raw weight. With zero total uses every weight degenerates to 1.
    """
    if not active:
        raise DomainError("active technique set is empty")
    counts = {t: 0 for t in sorted(active)}
    for edge in kb.edges:
        if edge.source_group in relevant and edge.target_technique in counts:
            counts[edge.target_technique] += 1
    total_uses = sum(counts.values())
    min_weight = 1.0 / len(active)
    if total_uses > 0:
        raw = {t: max(c / total_uses, min_weight) for t, c in counts.items()}
    else:
        raw = {t: min_weight for t in counts}
    max_raw = max(raw.values())
    weights = {t: w / max_raw for t, w in raw.items()}
    return TechniqueWeights(
        industry_name=industry_name,
        weights=weights,
        usage_counts=counts,
        relevant_groups=frozenset(relevant),
        min_weight=min_weight,
        kb_digest=kb.source_digest,
    )


def derive_industry_weights(
    kb: KnowledgeBase, profile: IndustryProfile, include_subtechniques: bool = False
) -> TechniqueWeights:
    relevant = match_relevant_groups(kb, profile)
    active = active_techniques(kb, include_subtechniques)
    return derive_weights(kb, relevant, active, industry_name=profile.industry_name)


def load_profiles(path: str | Path | None = None) -> list[IndustryProfile]:
    """Load industry profiles from a JSON file, or the bundled defaults."""
    if path is None:
        text = resources.files("idseval.data").joinpath("industries.json").read_text()
    else:
        text = Path(path).read_text()
    records = json.loads(text)
    if not isinstance(records, list):
        raise SchemaError("industry profile file must contain a list of records")
    profiles = []
    for rec in records:
        try:
            profiles.append(
                IndustryProfile(
                    industry_name=rec["industry_name"], keywords=tuple(rec["keywords"])
                )
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad industry profile record: {rec!r}") from exc
    return profiles


def weights_export(tw: TechniqueWeights, kb: KnowledgeBase) -> dict:
    """Serializable weight export: one row per active technique."""
    rows = [
        {
            "attack_id": t,
            "technique_name": kb.techniques[t].name,
            "usage_count": tw.usage_counts[t],
            "weight": w,
        }
        for t, w in sorted(tw.weights.items())
    ]
    return {
        "industry_name": tw.industry_name,
        "kb_digest": tw.kb_digest,
        "relevant_groups": sorted(tw.relevant_groups),
        "min_weight": tw.min_weight,
        "rows": rows,
    }
