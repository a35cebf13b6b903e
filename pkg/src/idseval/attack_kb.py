"""Parse an ATT&CK enterprise STIX 2.x bundle into an immutable knowledge base.

Only three object kinds matter here: attack-patterns (techniques),
intrusion-sets (threat groups) and "uses" relationships between them.
Everything else in the bundle (tactics, mitigations, malware, metadata)
is ignored but tallied so audits can account for every object.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field

from .errors import BundleParseError, IngestError

logger = logging.getLogger(__name__)

ATTACK_ID_RE = re.compile(r"^T\d{4}(\.\d{3})?$")

# source_name values that designate the ATT&CK corpus in external references
ATTACK_SOURCE_NAMES = frozenset({"mitre-attack"})


@dataclass(frozen=True)
class Technique:
    attack_id: str
    name: str
    description: str
    is_subtechnique: bool
    revoked: bool = False
    deprecated: bool = False

    def __post_init__(self):
        if not ATTACK_ID_RE.match(self.attack_id):
            raise IngestError(f"invalid technique identifier: {self.attack_id!r}")
        if ("." in self.attack_id) != self.is_subtechnique:
            raise IngestError(
                f"sub-technique flag inconsistent with identifier {self.attack_id!r}"
            )
        if not self.name:
            raise IngestError(f"technique {self.attack_id} has an empty name")

    @property
    def active(self) -> bool:
        return not (self.revoked or self.deprecated)


@dataclass(frozen=True)
class ThreatGroup:
    group_id: str
    name: str
    description: str
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class UsageEdge:
    source_group: str
    target_technique: str


@dataclass(frozen=True)
class KnowledgeBase:
    techniques: dict[str, Technique]
    groups: dict[str, ThreatGroup]
    edges: tuple[UsageEdge, ...]
    source_digest: str
    skip_tally: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for edge in self.edges:
            if edge.source_group not in self.groups:
                raise IngestError(f"edge references unknown group {edge.source_group!r}")
            if edge.target_technique not in self.techniques:
                raise IngestError(
                    f"edge references unknown technique {edge.target_technique!r}"
                )


def _attack_external_id(obj: dict) -> str | None:
    refs = [
        r
        for r in obj.get("external_references", [])
        if r.get("source_name") in ATTACK_SOURCE_NAMES and r.get("external_id")
    ]
    if not refs:
        return None
    if len(refs) > 1:
        logger.warning(
            "object %s carries %d ATT&CK reference blocks; using the first",
            obj.get("id", "<unknown>"),
            len(refs),
        )
    return refs[0]["external_id"]


def parse_bundle(raw: bytes) -> KnowledgeBase:
    """Build a :class:`KnowledgeBase` from raw STIX 2.x bundle bytes.

    Raises :class:`BundleParseError` for malformed documents (with byte
    offset) and :class:`IngestError` for duplicate technique identifiers.
    """
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BundleParseError(
            f"malformed bundle document at byte offset {exc.pos}: {exc.msg}",
            offset=exc.pos,
        ) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("objects", []), list):
        raise BundleParseError("bundle document is not a STIX object container")

    techniques: dict[str, Technique] = {}
    groups: dict[str, ThreatGroup] = {}
    stix_to_attack: dict[str, str] = {}
    relationships: list[dict] = []
    tally: dict[str, int] = {}

    def skip(reason: str) -> None:
        tally[reason] = tally.get(reason, 0) + 1

    for obj in doc.get("objects", []):
        kind = obj.get("type")
        if kind == "attack-pattern":
            attack_id = _attack_external_id(obj)
            if attack_id is None or not ATTACK_ID_RE.match(attack_id):
                skip("attack-pattern-without-attack-id")
                continue
            if attack_id in techniques:
                raise IngestError(f"duplicate technique identifier {attack_id!r}")
            techniques[attack_id] = Technique(
                attack_id=attack_id,
                name=obj.get("name", ""),
                description=obj.get("description", ""),
                is_subtechnique="." in attack_id,
                revoked=bool(obj.get("revoked", False)),
                deprecated=bool(obj.get("x_mitre_deprecated", False)),
            )
            stix_to_attack[obj.get("id", "")] = attack_id
        elif kind == "intrusion-set":
            group_id = obj.get("id", "")
            groups[group_id] = ThreatGroup(
                group_id=group_id,
                name=obj.get("name", ""),
                description=obj.get("description", ""),
                aliases=tuple(obj.get("aliases", [])),
            )
        elif kind == "relationship":
            relationships.append(obj)
        else:
            skip(f"ignored-object:{kind}")

    edges: list[UsageEdge] = []
    for rel in relationships:
        source = rel.get("source_ref", "")
        target = rel.get("target_ref", "")
        if (
            rel.get("relationship_type") == "uses"
            and source in groups
            and target in stix_to_attack
        ):
            edges.append(UsageEdge(source_group=source, target_technique=stix_to_attack[target]))
        else:
            skip("ignored-relationship")

    return KnowledgeBase(
        techniques=techniques,
        groups=groups,
        edges=tuple(edges),
        source_digest=hashlib.sha256(raw).hexdigest(),
        skip_tally=tally,
    )


def active_techniques(kb: KnowledgeBase, include_subtechniques: bool = False) -> set[str]:
    """Identifiers of non-revoked, non-deprecated techniques.

    Sub-techniques are excluded unless ``include_subtechniques`` is set.
    """
    return {
        t.attack_id
        for t in kb.techniques.values()
        if t.active and (include_subtechniques or not t.is_subtechnique)
    }
