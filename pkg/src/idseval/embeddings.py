"""Embedding storage, cosine similarity and attack-to-technique mapping.

Vectors are produced externally (any sentence encoder) and supplied as
files; the engine never encodes text itself. Candidate sets are a few
hundred techniques, so mapping is an exhaustive similarity scan. The
vector file starts with a one-line JSON header naming the layout
("text" or "binary"), the dimension, the encoder tag and the context
template version.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .attack_kb import Technique
from .dataset import AttackContext
from .errors import DomainError, MissingKeyError, SchemaError
from .industry import TechniqueWeights

SIMILARITY_TIE_TOLERANCE = 1e-9
DEFAULT_THETA_SIM = 0.30


def context_key(dataset_name: str, label: str) -> str:
    return f"ctx:{dataset_name}/{label}"


def technique_key(attack_id: str) -> str:
    return f"tech:{attack_id}"


def technique_text(technique: Technique) -> str:
    """Text embedded for a technique: id, name and description concatenated."""
    return f"{technique.attack_id} {technique.name} {technique.description}".strip()


@dataclass(frozen=True)
class EmbeddingVector:
    key: str
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise DomainError(f"vector {self.key!r} is empty")
        if not any(self.values):
            raise DomainError(f"vector {self.key!r} has no nonzero component")

    @property
    def dimension(self) -> int:
        return len(self.values)


@dataclass
class EmbeddingStore:
    dimension: int
    encoder_tag: str
    template_version: str = ""
    vectors: dict[str, EmbeddingVector] = None

    def __post_init__(self):
        if self.vectors is None:
            self.vectors = {}
        for vec in self.vectors.values():
            self._check(vec)

    def _check(self, vector: EmbeddingVector) -> None:
        if vector.dimension != self.dimension:
            raise SchemaError(
                f"vector {vector.key!r} has dimension {vector.dimension}, "
                f"store expects {self.dimension}"
            )

    def add(self, vector: EmbeddingVector) -> None:
        self._check(vector)
        self.vectors[vector.key] = vector

    def __contains__(self, key: str) -> bool:
        return key in self.vectors

    def __getitem__(self, key: str) -> EmbeddingVector:
        return self.vectors[key]


def cosine_similarity(u: EmbeddingVector, v: EmbeddingVector) -> float:
    """dot(u, v) / (|u|·|v|), clamped to [-1, 1] against rounding."""
    if u.dimension != v.dimension:
        raise DomainError(
            f"dimension mismatch: {u.key!r} is {u.dimension}, {v.key!r} is {v.dimension}"
        )
    dot = math.fsum(a * b for a, b in zip(u.values, v.values))
    norm_u = math.sqrt(math.fsum(a * a for a in u.values))
    norm_v = math.sqrt(math.fsum(b * b for b in v.values))
    if norm_u == 0.0 or norm_v == 0.0:
        raise DomainError("cosine similarity undefined for zero vectors")
    return max(-1.0, min(1.0, dot / (norm_u * norm_v)))


@dataclass(frozen=True)
class LabelMapping:
    matches: tuple[tuple[str, float], ...]  # (attack_id, similarity), similarity desc
    top: tuple[str, float] | None

    @property
    def unmapped(self) -> bool:
        return not self.matches


@dataclass(frozen=True)
class MappingResult:
    per_label: dict[str, LabelMapping]
    theta_sim: float
    industry_name: str

    def top_technique_ids(self) -> set[str]:
        return {m.top[0] for m in self.per_label.values() if m.top is not None}

    def matched_technique_ids(self) -> set[str]:
        return {tid for m in self.per_label.values() for tid, _ in m.matches}


def map_attacks(
    contexts: Iterable[AttackContext],
    techniques: Mapping[str, Technique],
    store: EmbeddingStore,
    theta_sim: float,
    weights: TechniqueWeights,
    dataset_name: str,
) -> MappingResult:
    """Map each attack context to techniques with similarity >= theta_sim.

    The top match is the highest-similarity technique; ties within
    ``SIMILARITY_TIE_TOLERANCE`` go to the larger industry weight, then to
    the ascending attack id. Raises :class:`MissingKeyError` listing every
    absent vector key.
    """
    contexts = list(contexts)
    wanted = [context_key(dataset_name, c.label) for c in contexts]
    wanted += [technique_key(t) for t in sorted(techniques)]
    missing = [k for k in wanted if k not in store]
    if missing:
        raise MissingKeyError(missing)

    per_label: dict[str, LabelMapping] = {}
    for ctx in sorted(contexts, key=lambda c: c.label):
        ctx_vec = store[context_key(dataset_name, ctx.label)]
        sims = [
            (tid, cosine_similarity(ctx_vec, store[technique_key(tid)]))
            for tid in sorted(techniques)
        ]
        matches = sorted(
            ((tid, s) for tid, s in sims if s >= theta_sim),
            key=lambda item: (-item[1], item[0]),
        )
        top = None
        if matches:
            best_sim = matches[0][1]
            tied = [
                (tid, s)
                for tid, s in matches
                if best_sim - s <= SIMILARITY_TIE_TOLERANCE
            ]
            tid, sim = min(
                tied, key=lambda item: (-weights.weights.get(item[0], 0.0), item[0])
            )
            top = (tid, sim)
        per_label[ctx.label] = LabelMapping(matches=tuple(matches), top=top)
    return MappingResult(
        per_label=per_label, theta_sim=theta_sim, industry_name=weights.industry_name
    )


# ---------------------------------------------------------------------------
# Vector file I/O
#
# Header line: JSON object {"layout", "dimension", "encoder_tag",
# "template_version"}. Text layout: one record per line, key TAB
# space-separated reals. Binary layout: per record a little-endian uint32
# key byte length, the UTF-8 key, then `dimension` little-endian float32s.
# ---------------------------------------------------------------------------


def write_vector_file(path: str | Path, store: EmbeddingStore, layout: str = "text") -> None:
    if layout not in ("text", "binary"):
        raise SchemaError(f"unknown vector file layout {layout!r}")
    header = json.dumps(
        {
            "layout": layout,
            "dimension": store.dimension,
            "encoder_tag": store.encoder_tag,
            "template_version": store.template_version,
        },
        sort_keys=True,
    )
    keys = sorted(store.vectors)
    if layout == "text":
        lines = [header]
        for key in keys:
            values = " ".join(repr(v) for v in store.vectors[key].values)
            lines.append(f"{key}\t{values}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        with open(path, "wb") as handle:
            handle.write(header.encode("utf-8") + b"\n")
            for key in keys:
                raw_key = key.encode("utf-8")
                handle.write(struct.pack("<I", len(raw_key)))
                handle.write(raw_key)
                vec = store.vectors[key]
                handle.write(struct.pack(f"<{vec.dimension}f", *vec.values))


def load_vector_file(path: str | Path) -> EmbeddingStore:
    path = Path(path)
    with open(path, "rb") as handle:
        header_line = handle.readline()
        try:
            header = json.loads(header_line.decode("utf-8"))
            layout = header["layout"]
            dimension = int(header["dimension"])
            encoder_tag = header["encoder_tag"]
        except (ValueError, KeyError, UnicodeDecodeError) as exc:
            raise SchemaError(f"bad vector file header in {path}: {exc}") from exc
        store = EmbeddingStore(
            dimension=dimension,
            encoder_tag=encoder_tag,
            template_version=header.get("template_version", ""),
        )
        if layout == "text":
            for lineno, raw in enumerate(handle.read().decode("utf-8").splitlines(), 2):
                if not raw.strip():
                    continue
                try:
                    key, values = raw.split("\t", 1)
                    vector = EmbeddingVector(
                        key=key, values=tuple(float(v) for v in values.split())
                    )
                except (ValueError, DomainError) as exc:
                    raise SchemaError(f"{path}:{lineno}: bad vector record: {exc}") from exc
                store.add(vector)
        elif layout == "binary":
            while True:
                prefix = handle.read(4)
                if not prefix:
                    break
                if len(prefix) < 4:
                    raise SchemaError(f"truncated record header in {path}")
                (key_len,) = struct.unpack("<I", prefix)
                key = handle.read(key_len).decode("utf-8")
                payload = handle.read(4 * dimension)
                if len(payload) < 4 * dimension:
                    raise SchemaError(f"truncated vector payload for {key!r} in {path}")
                store.add(
                    EmbeddingVector(
                        key=key, values=tuple(struct.unpack(f"<{dimension}f", payload))
                    )
                )
        else:
            raise SchemaError(f"unknown vector file layout {layout!r} in {path}")
    return store


# ---------------------------------------------------------------------------
# Context file I/O (engine -> external encoder handoff)
#
# JSON lines: a header object {"template_version", "dataset"} followed by
# one {"key", "text"} record per context and technique.
# ---------------------------------------------------------------------------


def write_context_file(
    path: str | Path,
    records: Iterable[tuple[str, str]],
    template_version: str,
    dataset_name: str,
) -> None:
    lines = [
        json.dumps(
            {"template_version": template_version, "dataset": dataset_name},
            sort_keys=True,
        )
    ]
    lines.extend(
        json.dumps({"key": key, "text": text}, sort_keys=True) for key, text in records
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_context_file(path: str | Path) -> tuple[dict, list[tuple[str, str]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SchemaError(f"context file {path} is empty")
    header = json.loads(lines[0])
    if "template_version" not in header:
        raise SchemaError(f"context file {path} lacks a template_version header")
    records = []
    for raw in lines[1:]:
        if not raw.strip():
            continue
        rec = json.loads(raw)
        records.append((rec["key"], rec["text"]))
    return header, records
