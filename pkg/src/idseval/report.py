"""Metric report assembly, serialization and rendering.

Reports carry full-precision scores in the structured form and a rounded
(3 decimals, half-up) aligned-text table. Files are written atomically
(write-then-rename) so concurrent score jobs never expose partial output.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .scoring import CoverageEntry


@dataclass(frozen=True)
class Provenance:
    kb_digest: str
    encoder_tag: str
    theta_sim: float
    decay_lambda: float
    as_of: str
    fallback_weight: float

    def to_dict(self) -> dict:
        return {
            "kb_digest": self.kb_digest,
            "encoder_tag": self.encoder_tag,
            "theta_sim": self.theta_sim,
            "lambda": self.decay_lambda,
            "as_of": self.as_of,
            "fallback_weight": self.fallback_weight,
        }


@dataclass(frozen=True)
class MetricReport:
    dataset_name: str
    industry_name: str
    ars: float
    ars_coverage: float
    trs: float
    ters: float
    ecs: float
    dqs: float
    combined: float
    covered: tuple[CoverageEntry, ...]
    missing: tuple[CoverageEntry, ...]
    missing_high_priority: tuple[CoverageEntry, ...]
    provenance: Provenance

    def to_dict(self) -> dict:
        def entries(items):
            return [
                {"attack_id": e.attack_id, "name": e.name, "weight": e.weight}
                for e in items
            ]

        return {
            "dataset_name": self.dataset_name,
            "industry_name": self.industry_name,
            "scores": {
                "ars": self.ars,
                "ars_coverage": self.ars_coverage,
                "trs": self.trs,
                "ters": self.ters,
                "ecs": self.ecs,
                "dqs": self.dqs,
                "combined": self.combined,
            },
            "coverage": {
                "covered": entries(self.covered),
                "missing": entries(self.missing),
                "missing_high_priority": entries(self.missing_high_priority),
            },
            "provenance": self.provenance.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def round3(value: float) -> str:
    """Three decimals, half-up, as the text table shows them."""
    return str(Decimal(repr(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def render_table(report: MetricReport) -> str:
    header = f"Dataset: {report.dataset_name}    Industry: {report.industry_name}"
    columns = ["ARS", "TRS", "TeRS", "ECS", "DQS", "Combined"]
    values = [
        round3(report.ars),
        round3(report.trs),
        round3(report.ters),
        round3(report.ecs),
        round3(report.dqs),
        round3(report.combined),
    ]
    widths = [max(len(c), len(v)) for c, v in zip(columns, values)]
    head = "  ".join(c.rjust(w) for c, w in zip(columns, widths))
    body = "  ".join(v.rjust(w) for v, w in zip(values, widths))
    lines = [header, head, body, ""]
    lines.append(f"Coverage (weighted): {round3(report.ars_coverage)}")
    lines.append(
        f"Covered techniques: {len(report.covered)}; "
        f"missing: {len(report.missing)}; "
        f"high-priority missing: {len(report.missing_high_priority)}"
    )
    for entry in report.missing_high_priority:
        lines.append(f"  MISSING {entry.attack_id}  {entry.name}  w={round3(entry.weight)}")
    prov = report.provenance
    lines.append(
        f"Provenance: kb={prov.kb_digest[:12]} encoder={prov.encoder_tag} "
        f"theta_sim={prov.theta_sim} lambda={prov.decay_lambda} as_of={prov.as_of} "
        f"fallback={prov.fallback_weight}"
    )
    return "\n".join(lines) + "\n"


def write_atomic(path: str | Path, content: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
