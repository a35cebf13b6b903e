"""CVE link ingestion and temporal decay mathematics.

Relevance decays as 1/(1 + dt/lambda) in years. Dataset age anchors
creation years at July 1 (datasets are dated by year only); technique
age is the CVSS-weighted mean age of the technique's linked CVEs, and
techniques without links fall back to a neutral coefficient.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from .errors import DomainError, SchemaError

CVE_ID_RE = re.compile(r"^CVE-\d{4}-\d{4,}$")

DAYS_PER_YEAR = 365.25
DEFAULT_LAMBDA = 2.0
DEFAULT_RHO = 0.5


@dataclass(frozen=True)
class CveLink:
    technique: str
    cve_id: str
    published: date
    cvss: float

    def __post_init__(self):
        if not CVE_ID_RE.match(self.cve_id):
            raise SchemaError(f"invalid CVE identifier {self.cve_id!r}")
        if not 0.0 <= self.cvss <= 10.0:
            raise SchemaError(f"CVSS {self.cvss} for {self.cve_id} outside [0, 10]")


@dataclass(frozen=True)
class TemporalConfig:
    as_of: date
    decay_lambda: float = DEFAULT_LAMBDA
    default_rho: float = DEFAULT_RHO

    def __post_init__(self):
        if self.decay_lambda <= 0:
            raise DomainError(f"decay constant must be positive, got {self.decay_lambda}")
        if not 0.0 <= self.default_rho <= 1.0:
            raise DomainError(f"default relevance {self.default_rho} outside [0, 1]")


def decay(delta_t: float, decay_lambda: float) -> float:
    """Logistic-like decay 1/(1 + delta_t/lambda); 1 at zero age."""
    if delta_t < 0:
        raise DomainError(f"time difference must be non-negative, got {delta_t}")
    if decay_lambda <= 0:
        raise DomainError(f"decay constant must be positive, got {decay_lambda}")
    return 1.0 / (1.0 + delta_t / decay_lambda)


def dataset_decay(creation_year: int, cfg: TemporalConfig) -> float:
    """Dataset decay coefficient from its creation year (anchored mid-year)."""
    if creation_year > cfg.as_of.year:
        raise DomainError(
            f"creation year {creation_year} is after the as-of date {cfg.as_of}"
        )
    anchor = date(creation_year, 7, 1)
    delta_t = max((cfg.as_of - anchor).days, 0) / DAYS_PER_YEAR
    return decay(delta_t, cfg.decay_lambda)


def _age_years(published: date, cfg: TemporalConfig) -> float:
    age_days = (cfg.as_of - published).days
    if age_days < 0:
        raise DomainError(
            f"CVE published {published} is after the as-of date {cfg.as_of}"
        )
    return age_days / DAYS_PER_YEAR


def weighted_cve_age(links: list[CveLink], cfg: TemporalConfig) -> float:
    """CVSS-weighted mean CVE age in years; unweighted mean when all CVSS are 0."""
    if not links:
        raise DomainError("weighted CVE age is undefined for an empty link list")
    ages = [_age_years(link.published, cfg) for link in links]
    total_cvss = sum(link.cvss for link in links)
    if total_cvss == 0.0:
        return sum(ages) / len(ages)
    return sum(a * link.cvss for a, link in zip(ages, links)) / total_cvss


def technique_relevance(links: list[CveLink], cfg: TemporalConfig) -> float:
    """Relevance coefficient for one technique; default_rho when no CVEs link to it."""
    if not links:
        return cfg.default_rho
    return decay(weighted_cve_age(links, cfg), cfg.decay_lambda)


def load_cve_links(path: str | Path) -> dict[str, list[CveLink]]:
    """Read a CVE link file: CSV with columns technique,cve_id,published,cvss."""
    links: dict[str, list[CveLink]] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"technique", "cve_id", "published", "cvss"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise SchemaError(
                f"CVE link file {path} must have columns {sorted(required)}"
            )
        for lineno, row in enumerate(reader, 2):
            try:
                link = CveLink(
                    technique=row["technique"],
                    cve_id=row["cve_id"],
                    published=date.fromisoformat(row["published"]),
                    cvss=float(row["cvss"]),
                )
            except (ValueError, SchemaError) as exc:
                raise SchemaError(f"{path}:{lineno}: bad CVE link record: {exc}") from exc
            links.setdefault(link.technique, []).append(link)
    return links
