"""Acceptance suite: one test (and one pass/fail line) per release criterion.

Every criterion is checked end to end against an oracle computed
independently of the implementation: published score rows, brute-force
reimplementations, closed-form values, or a hand-computed golden report.
"""

import json
import math
import random
import time
from datetime import date

import pytest

from idseval.attack_kb import parse_bundle
from idseval.cli import main
from idseval.dataset import AttackContext, DatasetProfile
from idseval.embeddings import (
    EmbeddingStore,
    EmbeddingVector,
    LabelMapping,
    MappingResult,
    cosine_similarity,
    map_attacks,
)
from idseval.industry import IndustryProfile, derive_industry_weights, match_relevant_groups
from idseval.rubrics import RubricSheet, RubricWeightRow, load_definition, load_sheet
from idseval.scoring import ars_frequency, combined, dqs, ecs, ters
from idseval.temporal import CveLink, TemporalConfig, decay, technique_relevance, weighted_cve_age
from idseval.industry import TechniqueWeights

from conftest import attack_pattern, intrusion_set, make_bundle, uses
from test_industry import HEALTHCARE, brute_force_weights


def _verdict(name):
    class _Reporter:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            print(f"{'FAIL' if exc_type else 'PASS'}: {name}")
            return False

    return _Reporter()


def test_acceptance_published_combined_scores(fixtures_dir):
    with _verdict("published combined-score oracle (50 rows, +/-0.0005)"):
        rows = json.loads((fixtures_dir / "combined_rows.json").read_text())["rows"]
        assert len(rows) == 50
        for row in rows:
            got = combined(row["ars"], row["trs"], row["ters"], row["ecs"], row["dqs"])
            assert abs(got - row["combined"]) <= 0.0005, (row["dataset"], row["industry"])


def test_acceptance_weight_mining_oracle(toy_bundle_bytes):
    with _verdict("weight mining oracle (toy KB exact + 200 randomized brute-force)"):
        kb = parse_bundle(toy_bundle_bytes)
        tw = derive_industry_weights(kb, HEALTHCARE)
        expected = {"T1001": 1.0, "T1002": 1 / 3, "T1003": 1 / 3, "T1004": 1 / 3}
        for tid, want in expected.items():
            assert abs(tw.weights[tid] - want) <= 1e-12

        rng = random.Random(20240817)
        for _ in range(200):
            n_tech = rng.randint(1, 15)
            n_groups = rng.randint(1, 5)
            objects = [attack_pattern(f"T1{i:03d}") for i in range(n_tech)]
            relevant = set()
            for gi in range(n_groups):
                hit = rng.random() < 0.5
                objects.append(
                    intrusion_set(f"g{gi}", description="hospital ops" if hit else "other ops")
                )
                if hit:
                    relevant.add(f"intrusion-set--g{gi}")
            for ei in range(rng.randint(0, 2 * n_tech)):
                objects.append(
                    uses(f"g{rng.randrange(n_groups)}", f"T1{rng.randrange(n_tech):03d}", f"r{ei}")
                )
            kb = parse_bundle(make_bundle(objects))
            got = derive_industry_weights(kb, HEALTHCARE).weights
            want = brute_force_weights(kb, relevant, set(kb.techniques))
            assert set(got) == set(want)
            for tid in got:
                assert abs(got[tid] - want[tid]) <= 1e-12


def test_acceptance_frequency_score_oracle():
    with _verdict("frequency-weighted relevance oracle (500 randomized, 1e-12)"):
        rng = random.Random(513)
        for _ in range(500):
            technique_ids = [f"T1{i:03d}" for i in range(rng.randint(1, 15))]
            weights = {t: rng.uniform(0.01, 1.0) for t in technique_ids}
            peak = max(weights.values())
            weights = {t: w / peak for t, w in weights.items()}
            labels = [f"l{i}" for i in range(rng.randint(1, 20))]
            counts = [rng.randint(1, 99) for _ in labels]
            frequencies = {l: c / sum(counts) for l, c in zip(labels, counts)}
            tops = {
                l: (rng.choice(technique_ids) if rng.random() < 0.7 else None)
                for l in labels
            }

            profile = DatasetProfile(
                dataset_name="r",
                labels=tuple(sorted(labels)),
                frequencies=frequencies,
                per_label_stats={},
                normal_stats={},
                protocols={},
                services={},
                row_count=sum(counts),
            )
            per_label = {
                l: LabelMapping(matches=((t, 0.9),), top=(t, 0.9))
                if t is not None
                else LabelMapping(matches=(), top=None)
                for l, t in tops.items()
            }
            mapping = MappingResult(per_label=per_label, theta_sim=0.3, industry_name="h")
            tw = TechniqueWeights(
                industry_name="h",
                weights=weights,
                usage_counts={t: 0 for t in weights},
                relevant_groups=frozenset(),
                min_weight=min(weights.values()),
                kb_digest="0" * 64,
            )
            got = ars_frequency(profile, mapping, tw, 0.10)

            w_max = max(weights.values())
            numerator = sum(
                frequencies[l] * (weights[t] if t is not None else 0.10)
                for l, t in tops.items()
            )
            denominator = sum(frequencies[l] * w_max for l in labels)
            assert abs(got - numerator / denominator) <= 1e-12


def test_acceptance_temporal_suite():
    with _verdict("temporal suite (decay anchors, monotonic grid, weighted CVE age)"):
        assert decay(0.0, 2.0) == 1.0
        assert decay(2.0, 2.0) == 0.5
        assert decay(7.25, 7.25) == 0.5
        assert abs(decay(16.0, 2.0) - 1.0 / 9.0) <= 1e-9

        grid = [i * 40.0 / 999 for i in range(1000)]
        values = [decay(t, 2.0) for t in grid]
        assert all(a > b for a, b in zip(values, values[1:]))

        # day counts 1461 and 4383 are exactly 4 and 12 years (365.25-day years),
        # i.e. the ages {1, 3} case scaled by 4; CVSS weighting {9, 3} must give
        # exactly 4 * 1.5 = 6 years. The unscaled identity holds exactly too.
        cfg = TemporalConfig(as_of=date(2025, 7, 1))
        links = [
            CveLink("T1", "CVE-2021-0001", date(2021, 7, 1), 9.0),   # 1461 days
            CveLink("T1", "CVE-2013-0002", date(2013, 7, 1), 3.0),   # 4383 days
        ]
        assert (cfg.as_of - links[0].published).days == 1461
        assert (cfg.as_of - links[1].published).days == 4383
        assert weighted_cve_age(links, cfg) == 6.0
        assert (1.0 * 9.0 + 3.0 * 3.0) / (9.0 + 3.0) == 1.5

        assert technique_relevance([], cfg) == 0.5


def test_acceptance_rubric_suite(fixtures_dir):
    with _verdict("rubric suite (bounds, weight-scale invariance, published DQS row)"):
        for rubric_id, fn in (("TeRS", ters), ("ECS", ecs)):
            ids = load_definition(rubric_id).criterion_ids
            row = RubricWeightRow(rubric_id=rubric_id, industry_name="h", weights={c: 2.0 for c in ids})
            fives = RubricSheet(rubric_id=rubric_id, dataset_name="d", scores={c: 5 for c in ids})
            zeros = RubricSheet(rubric_id=rubric_id, dataset_name="d", scores={c: 0 for c in ids})
            assert abs(fn(fives, row) - 1.0) <= 1e-12
            assert fn(zeros, row) == 0.0

        dqs_ids = load_definition("DQS").criterion_ids
        assert dqs(RubricSheet("DQS", "d", {c: 5 for c in dqs_ids})) == 1.0
        assert dqs(RubricSheet("DQS", "d", {c: 0 for c in dqs_ids})) == 0.0

        rng = random.Random(99)
        ids = load_definition("TeRS").criterion_ids
        sheet = RubricSheet("TeRS", "d", {c: rng.randint(0, 5) for c in ids})
        base = {c: rng.uniform(1.0, 5.0) for c in ids}
        reference = ters(sheet, RubricWeightRow("TeRS", "h", base))
        for scale in (0.25, 3.0, 41.0):
            scaled = RubricWeightRow("TeRS", "h", {c: w * scale for c, w in base.items()})
            assert abs(ters(sheet, scaled) - reference) <= 1e-12

        published = load_sheet(fixtures_dir / "sheets" / "dqs_nsl_kdd.json")
        assert dqs(published) == 0.25


def test_acceptance_mapping_suite():
    with _verdict("mapping suite (cosine values, threshold monotonicity, tie-break)"):
        a = EmbeddingVector("a", (1.0, 0.0))
        assert abs(cosine_similarity(a, EmbeddingVector("b", (1.0, 0.0))) - 1.0) <= 1e-8
        assert abs(cosine_similarity(a, EmbeddingVector("c", (0.0, 1.0)))) <= 1e-8
        assert abs(cosine_similarity(a, EmbeddingVector("d", (1.0, 1.0))) - 1 / math.sqrt(2)) <= 1e-8

        from idseval.attack_kb import Technique

        rng = random.Random(31337)
        for _ in range(25):
            dim = rng.randint(2, 6)
            technique_ids = [f"T1{i:03d}" for i in range(rng.randint(1, 10))]
            vectors = {"ctx:d/x": [rng.uniform(-1, 1) for _ in range(dim)]}
            for t in technique_ids:
                vectors[f"tech:{t}"] = [rng.uniform(-1, 1) for _ in range(dim)]
            for key in vectors:
                if not any(vectors[key]):
                    vectors[key][0] = 1.0
            store = EmbeddingStore(
                dimension=dim,
                encoder_tag="t",
                vectors={k: EmbeddingVector(k, tuple(v)) for k, v in vectors.items()},
            )
            techniques = {
                t: Technique(t, "n", "d", is_subtechnique=False) for t in technique_ids
            }
            tw = TechniqueWeights(
                industry_name="h",
                weights={t: 1.0 for t in technique_ids},
                usage_counts={t: 0 for t in technique_ids},
                relevant_groups=frozenset(),
                min_weight=1.0,
                kb_digest="0" * 64,
            )
            contexts = [AttackContext(label="x", context_text="t")]
            previous = None
            for theta in (-1.0, -0.5, 0.0, 0.3, 0.6, 0.9):
                result = map_attacks(contexts, techniques, store, theta, tw, "d")
                matched = {t for t, _ in result.per_label["x"].matches}
                if previous is not None:
                    assert matched <= previous
                previous = matched

        # exact similarity tie: identical candidate vectors, distinct weights
        store = EmbeddingStore(
            dimension=2,
            encoder_tag="t",
            vectors={
                "ctx:d/x": EmbeddingVector("ctx:d/x", (1.0, 1.0)),
                "tech:T1001": EmbeddingVector("tech:T1001", (1.0, 0.0)),
                "tech:T1002": EmbeddingVector("tech:T1002", (0.0, 1.0)),
            },
        )
        techniques = {
            t: Technique(t, "n", "d", is_subtechnique=False) for t in ("T1001", "T1002")
        }
        tw = TechniqueWeights(
            industry_name="h",
            weights={"T1001": 0.4, "T1002": 0.9},
            usage_counts={"T1001": 0, "T1002": 0},
            relevant_groups=frozenset(),
            min_weight=0.4,
            kb_digest="0" * 64,
        )
        result = map_attacks(
            [AttackContext(label="x", context_text="t")], techniques, store, 0.5, tw, "d"
        )
        assert result.per_label["x"].top[0] == "T1002"


def test_acceptance_end_to_end_golden(golden_dir, tmp_path):
    with _verdict("end-to-end golden report (hand-computed, byte-identical reruns, <5s)"):
        started = time.monotonic()
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["score", "--config", str(golden_dir / "config.json"), "--out", str(out1)]) == 0
        assert main(["score", "--config", str(golden_dir / "config.json"), "--out", str(out2)]) == 0
        elapsed = time.monotonic() - started
        assert elapsed < 5.0, f"pipeline took {elapsed:.2f}s"

        report = json.loads((out1 / "toynet__healthcare.json").read_text())
        expected = json.loads((golden_dir / "expected.json").read_text())
        for metric in ("ars", "ars_coverage", "trs", "ters", "ecs", "dqs", "combined"):
            assert report["scores"][metric] == expected[metric], metric
        assert [e["attack_id"] for e in report["coverage"]["missing_high_priority"]] == (
            expected["missing_high_priority"]
        )
        for name in ("toynet__healthcare.json", "toynet__healthcare.txt"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_acceptance_keyword_matching(toy_bundle_bytes):
    with _verdict("keyword matching (hospital fixture group matches; POS != purpose)"):
        kb = parse_bundle(toy_bundle_bytes)
        relevant = match_relevant_groups(kb, HEALTHCARE)
        assert "intrusion-set--0001" in relevant  # "hospital" in its description

        retail = IndustryProfile(industry_name="retail", keywords=("POS",))
        purpose_kb = parse_bundle(
            make_bundle([intrusion_set("p1", description="The purpose is profit.")])
        )
        assert not match_relevant_groups(purpose_kb, retail)
        pos_kb = parse_bundle(
            make_bundle([intrusion_set("p2", description="Hits POS terminals.")])
        )
        assert match_relevant_groups(pos_kb, retail)
