"""Command-line entry points.

Three subcommands mirror the pipeline phases:

* ``weights``  — mine industry technique weights from an ATT&CK bundle,
* ``context``  — emit the text records an external encoder must embed,
* ``score``    — evaluate every (dataset, industry) pair from a run config.

Exit codes: 0 success, 1 computation/domain error, 2 configuration/IO error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import attack_kb, industry, pipeline
from .dataset import (
    DEFAULT_TOP_K_FEATURES,
    TEMPLATE_VERSION,
    load_descriptor,
    profile_dataset,
    read_rows,
)
from .embeddings import write_context_file
from .errors import ConfigError, IdsEvalError
from .report import render_table, write_atomic

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CONFIG = 2


def _read_bundle(path: str) -> "attack_kb.KnowledgeBase":
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read bundle {p}: {exc}") from exc
    return attack_kb.parse_bundle(raw)


def _slug(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


def cmd_weights(args: argparse.Namespace) -> int:
    kb = _read_bundle(args.bundle)
    try:
        profiles = industry.load_profiles(args.profiles)
    except OSError as exc:
        raise ConfigError(f"cannot read profiles {args.profiles}: {exc}") from exc
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for profile in profiles:
        weights = industry.derive_industry_weights(
            kb, profile, args.include_subtechniques
        )
        if not weights.relevant_groups:
            log.warning(
                "industry %r matched no threat groups; weights are uniform",
                profile.industry_name,
            )
        doc = industry.weights_export(weights, kb)
        path = out_dir / f"weights_{_slug(profile.industry_name)}.json"
        write_atomic(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")
        print(f"wrote {path}")
    return EXIT_OK


def cmd_context(args: argparse.Namespace) -> int:
    kb = _read_bundle(args.bundle)
    desc = load_descriptor(args.descriptor)
    profile = profile_dataset(read_rows(args.dataset, args.delimiter), desc)
    records = pipeline.context_records(
        kb, desc, profile, args.top_k_features, args.include_subtechniques
    )
    write_context_file(args.out, records, TEMPLATE_VERSION, desc.dataset_name)
    print(f"wrote {args.out} ({len(records)} records)")
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    config = pipeline.load_config(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = pipeline.run_score(config)
    for report in reports:
        stem = f"{_slug(report.dataset_name)}__{_slug(report.industry_name)}"
        write_atomic(out_dir / f"{stem}.json", report.to_json())
        write_atomic(out_dir / f"{stem}.txt", render_table(report))
        print(f"wrote {out_dir / stem}.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idseval",
        description="Industry-specific suitability scoring for network IDS datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_weights = sub.add_parser(
        "weights", help="derive industry technique weights from an ATT&CK bundle"
    )
    p_weights.add_argument("--bundle", required=True, help="STIX bundle JSON path")
    p_weights.add_argument(
        "--profiles", default=None, help="industry profile file (default: bundled)"
    )
    p_weights.add_argument("--out", required=True, help="output directory")
    p_weights.add_argument(
        "--include-subtechniques", action="store_true", default=False
    )
    p_weights.set_defaults(func=cmd_weights)

    p_context = sub.add_parser(
        "context", help="emit attack-context and technique texts for encoding"
    )
    p_context.add_argument("--dataset", required=True, help="delimited dataset file")
    p_context.add_argument("--descriptor", required=True, help="dataset descriptor JSON")
    p_context.add_argument("--bundle", required=True, help="STIX bundle JSON path")
    p_context.add_argument("--out", required=True, help="output context file")
    p_context.add_argument("--delimiter", default=",")
    p_context.add_argument(
        "--top-k-features", type=int, default=DEFAULT_TOP_K_FEATURES
    )
    p_context.add_argument(
        "--include-subtechniques", action="store_true", default=False
    )
    p_context.set_defaults(func=cmd_context)

    p_score = sub.add_parser(
        "score", help="score every (dataset, industry) pair of a run config"
    )
    p_score.add_argument("--config", required=True, help="run config JSON path")
    p_score.add_argument("--out", required=True, help="output directory")
    p_score.set_defaults(func=cmd_score)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IdsEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
