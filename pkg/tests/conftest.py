import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def make_bundle(objects):
    return json.dumps({"type": "bundle", "id": "bundle--test", "objects": objects}).encode()


def attack_pattern(attack_id, name="Some Technique", description="Does things.", **extra):
    obj = {
        "type": "attack-pattern",
        "id": f"attack-pattern--{attack_id.replace('.', '-')}",
        "name": name,
        "description": description,
        "external_references": [
            {"source_name": "mitre-attack", "external_id": attack_id}
        ],
    }
    obj.update(extra)
    return obj


def intrusion_set(suffix, name="Some Group", description="", aliases=()):
    return {
        "type": "intrusion-set",
        "id": f"intrusion-set--{suffix}",
        "name": name,
        "description": description,
        "aliases": list(aliases),
    }


def uses(group_suffix, attack_id, rel_suffix):
    return {
        "type": "relationship",
        "id": f"relationship--{rel_suffix}",
        "relationship_type": "uses",
        "source_ref": f"intrusion-set--{group_suffix}",
        "target_ref": f"attack-pattern--{attack_id.replace('.', '-')}",
    }


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def golden_dir():
    return FIXTURES / "golden"


@pytest.fixture
def toy_bundle_bytes():
    """Four techniques, four groups (three hospital-flavored), five uses edges."""
    return (FIXTURES / "golden" / "bundle.json").read_bytes()
