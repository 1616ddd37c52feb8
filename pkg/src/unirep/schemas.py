"""Shipped JSON schemas for every document the CLI writes."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

NAMES = ("derivation", "derivations", "depgraph", "equivalences", "unified_table",
         "complexity", "tree", "rules", "fixture", "fixture_report", "sequnion")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}")
    path = resources.files("unirep").joinpath("schemas", f"{name}.schema.json")
    return json.loads(path.read_text("utf-8"))


def validate(doc, name: str) -> None:
    """Raise :class:`jsonschema.ValidationError` unless ``doc`` fits schema ``name``."""
    jsonschema.validate(doc, load_schema(name), cls=jsonschema.Draft202012Validator)
