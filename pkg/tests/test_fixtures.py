import json

import jsonschema
import pytest

from unirep.fixtures import (FixtureError, bundled_path, check_fixture, fixture_index,
                             fixture_names, load_fixture)
from unirep.schemas import NAMES, load_schema, validate


@pytest.mark.parametrize("name", fixture_names())
def test_bundled_fixture_is_valid_and_passes(name):
    fx = load_fixture(name)
    validate(fx, "fixture")
    report = check_fixture(fx)
    assert report.passed, report.text()
    validate(report.to_json(), "fixture_report")


def test_index_records_the_small_clause_gap():
    gaps = fixture_index()["gaps"]
    assert any("small clause" in g["construction"] for g in gaps)


def test_every_fixture_file_is_indexed():
    listed = set(fixture_names())
    on_disk = {p.stem for p in bundled_path("index.json").parent.glob("*.json")} - {"index"}
    assert listed == on_disk


@pytest.mark.parametrize("name", NAMES)
def test_schemas_are_well_formed(name):
    jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_schema_rejects_bad_fixture():
    with pytest.raises(jsonschema.ValidationError):
        validate({"name": "x", "kind": "full", "tokens": []}, "fixture")


def test_corrupted_expectation_reported():
    fx = load_fixture("french_passe_compose")
    fx["expected"]["unified_final"] = "δ(V)"
    report = check_fixture(fx)
    assert [c.artifact for c in report.failures()] == ["unified_final"]


def test_load_errors(tmp_path):
    with pytest.raises(FixtureError):
        load_fixture("no_such_fixture")
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  nope", "utf-8")
    with pytest.raises(FixtureError, match="line 2"):
        load_fixture(bad)
    other = tmp_path / "other.json"
    other.write_text(json.dumps({"kind": "poem"}), "utf-8")
    with pytest.raises(FixtureError):
        load_fixture(other)
