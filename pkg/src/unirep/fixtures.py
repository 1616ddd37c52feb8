"""Bundled fixtures and the full-pipeline check behind ``unirep verify``.

A *full* fixture carries a sentence, its lexical row and a replay script,
plus whatever expectations are known for it.  An *abbreviated* fixture
carries one or more partial δ-tables.  Every expectation present is
compared; absent keys are simply not checked.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .categories import Sentence, print_category
from .cg import CGDerivation, replay
from .correspondence import cg_to_dg, verify_equivalences
from .dg import DepGraph, build_graph, delta, projectivity, subtree_rule
from .psg import cg_to_psg, crossing_report, extract_rules, terminal_string
from .unified import UnifiedTable, abbreviated, build_unified, read_dependencies


class FixtureError(ValueError):
    """A fixture file is missing or malformed."""


def fixture_names() -> list[str]:
    index = json.loads(_bundled("index.json").read_text("utf-8"))
    return [entry["file"].removesuffix(".json") for entry in index["fixtures"]]


def fixture_index() -> dict:
    return json.loads(_bundled("index.json").read_text("utf-8"))


def _bundled(name: str):
    return resources.files("unirep").joinpath("fixtures", name)


def bundled_path(name: str) -> Path:
    return Path(str(_bundled(name)))


def load_fixture(ref: str | Path) -> dict:
    """Load a fixture by bundled name (``"turkish_diye"``) or by file path."""
    path = Path(ref)
    if not path.suffix:
        path = bundled_path(f"{ref}.json")
    try:
        doc = json.loads(path.read_text("utf-8"))
    except FileNotFoundError as e:
        raise FixtureError(f"no fixture {str(ref)!r}") from e
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path}: line {e.lineno}: {e.msg}") from e
    if doc.get("kind") not in ("full", "abbreviated"):
        raise FixtureError(f"{path}: kind must be 'full' or 'abbreviated'")
    return doc


def fixture_sentence(fx: dict) -> Sentence:
    return Sentence.from_pairs((t["form"], t["pos"]) for t in fx["tokens"])


def fixture_derivation(fx: dict) -> CGDerivation:
    return replay(fixture_sentence(fx), fx["lexical_row"], fx["script"])


def fixture_tables(fx: dict) -> dict[str, UnifiedTable]:
    return {t["label"]: abbreviated(t["columns"], t["delta_row"], t["steps"])
            for t in fx["tables"]}


@dataclass
class ArtifactCheck:
    artifact: str
    ok: bool
    expected: Any = None
    actual: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"artifact": self.artifact, "ok": self.ok, "expected": self.expected,
                "actual": self.actual, "detail": self.detail}


@dataclass
class FixtureReport:
    name: str
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[ArtifactCheck]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {"fixture": self.name, "verdict": "pass" if self.passed else "fail",
                "summary": self.summary, "checks": [c.to_json() for c in self.checks]}

    def text(self) -> str:
        lines = [f"fixture {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for k, v in self.summary.items():
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            line = f"  [{mark}] {c.artifact}"
            if not c.ok:
                line += f": {c.detail}" if c.detail else f": expected {c.expected!r}, got {c.actual!r}"
            lines.append(line)
        return "\n".join(lines) + "\n"


def _compare(report: FixtureReport, artifact: str, expected, actual, detail: str = ""):
    report.checks.append(ArtifactCheck(artifact, expected == actual, expected, actual,
                                       "" if expected == actual else detail))


def _edge_detail(g: DepGraph, expected: set, forms: list[str]) -> str:
    def name(e):
        return f"{forms[e[0]]} -> {forms[e[1]]} ({e[0]}->{e[1]})"
    missing = sorted(expected - set(g.edges))
    extra = sorted(set(g.edges) - expected)
    parts = []
    if missing:
        parts.append("expected but not derived: " + ", ".join(map(name, missing)))
    if extra:
        parts.append("derived but not expected: " + ", ".join(map(name, extra)))
    return "; ".join(parts)


def check_fixture(fx: dict) -> FixtureReport:
    if fx["kind"] == "abbreviated":
        return _check_abbreviated(fx)
    return _check_full(fx)


def _check_full(fx: dict) -> FixtureReport:
    exp = fx.get("expected", {})
    report = FixtureReport(fx["name"])
    d = fixture_derivation(fx)
    forms = d.sentence.forms
    report.summary["steps"] = len(d.steps)
    report.summary["wrapped steps"] = d.wrapped_steps

    if "result_categories" in exp:
        _compare(report, "result_categories", exp["result_categories"],
                 [print_category(c) for c in d.result_categories])
    if "final" in exp:
        _compare(report, "final", exp["final"], print_category(d.final.category))
    if "wrapped_steps" in exp:
        _compare(report, "wrapped_steps", exp["wrapped_steps"], d.wrapped_steps)

    g = cg_to_dg(d)
    if "edges" in exp:
        want = {tuple(e) for e in exp["edges"]}
        _compare(report, "edges", sorted(map(list, want)), sorted(map(list, g.edges)),
                 _edge_detail(g, want, forms))
        # the expected graph, not the derived one, is what the steps must satisfy
        try:
            g_expected = build_graph(len(d.sentence), want)
        except ValueError as e:
            report.checks.append(ArtifactCheck("expected_graph", False, detail=str(e)))
            g_expected = None
    else:
        g_expected = g
    if "root" in exp:
        _compare(report, "root", exp["root"], g.root)
    if "delta" in exp:
        _compare(report, "delta", exp["delta"], [delta(g, i) for i in range(g.n)])
    if "projective" in exp:
        _compare(report, "projective", exp["projective"], projectivity(g).projective)
    if "dep_rule" in exp:
        rule = subtree_rule(g, {t.index: t.pos for t in d.sentence}, g.root)
        _compare(report, "dep_rule", exp["dep_rule"], str(rule))

    if g_expected is not None:
        ver = verify_equivalences(g_expected, d)
        report.summary["equivalences"] = len(ver.equivalences)
        report.checks.append(ArtifactCheck(
            "licensing", not ver.failures, detail="; ".join(m for _, m in ver.failures)))
        if "equivalences" in exp:
            got = [{"step_no": e.step_no, "kind": e.kind, "rendered": e.render(),
                    "rendered_pos": e.render(pos=True)} for e in ver.equivalences]
            want = [{k: e[k] for k in ("step_no", "kind", "rendered", "rendered_pos") if k in e}
                    for e in exp["equivalences"]]
            got = [{k: e[k] for k in w} for e, w in zip(got, want)] + got[len(want):]
            _compare(report, "equivalences", want, got,
                     "; ".join(f"step {w['step_no']}: expected {w}, got {a}"
                               for w, a in zip(want, got) if w != a) or "count differs")

    tree = cg_to_psg(d)
    rules = sorted(str(r) for r in extract_rules(tree))
    report.summary["psg rules"] = len(rules)
    if "psg_rules" in exp:
        want = sorted(exp["psg_rules"])
        _compare(report, "psg_rules", want, rules,
                 f"missing {sorted(set(want) - set(rules))}, extra {sorted(set(rules) - set(want))}")
    if "crossing" in exp:
        _compare(report, "crossing", exp["crossing"], bool(crossing_report(tree)))
    try:
        _compare(report, "terminal_string", forms, terminal_string(tree))
    except ValueError as e:
        report.checks.append(ArtifactCheck("terminal_string", False, detail=str(e)))

    if g_expected is not None and not report.failures():
        table = build_unified(d, g_expected)
        report.summary["unified final"] = table.final and _text(table.final)
        if "unified_rows" in exp:
            got = [[c.text() for c in row] for row in table.rows]
            _compare(report, "unified_rows", exp["unified_rows"], got,
                     "; ".join(f"row {i}: expected {w}, got {a}"
                               for i, (w, a) in enumerate(zip(exp["unified_rows"], got))
                               if w != a) or "row count differs")
        if "unified_final" in exp:
            _compare(report, "unified_final", exp["unified_final"], _text(table.final))
        if "unified_root" in exp:
            _compare(report, "unified_root", exp["unified_root"], table.root)
        back = read_dependencies(table)
        _compare(report, "read_dependencies", sorted(map(list, g_expected.edges)),
                 sorted(map(list, back.edges)))
    return report


def _text(expr) -> str | None:
    from .categories import print_delta
    return None if expr is None else print_delta(expr)


def _check_abbreviated(fx: dict) -> FixtureReport:
    report = FixtureReport(fx["name"])
    for entry in fx["tables"]:
        label = entry["label"]
        try:
            t = abbreviated(entry["columns"], entry["delta_row"], entry["steps"])
        except ValueError as e:
            report.checks.append(ArtifactCheck(f"{label}: table", False, detail=str(e)))
            continue
        exp = entry.get("expected", {})
        if "rows" in exp:
            _compare(report, f"{label}: rows", exp["rows"],
                     [[c.text() for c in row] for row in t.rows])
        if "final" in exp:
            _compare(report, f"{label}: final", exp["final"], _text(t.final))
        report.summary[label] = f"{len(t.steps)} step(s), final {_text(t.final)}"
    return report
