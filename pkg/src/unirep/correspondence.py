"""Head-dependent <-> functor-argument equivalences for each derivation step.

A step cancels a slash owned by one word against an argument owned by
another (its ``cg_pair``).  When a dependency edge joins the two words the
equivalence is *direct*.  Otherwise it is *mediated*: the modifier-shaped
member of the pair is replaced on the dependency side by its own head,
which must share an edge with the other member.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .categories import is_modifier
from .cg import CGDerivation, CGStep
from .dg import DepGraph, GraphError, build_graph


class LicensingError(ValueError):
    """No dependency edge licenses a step's functor-argument pair."""


@dataclass(frozen=True)
class Equivalence:
    step_no: int
    kind: str            # "direct" or "mediated"
    common: int          # word A, shared by both sides
    b_lhs: int           # B on the dependency side
    b_rhs: int           # B on the categorial side
    functor: int
    argument: int
    direction: str
    dg_head: int
    dg_dependent: int
    dg_form: str
    cg_form: str
    dg_pos_form: str
    cg_pos_form: str
    mediator: int | None = None

    def render(self, pos: bool = False) -> str:
        if pos:
            return f"{self.dg_pos_form} ≡ {self.cg_pos_form}"
        return f"{self.dg_form} ≡ {self.cg_form}"

    @property
    def roles(self) -> dict[str, str]:
        """Role of each pair word on either side; head need not be functor."""
        out = {}
        for w in {self.common, self.b_lhs, self.b_rhs}:
            dg = ("head" if w == self.dg_head else
                  "dependent" if w == self.dg_dependent else "-")
            cg = ("functor" if w == self.functor else
                  "argument" if w == self.argument else "-")
            out[str(w)] = f"{dg}/{cg}"
        return out

    def to_json(self) -> dict:
        return {
            "step_no": self.step_no,
            "kind": self.kind,
            "A": self.common,
            "B_lhs": self.b_lhs,
            "B_rhs": self.b_rhs,
            "mediator": self.mediator,
            "functor": self.functor,
            "argument": self.argument,
            "direction": self.direction,
            "dg_form": self.dg_form,
            "cg_form": self.cg_form,
            "rendered": self.render(),
            "rendered_pos": self.render(pos=True),
        }


def dg_form(head: str, dep: str, dep_left: bool) -> str:
    return f"{head}({dep}*)" if dep_left else f"{head}(*{dep})"


def cg_form(functor: str, argument: str, direction: str) -> str:
    return f"{functor}/{argument}" if direction == "right" else f"{argument}\\{functor}"


def _build(step: CGStep, d: CGDerivation, kind, common, b_lhs, b_rhs, head, dep, mediator=None):
    f, a = step.cg_pair
    form = [t.form for t in d.sentence]
    tag = [t.pos for t in d.sentence]
    return Equivalence(
        step_no=step.step_no, kind=kind, common=common, b_lhs=b_lhs, b_rhs=b_rhs,
        functor=f, argument=a, direction=step.direction,
        dg_head=head, dg_dependent=dep,
        dg_form=dg_form(form[head], form[dep], dep < head),
        cg_form=cg_form(form[f], form[a], step.direction),
        dg_pos_form=dg_form(tag[head], tag[dep], dep < head),
        cg_pos_form=cg_form(tag[f], tag[a], step.direction),
        mediator=mediator)


def _oriented(g: DepGraph, x: int, y: int) -> tuple[int, int]:
    return (x, y) if (x, y) in g.edges else (y, x)


def dg_to_cg_step(g: DepGraph, step: CGStep, d: CGDerivation) -> Equivalence:
    """The equivalence licensing one derivation step under graph ``g``."""
    f, a = step.cg_pair
    if g.has_edge(f, a):
        head, dep = _oriented(g, f, a)
        return _build(step, d, "direct", head, dep, dep, head, dep)
    # mediated: the modifier-shaped word is replaced by its head
    candidates = [w for w in (f, a) if is_modifier(d.lexical_row[w])]
    tried = []
    for b_rhs in candidates:
        other = a if b_rhs == f else f
        mediator = g.head_of(b_rhs)
        tried.append((b_rhs, mediator))
        if mediator is not None and g.has_edge(mediator, other):
            head, dep = _oriented(g, mediator, other)
            return _build(step, d, "mediated", other, mediator, b_rhs, head, dep, mediator)
    forms = d.sentence.forms
    if not candidates:
        raise LicensingError(f"step {step.step_no}: no edge between {forms[f]!r} and "
                             f"{forms[a]!r} and neither is modifier-shaped")
    if _path_exists(g, f, a):
        raise LicensingError(f"step {step.step_no}: {forms[f]!r} and {forms[a]!r} are "
                             "only connected through more than one mediator "
                             "(multi-hop mediation is not supported)")
    raise LicensingError(f"step {step.step_no}: no licensing edge for pair "
                         f"({forms[f]!r}, {forms[a]!r}); tried mediators {tried}")


def _path_exists(g: DepGraph, x: int, y: int) -> bool:
    seen, stack = {x}, [x]
    while stack:
        u = stack.pop()
        for h, dd in g.edges:
            for v in ((dd,) if h == u else (h,) if dd == u else ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return y in seen


def step_edge(step: CGStep) -> tuple[int, int]:
    """Dependency edge contributed by a step under the modifier rule."""
    hf, ha = step.heads()
    return (ha, hf) if step.modifier else (hf, ha)


def cg_to_dg(d: CGDerivation) -> DepGraph:
    """Accumulate one edge per step: modifiers depend on their argument's head."""
    edges = [step_edge(s) for s in d.steps]
    try:
        return build_graph(len(d.sentence), edges)
    except GraphError as e:
        raise GraphError(f"inconsistent derivation: {e}") from e


@dataclass
class VerificationReport:
    equivalences: list = field(default_factory=list)
    failures: list = field(default_factory=list)     # (step_no, message)
    graph_matches: bool = False
    missing_edges: list = field(default_factory=list)
    extra_edges: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.graph_matches

    @property
    def counts(self) -> dict[str, int]:
        out = {"direct": 0, "mediated": 0}
        for e in self.equivalences:
            out[e.kind] += 1
        return out

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "equivalences": [e.to_json() for e in self.equivalences],
            "failures": [{"step_no": s, "message": m} for s, m in self.failures],
            "graph_matches": self.graph_matches,
            "missing_edges": [list(e) for e in self.missing_edges],
            "extra_edges": [list(e) for e in self.extra_edges],
        }


def verify_equivalences(g: DepGraph, d: CGDerivation) -> VerificationReport:
    if g.n != len(d.sentence):
        raise ValueError("graph and derivation cover different sentences")
    report = VerificationReport()
    for step in d.steps:
        try:
            report.equivalences.append(dg_to_cg_step(g, step, d))
        except LicensingError as e:
            report.failures.append((step.step_no, str(e)))
    derived = {step_edge(s) for s in d.steps}
    report.missing_edges = sorted(g.edges - derived)
    report.extra_edges = sorted(derived - g.edges)
    report.graph_matches = not report.missing_edges and not report.extra_edges
    return report
