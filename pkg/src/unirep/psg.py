"""Constituency trees from categorial derivations.

Every derivation step becomes one binary node over the two input spans, so
a wrapped step yields a node whose token yield has a hole: drawn in linear
order its branches cross.  Nodes stay single-mothered.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator, Mapping, Union

from .categories import Atomic, Category, is_modifier, print_category, target
from .cg import CGDerivation


@dataclass(frozen=True)
class Leaf:
    index: int
    form: str

    @property
    def yield_(self) -> frozenset:
        return frozenset([self.index])


@dataclass(frozen=True)
class PSNode:
    label: str
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError(f"node {self.label!r} has no children")

    @property
    def yield_(self) -> frozenset:
        out = frozenset()
        for c in self.children:
            out |= c.yield_
        return out

    @property
    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and isinstance(self.children[0], Leaf)

    def leaves(self) -> list[Leaf]:
        out = []
        for c in self.children:
            out.extend([c] if isinstance(c, Leaf) else c.leaves())
        return out

    def __str__(self):
        return to_brackets(self)


Node = Union[PSNode, Leaf]


def make_node(label: str, children: Iterable[Node]) -> PSNode:
    """Build a node with children ordered by their smallest token index."""
    return PSNode(label, tuple(sorted(children, key=lambda c: min(c.yield_))))


def walk(t: PSNode, path: tuple = ()) -> Iterator[tuple[tuple, PSNode]]:
    """Pre-order ``(path, node)`` pairs over internal nodes."""
    yield path, t
    for i, c in enumerate(t.children):
        if isinstance(c, PSNode):
            yield from walk(c, path + (i,))


@dataclass(frozen=True)
class PSGRule:
    lhs: str
    rhs: tuple

    def __post_init__(self):
        if not self.rhs:
            raise ValueError("rule needs a non-empty right-hand side")

    def __str__(self):
        return f"{self.lhs} → {' '.join(self.rhs)}"

    @classmethod
    def parse(cls, text: str) -> "PSGRule":
        lhs, _, rhs = re.split(r"\s*(→|->)\s*", text.strip(), maxsplit=1)
        return cls(lhs, tuple(rhs.split()))


# -- labels --------------------------------------------------------------------

@dataclass
class LabelMap:
    sentence_atom: str = "S"
    predicate: str = "VP"
    atoms: dict = field(default_factory=lambda: {"S": "S", "N": "NP"})
    projections: dict = field(default_factory=dict)
    categories: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "LabelMap":
        return cls(**{k: doc[k] for k in ("sentence_atom", "predicate", "atoms",
                                          "projections", "categories") if k in doc})

    @classmethod
    def default(cls) -> "LabelMap":
        text = resources.files("unirep").joinpath("data/label_map.json").read_text("utf-8")
        return cls.from_dict(json.loads(text))

    def category(self, c: Category) -> str:
        key = print_category(c)
        if key in self.categories:
            return self.categories[key]
        if isinstance(c, Atomic):
            return self.atoms.get(c.name, c.name + "P")
        if is_modifier(c):
            return self.category(c.result)
        if target(c).name == self.sentence_atom:
            return self.predicate
        return self.category(target(c))

    @staticmethod
    def preterminal(pos: str) -> str:
        """POS handles carry subscripts (``V1``, ``N4``); the tag drops them."""
        return re.sub(r"\d+$", "", pos) or pos


class LabelError(KeyError):
    pass


def cg_to_psg(d: CGDerivation, label_map: LabelMap | None = None) -> PSNode:
    """One node per step, labelled from the step's result category.

    Preterminals come from POS tags.  A configured unary projection is
    added above a preterminal unless the word is consumed directly by a
    modifier, whose own node then supplies the phrase.
    """
    lm = label_map or LabelMap.default()
    bare = {s.argument.head for s in d.steps
            if s.modifier and len(s.argument.tokens) == 1}
    nodes: dict[int, PSNode] = {}
    for t in d.sentence:
        tag = lm.preterminal(t.pos)
        node = PSNode(tag, (Leaf(t.index, t.form),))
        if tag in lm.projections and t.index not in bare:
            node = PSNode(lm.projections[tag], (node,))
        nodes[t.index] = node
    for s in d.steps:
        try:
            label = lm.category(s.result.category)
        except KeyError as e:
            raise LabelError(f"no label for {print_category(s.result.category)}") from e
        f = nodes.pop(s.functor.head)
        a = nodes.pop(s.argument.head)
        nodes[s.result.head] = make_node(label, (f, a))
    (root,) = nodes.values()
    return root


def extract_rules(t: PSNode, lexical: bool = False) -> set[PSGRule]:
    """One rule per internal node; preterminal->word rules only if ``lexical``."""
    rules = set()
    for _, node in walk(t):
        if node.is_preterminal:
            if lexical:
                rules.add(PSGRule(node.label, (node.children[0].form,)))
            continue
        rules.add(PSGRule(node.label, tuple(c.label for c in node.children)))
    return rules


def derives(rules: Iterable[PSGRule], t: PSNode) -> bool:
    """Top-down rewrite from the root label reproducing the tree's label structure."""
    rules = set(rules)
    agenda = [t]
    while agenda:
        node = agenda.pop()
        if node.is_preterminal:
            continue
        if PSGRule(node.label, tuple(c.label for c in node.children)) not in rules:
            return False
        agenda.extend(c for c in node.children if isinstance(c, PSNode))
    return True


def _interleaved(y1: frozenset, y2: frozenset) -> bool:
    if y1 <= y2 or y2 <= y1:
        return False
    if not y1 & y2 and (max(y1) < min(y2) or max(y2) < min(y1)):
        return False
    return True


def crossing_report(t: PSNode) -> list[tuple[PSNode, PSNode]]:
    """Node pairs whose yields interleave (neither nested nor separated)."""
    nodes = [n for _, n in walk(t)]
    out = []
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if _interleaved(a.yield_, b.yield_):
                out.append((a, b))
    return out


def terminal_string(t: PSNode) -> list[str]:
    """Leaf forms placed at their token positions (tree order may differ)."""
    leaves = sorted(t.leaves(), key=lambda leaf: leaf.index)
    if [leaf.index for leaf in leaves] != list(range(len(leaves))):
        raise ValueError("leaves do not cover consecutive positions exactly once")
    return [leaf.form for leaf in leaves]


def is_contiguous(y: frozenset) -> bool:
    return max(y) - min(y) + 1 == len(y)


@dataclass
class Alignment:
    steps: dict = field(default_factory=dict)        # node path -> step number
    decorations: dict = field(default_factory=dict)  # node path -> category notation
    mismatches: list = field(default_factory=list)   # (path, label, yield)
    unmatched_steps: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.unmatched_steps

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "nodes": [{"path": list(p), "step_no": s, "category": self.decorations[p]}
                      for p, s in sorted(self.steps.items())],
            "mismatches": [{"path": list(p), "label": lab, "yield": sorted(y)}
                           for p, lab, y in self.mismatches],
            "unmatched_steps": self.unmatched_steps,
        }


def align(t: PSNode, d: CGDerivation) -> Alignment:
    """Match branching nodes to steps by yield; decorate them with categories."""
    by_span: dict[frozenset, list] = {}
    for s in d.steps:
        by_span.setdefault(s.result.tokens, []).append(s)
    report = Alignment()
    used = set()
    for path, node in walk(t):
        if len(node.children) < 2:
            y = node.yield_
            if len(y) == 1 and d.lexical_row:
                report.decorations[path] = print_category(d.lexical_row[min(y)])
            continue
        cands = [s for s in by_span.get(node.yield_, []) if s.step_no not in used]
        if not cands:
            report.mismatches.append((path, node.label, node.yield_))
            continue
        step = cands[0]
        used.add(step.step_no)
        report.steps[path] = step.step_no
        report.decorations[path] = print_category(step.result.category)
    report.unmatched_steps = [s.step_no for s in d.steps if s.step_no not in used]
    return report


# -- serialisation ----------------------------------------------------------

def to_brackets(t: Node) -> str:
    """``(LABEL child ...)`` with leaves written ``index=form``."""
    if isinstance(t, Leaf):
        return f"{t.index}={t.form}"
    return f"({t.label} {' '.join(to_brackets(c) for c in t.children)})"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_brackets(text: str) -> PSNode:
    tokens = _TOKEN.findall(text)
    pos = 0

    def node() -> Node:
        nonlocal pos
        tok = tokens[pos]
        if tok != "(":
            pos += 1
            m = re.match(r"^(\d+)=(.*)$", tok)
            if not m:
                raise ValueError(f"leaf {tok!r} is not of the form index=form")
            return Leaf(int(m.group(1)), m.group(2))
        pos += 1
        label = tokens[pos]
        pos += 1
        kids = []
        while pos < len(tokens) and tokens[pos] != ")":
            kids.append(node())
        if pos >= len(tokens):
            raise ValueError("unbalanced brackets")
        pos += 1
        return make_node(label, kids)

    if not tokens:
        raise ValueError("empty tree")
    root = node()
    if pos != len(tokens) or not isinstance(root, PSNode):
        raise ValueError("trailing material after tree")
    return root


def tree_to_json(t: Node) -> dict:
    if isinstance(t, Leaf):
        return {"index": t.index, "form": t.form}
    return {"label": t.label, "yield": sorted(t.yield_),
            "children": [tree_to_json(c) for c in t.children]}


def tree_from_json(doc: Mapping) -> Node:
    if "index" in doc:
        return Leaf(doc["index"], doc["form"])
    return make_node(doc["label"], [tree_from_json(c) for c in doc["children"]])
