"""Dependency graphs, the depth valuation and dependency-rule checks."""
from __future__ import annotations

import re
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .categories import Sentence, Token

ROOT = -1  # virtual position of the artificial root when checking projectivity


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class DepGraph:
    n: int
    edges: frozenset
    root: int
    _depth: tuple = field(default=(), repr=False, compare=False)

    def heads(self) -> dict[int, int]:
        return {d: h for h, d in self.edges}

    def head_of(self, node: int) -> int | None:
        return self.heads().get(node)

    def dependents(self, node: int) -> list[int]:
        return sorted(d for h, d in self.edges if h == node)

    def has_edge(self, a: int, b: int) -> bool:
        """Edge between ``a`` and ``b`` in either orientation."""
        return (a, b) in self.edges or (b, a) in self.edges

    def depth(self, node: int) -> int:
        return self._depth[node]


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> DepGraph:
    """Validate a single-rooted, single-headed tree over ``range(n)``."""
    if n < 1:
        raise GraphError("graph needs at least one node")
    edges = frozenset((int(h), int(d)) for h, d in edges)
    heads: dict[int, int] = {}
    for h, d in sorted(edges):
        for x in (h, d):
            if not 0 <= x < n:
                raise GraphError(f"node {x} out of range for n={n}")
        if h == d:
            raise GraphError(f"self-loop on {h}")
        if d in heads:
            raise GraphError(f"node {d} has multiple heads: {heads[d]} and {h}")
        heads[d] = h
    roots = [i for i in range(n) if i not in heads]
    if not roots:
        raise GraphError("cycle: no root")
    if len(roots) > 1:
        # a cycle detached from the tree also leaves the tree's root alone
        raise GraphError(f"multiple roots {roots} (disconnected graph)")
    root = roots[0]
    depth = {root: 0}
    queue = deque([root])
    children: dict[int, list[int]] = {}
    for h, d in edges:
        children.setdefault(h, []).append(d)
    while queue:
        h = queue.popleft()
        for d in children.get(h, ()):
            depth[d] = depth[h] + 1
            queue.append(d)
    if len(depth) != n:
        cyclic = sorted(set(range(n)) - set(depth))
        raise GraphError(f"cycle among nodes {cyclic}")
    return DepGraph(n, edges, root, tuple(depth[i] for i in range(n)))


def delta(g: DepGraph, node: int, start: int = 0) -> int:
    """Depth valuation: ``start`` at the root, +1 along every head->dependent edge."""
    if start not in (0, 1):
        raise ValueError("start must be 0 or 1")
    if not 0 <= node < g.n:
        raise IndexError(f"node {node} out of range")
    return start + g.depth(node)


def delta_map(g: DepGraph, start: int = 0) -> dict[int, int]:
    return {i: delta(g, i, start) for i in range(g.n)}


@dataclass(frozen=True)
class Projectivity:
    projective: bool
    crossings: tuple  # pairs of (head, dependent) edges; head ROOT marks the root edge


def projectivity(g: DepGraph, include_root: bool = True) -> Projectivity:
    """Report every pair of edges whose spans interleave (a < c < b < d)."""
    spans = [(h, d) for h, d in sorted(g.edges)]
    if include_root:
        spans.append((ROOT, g.root))
    crossings = []
    for i, e1 in enumerate(spans):
        a, b = sorted(e1)
        for e2 in spans[i + 1:]:
            c, d = sorted(e2)
            if a < c < b < d or c < a < d < b:
                crossings.append((e1, e2))
    return Projectivity(not crossings, tuple(crossings))


# -- dependency rules ----------------------------------------------------------

_RULE = re.compile(r"^\s*([^\s(]+)\s*\((.*)\)\s*$")


@dataclass(frozen=True)
class DepRule:
    """``head(left, ... * right, ...)``; ``head(*)`` licenses a leaf."""
    head_pos: str
    left_deps: tuple = ()
    right_deps: tuple = ()

    def __str__(self):
        left = ", ".join(self.left_deps)
        right = ", ".join(self.right_deps)
        inner = " ".join(x for x in (left, "*", right) if x)
        return f"{self.head_pos}({inner})"

    @classmethod
    def parse(cls, text: str) -> "DepRule":
        m = _RULE.match(text)
        if not m or m.group(2).count("*") != 1:
            raise ValueError(f"bad dependency rule {text!r}")
        left, right = m.group(2).split("*")

        def items(s):
            return tuple(x.strip() for x in s.split(",") if x.strip())
        return cls(m.group(1), items(left), items(right))


@dataclass(frozen=True)
class NodeVerdict:
    node: int
    pos: str
    left: tuple
    right: tuple
    valid: bool
    rule: DepRule | None = None
    note: str = ""


def _is_subsequence(xs, ys) -> bool:
    it = iter(ys)
    return all(x in it for x in xs)


def validate_rules(g: DepGraph, pos_of: Callable[[int], str] | Mapping[int, str],
                   rules: Iterable[DepRule], exact: bool = True) -> list[NodeVerdict]:
    """Check each node's ordered left/right dependent tags against the rules.

    With ``exact=False`` a node's dependents only need to be a subsequence
    of a rule's lists.
    """
    if isinstance(pos_of, Mapping):
        pos_of = pos_of.__getitem__
    by_head: dict[str, list[DepRule]] = {}
    for r in rules:
        by_head.setdefault(r.head_pos, []).append(r)
    verdicts = []
    for node in range(g.n):
        deps = g.dependents(node)
        left = tuple(pos_of(d) for d in deps if d < node)
        right = tuple(pos_of(d) for d in deps if d > node)
        pos = pos_of(node)
        candidates = by_head.get(pos, [])
        if not candidates:
            verdicts.append(NodeVerdict(node, pos, left, right, False, None,
                                        f"no rule for {pos!r}"))
            continue
        match = None
        for r in candidates:
            if exact:
                ok = (r.left_deps, r.right_deps) == (left, right)
            else:
                ok = _is_subsequence(left, r.left_deps) and _is_subsequence(right, r.right_deps)
            if ok:
                match = r
                break
        verdicts.append(NodeVerdict(node, pos, left, right, match is not None, match,
                                    "" if match else "dependents match no rule"))
    return verdicts


def subtree_rule(g: DepGraph, pos_of: Callable[[int], str] | Mapping[int, str],
                 node: int) -> DepRule:
    """The flat rule for ``node``: every word of its subtree, left and right of it."""
    if isinstance(pos_of, Mapping):
        pos_of = pos_of.__getitem__
    below = set()
    stack = [node]
    while stack:
        h = stack.pop()
        for d in g.dependents(h):
            below.add(d)
            stack.append(d)
    return DepRule(pos_of(node),
                   tuple(pos_of(i) for i in sorted(below) if i < node),
                   tuple(pos_of(i) for i in sorted(below) if i > node))


# -- import / export -----------------------------------------------------------

class ConlluError(ValueError):
    pass


def read_conllu(text: str) -> list[tuple[Sentence, DepGraph]]:
    """Read ID, FORM, UPOS and HEAD columns; other columns are ignored."""
    out = []
    rows: list[tuple[int, str, str, int]] = []

    def flush():
        if not rows:
            return
        sent = Sentence(tuple(Token(i, form, pos) for i, (_, form, pos, _) in enumerate(rows)))
        edges = [(head - 1, idx - 1) for idx, _, _, head in rows if head != 0]
        try:
            out.append((sent, build_graph(len(rows), edges)))
        except GraphError as e:
            raise ConlluError(f"sentence ending before line {lineno}: {e}") from e
        rows.clear()

    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"line {lineno}: expected 10 columns, got {len(cols)}")
        if "-" in cols[0] or "." in cols[0]:
            warnings.warn(f"line {lineno}: skipping multi-word or empty node {cols[0]}")
            continue
        try:
            idx, head = int(cols[0]), int(cols[6])
        except ValueError as e:
            raise ConlluError(f"line {lineno}: bad ID or HEAD") from e
        if idx != len(rows) + 1:
            raise ConlluError(f"line {lineno}: ID {idx} out of sequence")
        rows.append((idx, cols[1], cols[3], head))
    lineno += 1
    flush()
    return out


def write_conllu(sentence: Sentence, g: DepGraph) -> str:
    heads = g.heads()
    lines = []
    for t in sentence:
        head = heads[t.index] + 1 if t.index in heads else 0
        cols = [str(t.index + 1), t.form, "_", t.pos, "_", "_", str(head),
                "root" if head == 0 else "dep", "_", "_"]
        lines.append("\t".join(cols))
    return "\n".join(lines) + "\n\n"


def graph_to_json(g: DepGraph, sentence: Sentence | None = None, start: int = 0) -> dict:
    doc = {
        "n": g.n,
        "root": g.root,
        "edges": [list(e) for e in sorted(g.edges)],
        "delta": {str(i): delta(g, i, start) for i in range(g.n)},
        "delta_start": start,
    }
    if sentence is not None:
        doc["tokens"] = [{"form": t.form, "pos": t.pos} for t in sentence]
    return doc


def graph_from_json(doc: Mapping) -> DepGraph:
    return build_graph(doc["n"], doc["edges"])
