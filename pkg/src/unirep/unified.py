"""The unified representation: δ-annotated categories evolving step by step.

Each cell is a δ-expression: a category whose atoms are POS handles,
printed ``δ(V1)``.  Lexical cells are built from the derivation:

* a word that never owns a cancelled slash is just ``δ(own tag)``;
* a modifier-shaped word shows only the pair it forms,
  ``δ(own)/δ(filler)`` or ``δ(filler)\\δ(own)``;
* any other word keeps its category shape, the result-most atom becoming
  ``δ(own)`` and each argument slot ``δ(head of the span filling it)``.

A step cancels in δ-space when the functor's cell has its category's
shape; otherwise (a collapsed modifier) the result is re-rendered from the
result span, using the span's head for the result atoms.  Literal
cancellation keeps the functor's δ-term even when the functor is a
modifier, so a cell's expression may name a dependent while its ``head``
names the governing word; a slot accepts either.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .categories import (Atomic, Category, Leftward, Rightward, is_functor,
                         is_modifier, parse_delta, print_category,
                         print_delta, same_shape, target)
from .cg import CGDerivation, SpanState
from .correspondence import cg_to_dg, verify_equivalences
from .dg import DepGraph, build_graph, delta

PLACEHOLDER = "..."
SCHEMA_VERSION = 1


class UnifiedError(ValueError):
    pass


class UnfilledSlot(UnifiedError):
    pass


@dataclass(frozen=True)
class Cell:
    column: int
    expr: Category | None          # None marks an elided placeholder
    head: str | None = None        # δ-term of the cell's dependency head
    category: Category | None = None

    @property
    def placeholder(self) -> bool:
        return self.expr is None

    @property
    def faithful(self) -> bool:
        return self.category is not None and same_shape(self.expr, self.category)

    def text(self) -> str:
        return PLACEHOLDER if self.expr is None else print_delta(self.expr)


@dataclass(frozen=True)
class TableStep:
    step_no: int
    functor_column: int
    argument_column: int
    direction: str
    modifier: bool
    functor_term: str
    argument_term: str


@dataclass
class UnifiedTable:
    columns: tuple                  # (form, pos) pairs; pos None for placeholders
    rows: list
    steps: list
    values: dict = field(default_factory=dict)

    @property
    def offset(self) -> int:
        """1 when an elision row precedes the first step."""
        return len(self.rows) - len(self.steps) - 1

    @property
    def final(self) -> Category | None:
        last = [c for c in self.rows[-1] if not c.placeholder]
        return last[0].expr if len(last) == 1 else None

    @property
    def root(self) -> str | None:
        last = [c for c in self.rows[-1] if not c.placeholder]
        return last[0].head if len(last) == 1 else None

    def row_before(self, step_no: int) -> tuple:
        return self.rows[self.offset + step_no - 1]


def _tag(d: CGDerivation, i: int) -> str:
    return d.sentence[i].pos


def render_span(span: SpanState, d: CGDerivation) -> Category:
    """δ-expression for a span: result atoms -> its head, slots -> their fillers."""
    def rec(c: Category, path: str) -> Category:
        if isinstance(c, Atomic):
            return Atomic(_tag(d, span.head))
        owner, lpath = span.origin(path)
        filler = d.filler(owner, lpath)
        if filler is None:
            raise UnfilledSlot(f"slot {lpath + 'a'!r} of {d.sentence[owner].form!r} "
                               "is never filled")
        slot = Atomic(_tag(d, filler))
        result = rec(c.result, path + "r")
        return Rightward(result, slot) if isinstance(c, Rightward) else Leftward(slot, result)
    return rec(span.category, "")


def to_delta_expr(token: int, d: CGDerivation, g: DepGraph | None = None) -> Category:
    """Lexical δ-expression of ``token`` within derivation ``d``.

    ``g`` is accepted for symmetry with :func:`build_unified`; the symbolic
    expression does not depend on it.
    """
    cat = d.lexical_row[token]
    own = Atomic(_tag(d, token))
    is_functor_word = any(s.cg_pair[0] == token for s in d.steps)
    if not is_functor(cat) or not is_functor_word:
        return own
    if is_modifier(cat):
        filler = Atomic(_tag(d, d.filler(token, "")))
        return Rightward(own, filler) if isinstance(cat, Rightward) else Leftward(filler, own)
    return render_span(SpanState.lexical(token, cat), d)


def _slot_matches(slot: Category, arg: Cell) -> bool:
    if slot == arg.expr:
        return True
    return isinstance(slot, Atomic) and slot.name in (target(arg.expr).name, arg.head)


def build_unified(d: CGDerivation, g: DepGraph | None = None,
                  delta_start: int | None = None) -> UnifiedTable:
    """Unified table for a complete derivation checked against graph ``g``.

    ``g`` defaults to the graph read off the derivation.  With
    ``delta_start`` set, numeric depth values are attached per POS handle.
    """
    if g is None:
        g = cg_to_dg(d)
    report = verify_equivalences(g, d)
    if not report.passed:
        detail = "; ".join(m for _, m in report.failures) or (
            f"graph mismatch: missing {report.missing_edges}, extra {report.extra_edges}")
        raise UnifiedError(f"equivalences do not hold: {detail}")
    handles = [t.pos for t in d.sentence]
    if len(set(handles)) != len(handles):
        raise UnifiedError("POS handles must be unique within the sentence")

    live = {t.index: Cell(t.index, to_delta_expr(t.index, d), t.pos, d.lexical_row[t.index])
            for t in d.sentence}
    rows = [tuple(sorted(live.values(), key=lambda c: c.column))]
    steps = []
    for s in d.steps:
        cf, ca = live.pop(s.functor.head), live.pop(s.argument.head)
        if cf.faithful:
            if not _slot_matches(cf.expr.arg, ca):
                raise UnifiedError(f"step {s.step_no}: {print_delta(cf.expr)} cannot cancel "
                                   f"{print_delta(ca.expr)}")
            expr = cf.expr.result
        else:
            expr = render_span(s.result, d)
        live[s.result.head] = Cell(s.result.anchor, expr, _tag(d, s.result.head),
                                   s.result.category)
        steps.append(TableStep(s.step_no, cf.column, ca.column, s.direction, s.modifier,
                               cf.head, ca.head))
        rows.append(tuple(sorted(live.values(), key=lambda c: c.column)))
    values = {}
    if delta_start is not None:
        values = {t.pos: delta(g, t.index, delta_start) for t in d.sentence}
    return UnifiedTable(tuple((t.form, t.pos) for t in d.sentence), rows, steps, values)


def abbreviated(columns: Sequence[str], delta_row: Sequence[str | None],
                steps: Sequence) -> UnifiedTable:
    """Table over partially displayed material.

    ``columns`` are surface strings, ``"..."`` marking elided material
    whose ``delta_row`` entry is ``None`` (or ``"..."``).  ``steps`` are
    ``(functor column, argument column)`` pairs; cancellation is purely in
    δ-space and placeholders never take part.
    """
    if len(columns) != len(delta_row):
        raise UnifiedError("columns and δ-row differ in length")
    cells = []
    for i, (col, text) in enumerate(zip(columns, delta_row)):
        if text is None or text == PLACEHOLDER or col == PLACEHOLDER:
            cells.append(Cell(i, None))
        else:
            expr = parse_delta(text) if isinstance(text, str) else text
            cells.append(Cell(i, expr, target(expr).name))
    rows = [tuple(cells)]
    live = {c.column: c for c in cells if not c.placeholder}
    if len(live) != len(cells):
        rows.append(tuple(live.values()))
    table_steps = []
    for step_no, item in enumerate(steps, 1):
        fcol, acol = (item["functor"], item["argument"]) if isinstance(item, Mapping) else item
        if fcol not in live or acol not in live:
            raise UnifiedError(f"step {step_no}: column is not a live realized cell")
        cf, ca = live.pop(fcol), live.pop(acol)
        fx = cf.expr
        direction = "right" if acol > fcol else "left"
        want = Rightward if direction == "right" else Leftward
        if not isinstance(fx, want) or fx.arg != ca.expr:
            raise UnifiedError(f"step {step_no}: {print_delta(fx)} cannot take "
                               f"{print_delta(ca.expr)} on its {direction}")
        modifier = fx.result == fx.arg
        head = ca.head if modifier else cf.head
        live[fcol] = Cell(fcol, fx.result, head)
        live = dict(sorted(live.items()))
        table_steps.append(TableStep(step_no, fcol, acol, direction, modifier,
                                     cf.head, ca.head))
        rows.append(tuple(live.values()))
    cols = tuple((c, None if c == PLACEHOLDER or cell.placeholder else cell.head)
                 for c, cell in zip(columns, cells))
    return UnifiedTable(cols, rows, table_steps)


def read_dependencies(t: UnifiedTable) -> DepGraph:
    """Dependency graph over the realized columns, read from the cancellations."""
    realized = [i for i, (_, pos) in enumerate(t.columns) if pos is not None]
    by_term: dict[str, int] = {}
    for k, i in enumerate(realized):
        pos = t.columns[i][1]
        if pos in by_term:
            raise UnifiedError(f"δ-term {pos!r} names two columns")
        by_term[pos] = k
    edges = []
    for s in t.steps:
        f, a = by_term[s.functor_term], by_term[s.argument_term]
        edges.append((a, f) if s.modifier else (f, a))
    return build_graph(len(realized), edges)


def isomorphic(t1: UnifiedTable, t2: UnifiedTable) -> bool:
    """Same table up to a bijective renaming of δ-terms."""
    fwd: dict[str, str] = {}
    back: dict[str, str] = {}

    def bind(a, b) -> bool:
        if a is None or b is None:
            return a is b
        if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
            return False
        return True

    def same(x: Category | None, y: Category | None) -> bool:
        if x is None or y is None:
            return x is None and y is None
        if isinstance(x, Atomic) or isinstance(y, Atomic):
            return isinstance(x, Atomic) and isinstance(y, Atomic) and bind(x.name, y.name)
        return type(x) is type(y) and same(x.result, y.result) and same(x.arg, y.arg)

    if len(t1.columns) != len(t2.columns) or len(t1.rows) != len(t2.rows):
        return False
    for r1, r2 in zip(t1.rows, t2.rows):
        if len(r1) != len(r2):
            return False
        for c1, c2 in zip(r1, r2):
            if c1.column != c2.column or not same(c1.expr, c2.expr) or not bind(c1.head, c2.head):
                return False
    for s1, s2 in zip(t1.steps, t2.steps):
        if (s1.functor_column, s1.argument_column, s1.direction, s1.modifier) != \
                (s2.functor_column, s2.argument_column, s2.direction, s2.modifier):
            return False
    return len(t1.steps) == len(t2.steps)


# -- rendering ---------------------------------------------------------------

def _row_labels(t: UnifiedTable) -> list[str]:
    labels = [""] * len(t.rows)
    for s in t.steps:
        labels[t.offset + s.step_no - 1] = f"Step {s.step_no}"
    if not t.steps:
        labels[0] = "Step 1" if len(t.rows) == 1 else ""
    return labels


def _glyphs(t: UnifiedTable) -> dict[tuple[int, int], str]:
    marks = {}
    for s in t.steps:
        row = t.offset + s.step_no - 1
        right = s.argument_column > s.functor_column
        marks[(row, s.functor_column)] = "→" if right else "←"
        marks[(row, s.argument_column)] = "←" if right else "→"
    return marks


def render_text(t: UnifiedTable) -> str:
    n = len(t.columns)
    marks = _glyphs(t)
    grid = [[""] + [form for form, _ in t.columns],
            [""] + [pos or "" for _, pos in t.columns]]
    for r, (label, row) in enumerate(zip(_row_labels(t), t.rows)):
        line = [label] + [""] * n
        for cell in row:
            text = cell.text()
            if (r, cell.column) in marks:
                text += " " + marks[(r, cell.column)]
            line[cell.column + 1] = text
        grid.append(line)
    widths = [max(len(line[i]) for line in grid) for i in range(n + 1)]
    out = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in grid]
    if t.values:
        out.append("δ values: " + ", ".join(f"{k}={v}" for k, v in t.values.items()))
    return "\n".join(out) + "\n"


def table_to_json(t: UnifiedTable) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "columns": [{"index": i, "form": f, "pos": p} for i, (f, p) in enumerate(t.columns)],
        "rows": [[{"column": c.column, "expr": c.text(), "head": c.head,
                   "category": print_category(c.category) if c.category is not None else None}
                  for c in row] for row in t.rows],
        "steps": [{"step_no": s.step_no, "functor_column": s.functor_column,
                   "argument_column": s.argument_column, "direction": s.direction,
                   "modifier": s.modifier, "functor_term": s.functor_term,
                   "argument_term": s.argument_term} for s in t.steps],
        "final": print_delta(t.final) if t.final is not None else None,
        "root": t.root,
        "values": t.values,
    }


def _latex_cell(text: str) -> str:
    text = text.replace("\\", r"\backslash ").replace("δ", r"\delta")
    return f"${text}$" if text and text != PLACEHOLDER else (r"\ldots" if text else "")


def render_latex(t: UnifiedTable) -> str:
    n = len(t.columns)
    lines = [r"\begin{tabular}{l" + "c" * n + "}",
             " & ".join([""] + [f for f, _ in t.columns]) + r" \\",
             " & ".join([""] + [p or "" for _, p in t.columns]) + r" \\",
             r"\hline"]
    marks = _glyphs(t)
    for r, (label, row) in enumerate(zip(_row_labels(t), t.rows)):
        cells = [""] * n
        for cell in row:
            text = _latex_cell(cell.text())
            if (r, cell.column) in marks:
                text += r" $\rightarrow$" if marks[(r, cell.column)] == "→" else r" $\leftarrow$"
            cells[cell.column] = text
        lines.append(" & ".join([label] + cells) + r" \\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


def render(t: UnifiedTable, format: str = "text"):
    if format == "text":
        return render_text(t)
    if format == "json":
        return table_to_json(t)
    if format == "latex":
        return render_latex(t)
    raise ValueError(f"unknown format {format!r}")
