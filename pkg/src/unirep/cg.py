"""Categorial derivations: application, wrapping, replay and search.

A span's linear position is its *anchor*: the token that owns the root
of its category (the lexical item whose slash is currently exposed).
Forward application needs the argument's anchor to the right of the
functor's anchor, backward application to the left.  A step is *wrapped*
when the two spans' token sets are not linearly adjacent; the material
in between stays in place as live spans.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .categories import (Atomic, Category, Leftward, Lexicon, Rightward,
                         Sentence, is_functor, node_paths, parse_category,
                         print_category)

DEFAULT_BUDGET = 10 ** 6
BUDGET_ENV = "UNIREP_SEARCH_BUDGET"


class ApplicationError(ValueError):
    pass


class CategoryMismatch(ApplicationError):
    pass


class WrongSide(ApplicationError):
    pass


class ReplayError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


# provenance entry: (path in current category, owning token, path in owner's lexical category)
Provenance = tuple[tuple[str, int, str], ...]


@dataclass(frozen=True)
class SpanState:
    category: Category
    tokens: frozenset
    head: int
    provenance: Provenance

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("empty span")
        if self.head not in self.tokens:
            raise ValueError(f"head {self.head} outside span {sorted(self.tokens)}")
        paths = [p for p, _, _ in self.provenance]
        if sorted(paths) != sorted(node_paths(self.category)):
            raise ValueError("provenance does not cover the category")
        if any(o not in self.tokens for _, o, _ in self.provenance):
            raise ValueError("provenance owner outside span")

    @classmethod
    def lexical(cls, index: int, category: Category) -> "SpanState":
        prov = tuple((p, index, p) for p in node_paths(category))
        return cls(category, frozenset([index]), index, prov)

    def owner(self, path: str = "") -> int:
        return self.origin(path)[0]

    def origin(self, path: str = "") -> tuple[int, str]:
        """``(token, lexical path)`` that introduced the node at ``path``."""
        for p, o, lp in self.provenance:
            if p == path:
                return o, lp
        raise KeyError(path)

    @property
    def anchor(self) -> int:
        return self.owner("")

    def sub_provenance(self, prefix: str) -> Provenance:
        n = len(prefix)
        return tuple(sorted((p[n:], o, lp) for p, o, lp in self.provenance
                            if p.startswith(prefix)))

    def __str__(self):
        return f"{print_category(self.category)}{sorted(self.tokens)}"


def gap(f: Iterable[int], a: Iterable[int]) -> tuple[int, int]:
    """Closest pair ``(lo, hi)`` between two disjoint token sets."""
    best = None
    for x in f:
        for y in a:
            lo, hi = min(x, y), max(x, y)
            key = (hi - lo, lo)
            if best is None or key < best[0]:
                best = (key, (lo, hi))
    return best[1]


def adjacent(f: Iterable[int], a: Iterable[int]) -> bool:
    lo, hi = gap(f, a)
    return hi - lo == 1


def interveners(f: SpanState, a: SpanState, live: Iterable[SpanState]) -> list[SpanState]:
    """Live spans owning a token strictly between the closest pair of ``f`` and ``a``."""
    lo, hi = gap(f.tokens, a.tokens)
    return [s for s in live
            if s != f and s != a and any(lo < t < hi for t in s.tokens)]


def _combine(f: SpanState, a: SpanState, result_path: str) -> SpanState:
    cancel = f.category
    modifier = cancel.result == cancel.arg
    head = a.head if modifier else f.head
    return SpanState(cancel.result, f.tokens | a.tokens, head,
                     f.sub_provenance(result_path))


def _check_disjoint(f: SpanState, a: SpanState):
    if f.tokens & a.tokens:
        raise ApplicationError("spans overlap")


def forward_apply(f: SpanState, a: SpanState) -> SpanState:
    """``X/Y`` + ``Y`` (to the right) -> ``X``."""
    _check_disjoint(f, a)
    if not isinstance(f.category, Rightward):
        raise CategoryMismatch(f"{print_category(f.category)} is not a rightward functor")
    if f.category.arg != a.category:
        raise CategoryMismatch(f"expected {print_category(f.category.arg)}, "
                               f"found {print_category(a.category)}")
    if a.anchor < f.anchor:
        raise WrongSide("argument of a rightward functor lies to its left")
    return _combine(f, a, "r")


def backward_apply(a: SpanState, f: SpanState) -> SpanState:
    """``Y`` (to the left) + ``Y\\X`` -> ``X``."""
    _check_disjoint(f, a)
    if not isinstance(f.category, Leftward):
        raise CategoryMismatch(f"{print_category(f.category)} is not a leftward functor")
    if f.category.arg != a.category:
        raise CategoryMismatch(f"expected {print_category(f.category.arg)}, "
                               f"found {print_category(a.category)}")
    if a.anchor > f.anchor:
        raise WrongSide("argument of a leftward functor lies to its right")
    return _combine(f, a, "r")


@dataclass(frozen=True)
class CGStep:
    step_no: int
    functor: SpanState
    argument: SpanState
    direction: str          # side of the argument: "right" or "left"
    wrapped: bool
    intervener_count: int
    result: SpanState

    @property
    def cg_pair(self) -> tuple[int, int]:
        """Owners of the cancelled slash and of the argument's principal atom."""
        return self.functor.anchor, self.argument.anchor

    @property
    def modifier(self) -> bool:
        c = self.functor.category
        return c.result == c.arg

    def heads(self) -> tuple[int, int]:
        return self.functor.head, self.argument.head


def apply(f: SpanState, a: SpanState) -> tuple[SpanState, str]:
    """Dispatch on the functor's slash; returns ``(result, direction)``."""
    if isinstance(f.category, Rightward):
        return forward_apply(f, a), "right"
    if isinstance(f.category, Leftward):
        return backward_apply(a, f), "left"
    raise CategoryMismatch(f"{print_category(f.category)} is not a functor")


def make_step(step_no: int, f: SpanState, a: SpanState,
              live: Iterable[SpanState]) -> CGStep:
    result, direction = apply(f, a)
    k = len(interveners(f, a, live))
    return CGStep(step_no, f, a, direction, k > 0, k, result)


def wrap_apply(f: SpanState, a: SpanState, live: Iterable[SpanState],
               step_no: int = 1) -> CGStep | None:
    """Non-adjacent application over the live spans in between.

    Returns ``None`` when the spans are adjacent: the caller should use
    plain application instead.
    """
    live = list(live)
    if not interveners(f, a, live):
        return None
    return make_step(step_no, f, a, live)


@dataclass(frozen=True)
class CGDerivation:
    sentence: Sentence
    lexical_row: tuple
    steps: tuple
    final: SpanState

    @property
    def result_categories(self) -> list[Category]:
        return [s.result.category for s in self.steps]

    @property
    def wrapped_steps(self) -> list[int]:
        return [s.step_no for s in self.steps if s.wrapped]

    @property
    def n_wrapped(self) -> int:
        return len(self.wrapped_steps)

    def cancellations(self) -> frozenset:
        return frozenset((s.cg_pair, s.direction) for s in self.steps)

    def script(self) -> list[dict]:
        return [{"functor": s.functor.head, "argument": s.argument.head} for s in self.steps]

    def filler(self, token: int, lexical_path: str) -> int | None:
        """Head of the span that fills argument slot ``lexical_path + 'a'`` of ``token``."""
        for s in self.steps:
            if s.functor.origin("") == (token, lexical_path):
                return s.argument.head
        return None

    def to_json(self) -> dict:
        return {
            "tokens": [{"form": t.form, "pos": t.pos} for t in self.sentence],
            "lexical_row": [print_category(c) for c in self.lexical_row],
            "steps": [{
                "step_no": s.step_no,
                "functor": sorted(s.functor.tokens),
                "argument": sorted(s.argument.tokens),
                "functor_head": s.functor.head,
                "argument_head": s.argument.head,
                "cg_pair": list(s.cg_pair),
                "direction": s.direction,
                "wrapped": s.wrapped,
                "intervener_count": s.intervener_count,
                "result": print_category(s.result.category),
                "result_span": sorted(s.result.tokens),
            } for s in self.steps],
            "final": print_category(self.final.category),
            "head": self.final.head,
        }


def _as_category(c) -> Category:
    return parse_category(c) if isinstance(c, str) else c


def replay(sentence: Sentence, lexical_row: Sequence, script: Sequence) -> CGDerivation:
    """Execute ``script`` (pairs of functor/argument head indices) in order."""
    row = tuple(_as_category(c) for c in lexical_row)
    if len(row) != len(sentence):
        raise ReplayError(f"lexical row has {len(row)} categories for {len(sentence)} tokens")
    live = {i: SpanState.lexical(i, c) for i, c in enumerate(row)}
    steps = []
    for step_no, item in enumerate(script, 1):
        fref, aref = ((item["functor"], item["argument"]) if isinstance(item, dict) else item)
        for ref in (fref, aref):
            if ref not in live:
                raise ReplayError(f"step {step_no}: no live span headed by token {ref}")
        if fref == aref:
            raise ReplayError(f"step {step_no}: functor and argument are the same span")
        f, a = live[fref], live[aref]
        try:
            step = make_step(step_no, f, a, live.values())
        except ApplicationError as e:
            expected = print_category(f.category.arg) if is_functor(f.category) else "a functor"
            raise ReplayError(f"step {step_no}: expected {expected}, found "
                              f"{print_category(a.category)} ({e})") from e
        del live[fref], live[aref]
        live[step.result.head] = step.result
        steps.append(step)
    if len(live) != 1:
        raise ReplayError(f"script leaves {len(live)} live spans")
    (final,) = live.values()
    return CGDerivation(sentence, row, tuple(steps), final)


def derivation_from_json(doc: dict) -> CGDerivation:
    """Rebuild a derivation from :meth:`CGDerivation.to_json` output by replay."""
    sentence = Sentence.from_pairs((t["form"], t["pos"]) for t in doc["tokens"])
    script = [(s["functor_head"], s["argument_head"]) for s in doc["steps"]]
    return replay(sentence, doc["lexical_row"], script)


# -- search -----------------------------------------------------------------

def _budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


class _Search:
    def __init__(self, goal: Category, budget: int):
        self.goal = goal
        self.budget = budget
        self.expansions = 0
        self.memo: dict[frozenset, dict] = {}

    def moves(self, state: frozenset):
        spans = sorted(state, key=lambda s: (s.anchor, s.head))
        found = []
        for f in spans:
            if not is_functor(f.category):
                continue
            for a in spans:
                if a is f:
                    continue
                try:
                    result, direction = apply(f, a)
                except ApplicationError:
                    continue
                k = len(interveners(f, a, spans))
                found.append((k, f.anchor, a.anchor, f, a, result, direction))
        # adjacent first, then wrapping over increasing numbers of interveners
        found.sort(key=lambda m: m[:3])
        return found

    def solve(self, state: frozenset) -> dict:
        """Map cancellation set -> (n_wrapped, order key, moves) for the best completion."""
        if state in self.memo:
            return self.memo[state]
        if len(state) == 1:
            (only,) = state
            out = {frozenset(): (0, (), ())} if only.category == self.goal else {}
            self.memo[state] = out
            return out
        out: dict = {}
        for k, _, _, f, a, result, direction in self.moves(state):
            self.expansions += 1
            if self.expansions > self.budget:
                raise SearchBudgetExceeded(f"more than {self.budget} expansions")
            nxt = (state - {f, a}) | {result}
            # the slot's lexical origin keeps apart derivations that fill one
            # functor's slots in a different order
            mark = ((f.anchor, a.anchor), direction, f.origin("a"))
            for key, (nw, order, moves) in self.solve(nxt).items():
                full = key | {mark}
                cand = (nw + (k > 0), ((f.anchor, a.anchor),) + order, ((f, a),) + moves)
                if full not in out or cand[:2] < out[full][:2]:
                    out[full] = cand
        self.memo[state] = out
        return out


def _lexical_rows(sentence: Sentence, lexicon: Lexicon):
    choices = [sorted(lexicon.lookup(t.form, t.pos), key=print_category) for t in sentence]
    missing = [t.form for t, c in zip(sentence, choices) if not c]
    if missing:
        raise KeyError(f"no lexicon entry for {missing}")
    rows = [[]]
    for c in choices:
        rows = [r + [x] for r in rows for x in c]
    return rows


def derive(sentence: Sentence, lexicon: Lexicon, goal: Category | str = "S",
           budget: int | None = None) -> list[CGDerivation]:
    """All derivations of ``goal``, deduplicated by their cancellation sets.

    A cancellation is the functor/argument anchor pair, the direction and
    the lexical slot consumed.

    Ordered by number of wrapped steps, then by step order.  Raises
    :class:`SearchBudgetExceeded` past ``budget`` expansions (default from
    ``$UNIREP_SEARCH_BUDGET`` or 10**6).
    """
    goal = _as_category(goal)
    search = _Search(goal, _budget(budget))
    best: dict = {}
    for row in _lexical_rows(sentence, lexicon):
        start = frozenset(SpanState.lexical(i, c) for i, c in enumerate(row))
        search.memo.clear()
        for key, (nw, order, moves) in search.solve(start).items():
            if key not in best or (nw, order) < best[key][:2]:
                best[key] = (nw, order, moves, row)
    out = []
    for nw, order, moves, row in sorted(best.values(), key=lambda v: v[:2]):
        script = [(f.head, a.head) for f, a in moves]
        out.append(replay(sentence, row, script))
    return out
