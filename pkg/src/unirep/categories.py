"""Slash categories, tokens, sentences and lexicons.

Categories follow the Lambek convention: ``X/Y`` takes a ``Y`` on its right
and yields ``X``; ``A\\B`` takes an ``A`` on its left and yields ``B``.
Nested categories must be parenthesized in the textual notation.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Union


class CategorySyntaxError(ValueError):
    """Malformed category notation."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class Atomic:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be non-empty")

    def __str__(self) -> str:
        return print_category(self)


@dataclass(frozen=True)
class Rightward:
    """``result/arg``: seeks ``arg`` to the right."""
    result: "Category"
    arg: "Category"

    def __str__(self) -> str:
        return print_category(self)


@dataclass(frozen=True)
class Leftward:
    """``arg\\result``: seeks ``arg`` to the left."""
    arg: "Category"
    result: "Category"

    def __str__(self) -> str:
        return print_category(self)


Category = Union[Atomic, Rightward, Leftward]
Functor = (Rightward, Leftward)


def is_functor(c: Category) -> bool:
    return isinstance(c, Functor)


def is_modifier(c: Category) -> bool:
    """True for ``X/X`` and ``X\\X``."""
    return is_functor(c) and c.result == c.arg


def target(c: Category) -> Atomic:
    """The result-most atom of ``c``."""
    while is_functor(c):
        c = c.result
    return c


def atoms(c: Category) -> Iterator[Atomic]:
    if isinstance(c, Atomic):
        yield c
    else:
        yield from atoms(c.result if isinstance(c, Rightward) else c.arg)
        yield from atoms(c.arg if isinstance(c, Rightward) else c.result)


def depth(c: Category) -> int:
    if isinstance(c, Atomic):
        return 0
    return 1 + max(depth(c.result), depth(c.arg))


def subcategory(c: Category, path: str) -> Category:
    """Follow ``path`` (a string over ``r``/``a``) from the root of ``c``."""
    for step in path:
        if not is_functor(c):
            raise KeyError(path)
        c = c.result if step == "r" else c.arg
    return c


def node_paths(c: Category, prefix: str = "") -> Iterator[str]:
    """Every node path of ``c`` in pre-order."""
    yield prefix
    if is_functor(c):
        yield from node_paths(c.result, prefix + "r")
        yield from node_paths(c.arg, prefix + "a")


def same_shape(a: Category, b: Category) -> bool:
    """Structural isomorphism ignoring atom names."""
    if isinstance(a, Atomic) or isinstance(b, Atomic):
        return isinstance(a, Atomic) and isinstance(b, Atomic)
    return (type(a) is type(b) and same_shape(a.result, b.result)
            and same_shape(a.arg, b.arg))


def relabel(c: Category, fn) -> Category:
    if isinstance(c, Atomic):
        return Atomic(fn(c.name))
    if isinstance(c, Rightward):
        return Rightward(relabel(c.result, fn), relabel(c.arg, fn))
    return Leftward(relabel(c.arg, fn), relabel(c.result, fn))


# -- notation ----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_DELTA = re.compile(r"(?:δ|delta)\(\s*([^()\s]+)\s*\)")
_CLOSE = {"(": ")", "[": "]"}


class _Parser:
    def __init__(self, text: str, delta: bool):
        self.text = text
        self.pos = 0
        self.delta = delta

    def error(self, message: str, pos: int | None = None):
        raise CategorySyntaxError(message, self.text,
                                  self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Category:
        if not self.text.strip():
            self.error("empty category")
        result = self.expr()
        if self.peek():
            if self.peek() in "/\\":
                self.error("ambiguous unparenthesized nesting")
            self.error(f"unexpected character {self.peek()!r}")
        return result

    def expr(self) -> Category:
        left = self.term()
        ch = self.peek()
        if ch not in ("/", "\\"):
            return left
        self.pos += 1
        right = self.term()
        if self.peek() in ("/", "\\"):
            self.error("ambiguous unparenthesized nesting")
        return Rightward(left, right) if ch == "/" else Leftward(left, right)

    def term(self) -> Category:
        ch = self.peek()
        if ch in _CLOSE:
            start = self.pos
            self.pos += 1
            inner = self.expr()
            if self.peek() != _CLOSE[ch]:
                self.error(f"unbalanced {ch!r} opened at {start}")
            self.pos += 1
            return inner
        if not ch:
            self.error("unexpected end of input")
        if self.delta:
            m = _DELTA.match(self.text, self.pos)
            if not m:
                self.error(f"expected δ-term, found {ch!r}")
            self.pos = m.end()
            return Atomic(m.group(1))
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error(f"unknown character {ch!r}")
        self.pos = m.end()
        return Atomic(m.group(0))


def parse_category(text: str) -> Category:
    """Parse fully parenthesized slash notation, e.g. ``(N\\S)/N``."""
    return _Parser(text, delta=False).parse()


def print_category(c: Category) -> str:
    if isinstance(c, Atomic):
        return c.name

    def wrap(x: Category) -> str:
        return f"({print_category(x)})" if is_functor(x) else x.name

    if isinstance(c, Rightward):
        return f"{wrap(c.result)}/{wrap(c.arg)}"
    return f"{wrap(c.arg)}\\{wrap(c.result)}"


def parse_delta(text: str) -> Category:
    """Parse a δ-expression such as ``[δ(Conj)/δ(V2)]/δ(V3)``.

    The result is a :data:`Category` whose atom names are POS handles.
    """
    return _Parser(text, delta=True).parse()


def print_delta(c: Category, brackets: str = "[]") -> str:
    if isinstance(c, Atomic):
        return f"δ({c.name})"
    o, e = brackets

    def wrap(x: Category) -> str:
        return f"{o}{print_delta(x, brackets)}{e}" if is_functor(x) else print_delta(x)

    if isinstance(c, Rightward):
        return f"{wrap(c.result)}/{wrap(c.arg)}"
    return f"{wrap(c.arg)}\\{wrap(c.result)}"


# -- tokens, sentences, lexicons ---------------------------------------------

@dataclass(frozen=True)
class Token:
    index: int
    form: str
    pos: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a sentence needs at least one token")
        for i, tok in enumerate(self.tokens):
            if tok.index != i:
                raise ValueError(f"token {tok.form!r} has index {tok.index}, expected {i}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "Sentence":
        return cls(tuple(Token(i, f, p) for i, (f, p) in enumerate(pairs)))

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i: int) -> Token:
        return self.tokens[i]

    def __iter__(self):
        return iter(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def tags(self) -> list[str]:
        return [t.pos for t in self.tokens]

    def index_of_pos(self, pos: str) -> int:
        hits = [t.index for t in self.tokens if t.pos == pos]
        if len(hits) != 1:
            raise KeyError(f"POS handle {pos!r} is not unique in the sentence")
        return hits[0]


class LexiconError(ValueError):
    pass


@dataclass
class Lexicon:
    """Maps ``(form, pos)`` pairs to sets of categories."""
    entries: dict[tuple[str, str], set] = field(default_factory=lambda: defaultdict(set))
    alphabet: set[str] | None = None

    def add(self, form: str, pos: str, category: Category | str):
        if isinstance(category, str):
            category = parse_category(category)
        if self.alphabet is not None:
            unknown = {a.name for a in atoms(category)} - self.alphabet
            if unknown:
                raise LexiconError(f"atoms {sorted(unknown)} not in alphabet for {form!r}")
        self.entries.setdefault((form, pos), set()).add(category)

    @property
    def atoms(self) -> set[str]:
        found = {a.name for cats in self.entries.values() for c in cats for a in atoms(c)}
        return set(self.alphabet) if self.alphabet is not None else found

    def lookup(self, form: str, pos: str | None = None) -> set:
        if pos is not None and (form, pos) in self.entries:
            return set(self.entries[(form, pos)])
        found = set()
        for (f, _), cats in self.entries.items():
            if f == form:
                found |= cats
        return found

    def tags_for(self, form: str) -> set[str]:
        return {p for (f, p) in self.entries if f == form}

    def missing(self, sentence: Sentence) -> list[Token]:
        return [t for t in sentence if not self.lookup(t.form, t.pos)]

    def __contains__(self, form: str) -> bool:
        return any(f == form for f, _ in self.entries)


def read_lexicon(path: str | Path) -> Lexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def parse_lexicon(text: str) -> Lexicon:
    """Read ``form<TAB>pos<TAB>category`` lines; ``#`` starts a comment line."""
    lex = Lexicon()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            raise LexiconError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        form, pos, notation = (p.strip() for p in parts)
        try:
            lex.add(form, pos, notation)
        except CategorySyntaxError as e:
            raise LexiconError(f"line {lineno}: {e}") from e
    return lex


def format_lexicon(lex: Lexicon) -> str:
    lines = []
    for (form, pos), cats in lex.entries.items():
        for c in sorted(cats, key=print_category):
            lines.append(f"{form}\t{pos}\t{print_category(c)}")
    return "\n".join(lines) + "\n"
