"""Counting representations and translations across formalisms; sequence union."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Sequence

DEFAULT_CAP = 10 ** 6
FORMALISMS = ("PSG", "DG", "CG")


def representation_count(formalisms: int, sentences: int) -> int:
    """``formalisms ** sentences``: one formalism chosen per sentence."""
    if formalisms < 1 or sentences < 0:
        raise ValueError("need formalisms >= 1 and sentences >= 0")
    return formalisms ** sentences


def unified_variant(sentences: int) -> int:
    """The alternative single-formalism count ``1**n * n`` (one per sentence)."""
    if sentences < 0:
        raise ValueError("sentences must be >= 0")
    return 1 ** sentences * sentences


def enumerate_assignments(formalisms: Sequence[str], sentences: int,
                          cap: int = DEFAULT_CAP) -> list[tuple[str, ...]]:
    """Every assignment of a formalism to each sentence, lexicographically."""
    total = representation_count(len(formalisms), sentences)
    if total > cap:
        raise OverflowError(f"{total} assignments exceed the cap of {cap}")
    return list(product(formalisms, repeat=sentences))


def label_assignment(assignment: Sequence[str]) -> list[str]:
    return [f"S{i}^{f}" for i, f in enumerate(assignment, 1)]


def mapping_counts(formalisms: int, sentences: int) -> tuple[int, int]:
    """Directed translations per item, ``N(N-1)``, and the total over ``k`` items."""
    if formalisms < 1 or sentences < 0:
        raise ValueError("need formalisms >= 1 and sentences >= 0")
    per_item = formalisms * (formalisms - 1)
    return per_item, sentences * per_item


@dataclass(frozen=True)
class ComplexityReport:
    n_sentences: int
    n_formalisms: int
    representation_count: int
    mapping_count_per_item: int
    total_mappings: int
    unified_variant: int | None = None
    assignments: tuple | None = None

    def to_json(self) -> dict:
        doc = {
            "n_sentences": self.n_sentences,
            "n_formalisms": self.n_formalisms,
            "representation_count": self.representation_count,
            "mapping_count_per_item": self.mapping_count_per_item,
            "total_mappings": self.total_mappings,
            "unified_variant": self.unified_variant,
        }
        if self.assignments is not None:
            doc["assignments"] = [list(a) for a in self.assignments]
        return doc

    def table(self) -> str:
        rows = [("formalisms", self.n_formalisms),
                ("sentences", self.n_sentences),
                ("representations", self.representation_count),
                ("mappings per item", self.mapping_count_per_item),
                ("total mappings", self.total_mappings)]
        if self.unified_variant is not None:
            rows.append(("unified variant (1^n x n)", self.unified_variant))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def complexity_report(formalisms: int, sentences: int, enumerate_upto: int = 0,
                      labels: Sequence[str] | None = None) -> ComplexityReport:
    per_item, total = mapping_counts(formalisms, sentences)
    count = representation_count(formalisms, sentences)
    assignments = None
    if enumerate_upto and count <= enumerate_upto:
        if labels is None:
            labels = FORMALISMS if formalisms == 3 else tuple(f"F{i}" for i in range(1, formalisms + 1))
        assignments = tuple(enumerate_assignments(labels, sentences))
    return ComplexityReport(sentences, formalisms, count, per_item, total,
                            unified_variant(sentences) if formalisms == 1 else None,
                            assignments)


def sequence_union(l1: Sequence[Hashable], l2: Sequence[Hashable]) -> set[tuple]:
    """All interleavings of ``l1`` and ``l2`` that keep each list's order."""
    if set(l1) & set(l2):
        raise ValueError(f"lists share elements: {sorted(map(str, set(l1) & set(l2)))}")
    l1, l2 = tuple(l1), tuple(l2)
    out: set[tuple] = set()

    def go(i: int, j: int, acc: tuple):
        if i == len(l1) and j == len(l2):
            out.add(acc)
            return
        if i < len(l1):
            go(i + 1, j, acc + (l1[i],))
        if j < len(l2):
            go(i, j + 1, acc + (l2[j],))

    go(0, 0, ())
    return out
