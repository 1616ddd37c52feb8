from itertools import permutations
from math import comb

import pytest

from unirep.analysis import (complexity_report, enumerate_assignments, label_assignment,
                             mapping_counts, representation_count, sequence_union,
                             unified_variant)


def brute_force_union(l1, l2):
    """Every permutation of the pooled elements that keeps both orders."""
    def keeps(seq, sub):
        it = iter(seq)
        return all(x in it for x in sub)
    return {p for p in permutations(list(l1) + list(l2)) if keeps(p, l1) and keeps(p, l2)}


@pytest.mark.parametrize("f, n, count", [(3, 2, 9), (3, 7, 2187), (1, 7, 1), (2, 0, 1)])
def test_representation_count(f, n, count):
    assert representation_count(f, n) == count


def test_big_integers():
    assert representation_count(3, 200) == 3 ** 200


def test_variant():
    assert unified_variant(7) == 7
    report = complexity_report(1, 7)
    assert (report.representation_count, report.unified_variant) == (1, 7)
    assert complexity_report(3, 7).unified_variant is None


@pytest.mark.parametrize("bad", [(0, 2), (3, -1)])
def test_representation_count_preconditions(bad):
    with pytest.raises(ValueError):
        representation_count(*bad)


@pytest.mark.parametrize("n, k, expected", [(3, 7, (6, 42)), (3, 3, (6, 18)), (1, 5, (0, 0))])
def test_mapping_counts(n, k, expected):
    assert mapping_counts(n, k) == expected


def test_mapping_count_is_ordered_pairs():
    for n in range(1, 7):
        pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        assert mapping_counts(n, 1)[0] == len(pairs)


def test_assignments():
    got = enumerate_assignments(["PSG", "DG", "CG"], 2)
    assert len(got) == 9 and ("PSG", "DG") in got
    assert got == sorted(got, key=lambda a: [["PSG", "DG", "CG"].index(x) for x in a])
    assert label_assignment(("PSG", "DG")) == ["S1^PSG", "S2^DG"]
    assert enumerate_assignments(["PSG"], 0) == [()]
    assert enumerate_assignments(["UR"], 3) == [("UR", "UR", "UR")]


def test_assignment_count_matches_formula():
    for f in range(1, 4):
        for n in range(0, 5):
            labels = [f"F{i}" for i in range(f)]
            assert len(enumerate_assignments(labels, n)) == representation_count(f, n)


def test_assignment_cap():
    with pytest.raises(OverflowError):
        enumerate_assignments(["a", "b", "c"], 20, cap=1000)


def test_report_json_and_table():
    r = complexity_report(3, 2, enumerate_upto=100)
    doc = r.to_json()
    assert doc["representation_count"] == 9 and len(doc["assignments"]) == 9
    assert "2187" in complexity_report(3, 7).table()


def test_sequence_union_example():
    got = sequence_union("pq", "rs")
    assert got == {tuple(x) for x in ("pqrs", "prsq", "prqs", "rspq", "rpsq", "rpqs")}
    assert tuple("qprs") not in got and tuple("pqsr") not in got


def test_sequence_union_edges():
    assert sequence_union([], ["r", "s"]) == {("r", "s")}
    assert sequence_union(["a"], ["b"]) == {("a", "b"), ("b", "a")}
    with pytest.raises(ValueError):
        sequence_union(["a", "b"], ["b"])


@pytest.mark.parametrize("m", range(0, 8))
def test_sequence_union_against_brute_force(m):
    for n in range(0, 8 - m):
        l1 = [f"a{i}" for i in range(m)]
        l2 = [f"b{j}" for j in range(n)]
        got = sequence_union(l1, l2)
        assert got == brute_force_union(l1, l2)
        assert len(got) == comb(m + n, m)
