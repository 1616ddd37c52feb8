"""Randomised invariants; every suite draws at least 1000 cases."""
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import categories, derivations, parent_arrays, ps_trees
from unirep.categories import parse_category, parse_delta, print_category, print_delta
from unirep.cg import replay
from unirep.correspondence import cg_to_dg
from unirep.dg import build_graph, delta, projectivity
from unirep.psg import (cg_to_psg, crossing_report, derives, extract_rules, is_contiguous,
                        terminal_string, walk)

THOROUGH = settings(max_examples=1000, deadline=None)


@THOROUGH
@given(categories(max_depth=5))
def test_category_round_trip(c):
    assert parse_category(print_category(c)) == c
    assert parse_delta(print_delta(c)) == c


@THOROUGH
@given(parent_arrays(), st.sampled_from([0, 1]))
def test_delta_monotone(tree, start):
    n, edges = tree
    g = build_graph(n, edges)
    assert delta(g, g.root, start) == start
    for h, d in edges:
        assert delta(g, d, start) == delta(g, h, start) + 1
    assert all(delta(g, i, 1) == delta(g, i, 0) + 1 for i in range(n))


@THOROUGH
@given(parent_arrays(max_nodes=12))
def test_projectivity_survives_mirroring(tree):
    # the graph carries no forms or tags at all; reversing the word order
    # mirrors every interval and so preserves crossings
    n, edges = tree
    g = build_graph(n, edges)
    mirrored = build_graph(n, [(n - 1 - h, n - 1 - d) for h, d in edges])
    assert projectivity(g).projective == projectivity(mirrored).projective


@THOROUGH
@given(derivations())
def test_span_conservation(gen):
    d = replay(gen.sentence, gen.lexical_row, gen.script)
    everything = frozenset(range(len(d.sentence)))
    live = {i: frozenset([i]) for i in everything}
    for s in d.steps:
        assert not s.functor.tokens & s.argument.tokens
        assert s.result.tokens == s.functor.tokens | s.argument.tokens
        del live[s.functor.head], live[s.argument.head]
        live[s.result.head] = s.result.tokens
        pieces = list(live.values())
        assert frozenset().union(*pieces) == everything
        assert sum(map(len, pieces)) == len(everything)
    assert d.final.tokens == everything


@THOROUGH
@given(derivations())
def test_crossing_iff_wrapped(gen):
    d = replay(gen.sentence, gen.lexical_row, gen.script)
    for s in d.steps:
        gap = min(abs(x - y) for x in s.functor.tokens for y in s.argument.tokens)
        assert s.wrapped == (gap > 1)
    tree = cg_to_psg(d)
    assert bool(crossing_report(tree)) == bool(d.wrapped_steps) == gen.wrapped
    assert terminal_string(tree) == d.sentence.forms


@THOROUGH
@given(derivations(contiguous=True))
def test_contiguous_derivations_never_wrap(gen):
    d = replay(gen.sentence, gen.lexical_row, gen.script)
    assert d.wrapped_steps == []
    assert all(is_contiguous(n.yield_) for _, n in walk(cg_to_psg(d)))
    assert projectivity(cg_to_dg(d)).projective


@THOROUGH
@given(ps_trees())
def test_rules_regenerate_tree(tree):
    rules = extract_rules(tree)
    assert derives(rules, tree)
    for _, node in walk(tree):
        assert node.yield_ == frozenset().union(*(c.yield_ for c in node.children))


@THOROUGH
@given(derivations())
def test_rules_regenerate_derived_tree(gen):
    tree = cg_to_psg(replay(gen.sentence, gen.lexical_row, gen.script))
    rules = extract_rules(tree)
    assert derives(rules, tree)
    assert all(not derives(rules - {r}, tree) for r in rules)
