import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms import isomorphism

from catalog import NAMED_LABELS, complete, is_subgraph, named, path
from coloring import ColoredCompleteGraph, from_rows, monochromatic
from constructions import pentagon_base, witness_f9_f10, witness_f12_f13
from detect import (FACT_IDS, FAMILY_FACTS, SECOND_PART_READING, anchored_plans, audit_facts, check_forbid,
                    find_mono_copy, find_mono_copy_through_edge, find_rainbow_triangle)
from gallai import InvalidPartitionError, find_gallai_partition, partition_from_parts, substitute


def _random_graph(rng, n, k):
    m = np.zeros((n, n), dtype=int)
    iu = np.triu_indices(n, 1)
    m[iu] = rng.integers(1, k + 1, size=iu[0].size)
    return ColoredCompleteGraph(m + m.T, k)


def _naive_rainbow(g):
    for a, b, c in itertools.combinations(range(g.n), 3):
        if len({g.color(a, b), g.color(a, c), g.color(b, c)}) == 3:
            return a, b, c
    return None


def _class_graph(g, color):
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from((u, v) for u, v, c in g.edges() if c == color)
    return graph


def _oracle_mono(g, h):
    pattern = h.to_networkx()
    return any(isomorphism.GraphMatcher(_class_graph(g, c), pattern).subgraph_is_monomorphic()
               for c in g.colors_used)


def test_monochromatic_graph_has_no_rainbow_triangle():
    assert find_rainbow_triangle(monochromatic(10)) is None


def test_three_coloured_triangle():
    g = from_rows([[1, 2], [3]])
    assert find_rainbow_triangle(g) == (0, 1, 2)


def test_rainbow_matches_naive_loop(rng):
    for _ in range(300):
        g = _random_graph(rng, int(rng.integers(1, 16)), int(rng.integers(1, 5)))
        assert find_rainbow_triangle(g) == _naive_rainbow(g)


def test_mono_k5_contains_every_named_pattern():
    g = monochromatic(5)
    for label in NAMED_LABELS:
        embedding = find_mono_copy(g, named(label))
        assert embedding is not None
        assert embedding.is_valid(g)


def test_pentagon_has_no_mono_triangle():
    assert find_mono_copy(pentagon_base(1, 2), complete(3)) is None


def test_pattern_larger_than_host():
    with pytest.raises(ValueError, match="larger than host"):
        find_mono_copy(monochromatic(4), named('bull'))


def test_colour_restriction():
    g = from_rows([[1, 1, 2], [1, 2], [2]])
    assert find_mono_copy(g, complete(3), color=2) is None
    embedding = find_mono_copy(g, complete(3), color=1)
    assert sorted(embedding.image) == [0, 1, 2]
    assert embedding.color == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=15, max_size=15))
def test_every_two_colouring_of_k6_has_mono_banner(colors):
    rows, it = [], iter(colors)
    for u in range(5):
        rows.append([next(it) for _ in range(5 - u)])
    g = from_rows(rows, k=2)
    embedding = find_mono_copy(g, named('banner'))
    assert embedding is not None
    assert embedding.is_valid(g)


def test_mono_copy_matches_networkx(rng):
    patterns = [named(label) for label in NAMED_LABELS]
    for _ in range(120):
        g = _random_graph(rng, int(rng.integers(5, 13)), int(rng.integers(1, 4)))
        for h in patterns:
            embedding = find_mono_copy(g, h)
            assert (embedding is not None) == _oracle_mono(g, h), h.name
            if embedding is not None:
                assert embedding.is_valid(g)


def test_monotone_under_subgraphs(rng):
    patterns = [named(label) for label in NAMED_LABELS]
    for _ in range(40):
        g = _random_graph(rng, int(rng.integers(5, 10)), 2)
        present = {h.name for h in patterns if find_mono_copy(g, h) is not None}
        for h1, h2 in itertools.product(patterns, repeat=2):
            if h2.name in present and is_subgraph(h1, h2):
                assert h1.name in present


def test_anchored_finder_uses_the_edge():
    g = from_rows([[1, 1, 2, 2], [1, 2, 2], [2, 2], [1]])
    adj = g.adjacency(1)
    universe = (1 << g.n) - 1
    image = find_mono_copy_through_edge(adj, anchored_plans(complete(3)), 1, 2, universe)
    assert sorted(image) == [0, 1, 2]
    assert find_mono_copy_through_edge(adj, anchored_plans(complete(3)), 3, 4, universe) is None


def test_check_forbid_reports_each_constraint():
    g = from_rows([[1, 2, 1], [3, 1], [1]])
    violations = check_forbid(g, True, [path(3), complete(3)])
    kinds = [v.kind for v in violations]
    assert kinds[0] == 'rainbow_k3'
    assert violations[0].triangle == (0, 1, 2)
    assert violations[1].embedding.pattern == path(3)
    assert check_forbid(monochromatic(3), True, [path(4)]) == []


def test_towers_avoid_rainbow_triangles():
    assert find_rainbow_triangle(witness_f9_f10(4)) is None
    assert find_rainbow_triangle(witness_f12_f13(4)) is None


@pytest.mark.parametrize('family', ['f9', 'f10'])
def test_odd_tower_satisfies_f10_facts(family):
    g = witness_f9_f10(3)
    reports = audit_facts(g, find_gallai_partition(g), family=family)
    assert [r.fact_id for r in reports] == list(FAMILY_FACTS[family])
    assert all(r.holds for r in reports)
    assert all(r.instances > 0 for r in reports)


@pytest.mark.parametrize('family', ['f12', 'f13'])
def test_odd_tower_satisfies_f12_f13_facts(family):
    g = witness_f12_f13(3)
    reports = audit_facts(g, find_gallai_partition(g), family=family)
    assert all(r.holds for r in reports)
    by_id = {r.fact_id: r for r in reports}
    assert by_id['F4.1.2'].note == SECOND_PART_READING
    if family == 'f12':
        assert by_id['F4.2.1'].instances > 0


def test_even_towers_satisfy_facts():
    for witness, families in ((witness_f9_f10(4), ('f10',)), (witness_f12_f13(4), ('f12', 'f13'))):
        p = find_gallai_partition(witness)
        assert p.m == 5
        for family in families:
            reports = audit_facts(witness, p, family=family)
            assert all(r.holds and not r.vacuous for r in reports if r.fact_id != 'F4.2.1')


def test_planted_p4_breaks_first_fact():
    # part on 0..3 has a colour-2 path 0-1-2-3 and the part pair colour is 2
    inner = from_rows([[2, 1, 1], [2, 1], [2]], k=2)
    g = substitute(from_rows([[2]]), [inner, monochromatic(1)])
    p = partition_from_parts(g, [[0, 1, 2, 3], [4]])
    report = audit_facts(g, p, family='f10')[0]
    assert report.fact_id == 'F3.1.1'
    assert not report.holds
    ce = report.counterexample
    assert ce.color == 2
    assert ce.parts == (0, 1)
    image = ce.vertices
    assert all(g.color(a, b) == 2 for a, b in zip(image, image[1:]))
    assert set(image) <= {0, 1, 2, 3}


def test_vacuous_facts_on_singletons():
    g = pentagon_base(1, 2)
    p = partition_from_parts(g, [[v] for v in range(5)])
    reports = audit_facts(g, p, family='f13')
    by_id = {r.fact_id: r for r in reports}
    assert by_id['F4.1.4'].vacuous
    assert by_id['F4.1.4'].holds
    assert 'vacuous' in by_id['F4.1.4'].summary()


def test_audit_rejects_invalid_partition():
    g = witness_f9_f10(3)
    p = partition_from_parts(g, [list(range(10)), list(range(10, 20))])
    with pytest.raises(InvalidPartitionError):
        audit_facts(g, p, family='f10')


def test_audit_needs_a_family():
    g = witness_f9_f10(3)
    with pytest.raises(ValueError):
        audit_facts(g, find_gallai_partition(g))
    with pytest.raises(ValueError):
        audit_facts(g, find_gallai_partition(g), family='f11')


def test_fact_ids_cover_families():
    assert set(FACT_IDS) == {f for facts in FAMILY_FACTS.values() for f in facts}


def test_family_inferred_from_pinned_pattern(monkeypatch):
    monkeypatch.delenv('GRLAB_DATA_DIR', raising=False)
    g = witness_f9_f10(3)
    p = find_gallai_partition(g)
    assert [r.fact_id for r in audit_facts(g, p, h=named('house'))] == list(FAMILY_FACTS['f10'])
    assert [r.fact_id for r in audit_facts(g, p, h=named('diamond_pendant2'))] == list(FAMILY_FACTS['f13'])
    with pytest.raises(ValueError, match="infer"):
        audit_facts(g, p, h=named('bull'))
