import pytest

from catalog import complete, cycle, f2n, named, path, star
from detect import check_forbid
from search import (Forbid, SearchConfig, compute_gr, compute_r2, find_free_coloring, format_certificate,
                    naive_decide, prove_unavoidable)

PLAIN = SearchConfig(budget=10 ** 8, vertex_symmetry=False)
SYMMETRIC = SearchConfig(budget=10 ** 8, vertex_symmetry=True)

ORACLE_CASES = [
    (4, 2, False, ['k3']),
    (5, 2, False, ['k3']),
    (6, 2, False, ['k3']),
    (5, 2, False, ['banner']),
    (6, 2, False, ['banner']),
    (6, 2, False, ['star:3']),
    (5, 2, False, ['path:4']),
    (4, 3, True, ['path:4']),
    (5, 3, True, ['k3']),
    (5, 3, True, ['star:3']),
    (5, 3, False, ['path:3']),
]


def _forbid(rainbow, labels):
    patterns = {'k3': complete(3), 'banner': named('banner'), 'path:3': path(3), 'path:4': path(4),
                'star:3': star(3)}
    return Forbid(rainbow, tuple(patterns[label] for label in labels))


@pytest.mark.parametrize('n, k, rainbow, labels', ORACLE_CASES)
def test_search_matches_enumeration(n, k, rainbow, labels):
    forbid = _forbid(rainbow, labels)
    expected = naive_decide(n, k, forbid)
    outcome = find_free_coloring(n, k, forbid, config=PLAIN)
    if expected is None:
        assert outcome.exhausted
    else:
        assert outcome.found
        assert outcome.graph == expected


@pytest.mark.parametrize('n, k, rainbow, labels', ORACLE_CASES)
def test_symmetry_breaking_keeps_verdicts(n, k, rainbow, labels):
    forbid = _forbid(rainbow, labels)
    plain = find_free_coloring(n, k, forbid, config=PLAIN)
    reduced = prove_unavoidable(n, k, forbid, config=SYMMETRIC)
    assert plain.verdict_name == reduced.verdict_name
    assert reduced.nodes_visited <= plain.nodes_visited or plain.found


def test_found_colourings_are_free():
    forbid = Forbid(True, (complete(3),))
    outcome = find_free_coloring(7, 3, forbid, config=PLAIN)
    assert outcome.found
    assert check_forbid(outcome.graph, True, (complete(3),)) == []
    assert outcome.graph.colors_used <= {1, 2, 3}


def test_first_occurrence_colour_order():
    outcome = find_free_coloring(5, 4, Forbid(False, (complete(3),)), config=PLAIN)
    assert outcome.graph.color(0, 1) == 1
    assert outcome.graph.k == 4


def test_budget_verdict():
    outcome = find_free_coloring(6, 2, Forbid(False, (complete(3),)), budget=5)
    assert outcome.out_of_budget
    assert outcome.graph is None
    assert outcome.nodes_visited == 5


def test_budget_runs_replay():
    forbid = Forbid(False, (named('banner'),))
    first = prove_unavoidable(6, 2, forbid, config=SYMMETRIC)
    second = prove_unavoidable(6, 2, forbid, config=SYMMETRIC)
    assert first.nodes_visited == second.nodes_visited
    assert first.max_depth == second.max_depth


def test_edgeless_pattern_is_trivially_unavoidable():
    outcome = prove_unavoidable(3, 2, Forbid(False, (path(1),)))
    assert outcome.exhausted
    assert outcome.nodes_visited == 0


def test_forbid_needs_a_constraint():
    with pytest.raises(ValueError):
        Forbid()
    assert Forbid(True).describe() == 'rainbow_k3'
    assert Forbid(True, [complete(3)]).describe() == 'rainbow_k3 mono:k3'


def test_search_rejects_empty_instances():
    with pytest.raises(ValueError):
        find_free_coloring(0, 2, Forbid(True))


def test_settings_overrides():
    config = SearchConfig.from_settings(True, budget=99, threads=None)
    assert config.budget == 99
    assert config.threads == 1
    assert config.vertex_symmetry
    assert not SearchConfig.from_settings(False).vertex_symmetry


def test_certificate_for_witness():
    outcome = find_free_coloring(5, 2, Forbid(False, (complete(3),)), config=PLAIN)
    text = format_certificate(outcome)
    lines = text.splitlines()
    assert lines[0] == '# grlab search certificate'
    assert 'forbid_rainbow_k3 false' in lines
    assert 'forbid_mono k3 order=3 edges=0-1 0-2 1-2' in lines
    assert 'verdict found' in lines
    body = lines[lines.index('witness') + 1:]
    assert [len(row.split()) for row in body] == [4, 3, 2, 1]


def test_certificate_for_proof():
    outcome = prove_unavoidable(6, 2, Forbid(False, (complete(3),)), config=SYMMETRIC)
    text = format_certificate(outcome)
    assert 'verdict exhausted' in text.splitlines()
    assert 'witness' not in text
    assert 'vertex_symmetry true' in text.splitlines()


def test_parallel_search_agrees():
    forbid = Forbid(False, (complete(3),))
    parallel = SearchConfig(budget=10 ** 8, threads=2, split_depth=4, vertex_symmetry=False)
    found = find_free_coloring(5, 2, forbid, config=parallel)
    assert found.graph == find_free_coloring(5, 2, forbid, config=PLAIN).graph
    proof = prove_unavoidable(6, 2, forbid, config=parallel)
    assert proof.exhausted
    assert proof.subtrees
    assert proof.nodes_visited == proof.prefix_nodes + sum(s.nodes for s in proof.subtrees)
    assert 'subtree 0 prefix=' in format_certificate(proof)


@pytest.mark.parametrize('budget', list(range(20, 400, 25)) + [10 ** 6])
def test_parallel_search_respects_budget(budget):
    forbid = Forbid(False, (cycle(5),))
    sequential = find_free_coloring(8, 2, forbid, config=SearchConfig(budget=budget))
    parallel = find_free_coloring(8, 2, forbid, config=SearchConfig(budget=budget, threads=2, split_depth=6))
    assert parallel.verdict_name == sequential.verdict_name
    assert parallel.nodes_visited == sequential.nodes_visited
    assert parallel.nodes_visited <= budget
    assert parallel.graph == sequential.graph


def test_parallel_proof_runs_out_like_sequential():
    forbid = Forbid(False, (complete(3),))
    for budget in (5, 40, 120):
        sequential = prove_unavoidable(6, 2, forbid, config=SearchConfig(budget=budget))
        parallel = prove_unavoidable(6, 2, forbid, config=SearchConfig(budget=budget, threads=2, split_depth=4))
        assert (parallel.verdict_name, parallel.nodes_visited) == (sequential.verdict_name,
                                                                    sequential.nodes_visited)


def test_r2_of_triangle():
    value = compute_r2(complete(3), n_max=8)
    assert (value.lo, value.hi) == (6, 6)


def test_r2_of_banner():
    value = compute_r2(named('banner'), n_max=8)
    assert value.exact == 6


def test_unresolved_scan_is_a_range():
    value = compute_r2(complete(3), n_max=5)
    assert value.lo == 6
    assert value.hi is None
    assert 'unresolved' in value.note


def test_budget_scan_notes_gap():
    value = compute_r2(named('banner'), n_max=6, budget=1)
    assert value.hi is None
    assert 'budget' in value.note


def test_gr_with_two_colours_is_r2():
    assert compute_gr(complete(3), 2, n_max=7).exact == 6


@pytest.mark.slow
def test_gr_of_triangle():
    assert compute_gr(complete(3), 3, n_max=11).exact == 11


@pytest.mark.slow
def test_r2_of_f2n_4():
    assert compute_r2(f2n(4), n_max=8).exact == 7


@pytest.mark.slow
def test_gr_of_banner():
    assert compute_gr(named('banner'), 3, n_max=8).exact == 7
