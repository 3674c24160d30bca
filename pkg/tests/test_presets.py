import json

import pytest

import presets
from catalog import NAMED_LABELS, complete, is_subgraph, named, resolve_alias
from fixture_store import FixtureStore
from formulas import GrValue
from presets import (PinResult, fact_hosts, fixture_consistent_candidates, k133, pin_presets, r2_pool,
                     structural_candidates, write_pin_result)

STRUCTURAL = {
    'f9': ['tadpole32', 'bull'],
    'f10': ['tadpole32', 'bull', 'house', 'diamond_pendant2'],
    'f12': ['bull', 'cricket', 'diamond_pendant3'],
    'f13': ['tadpole32', 'bull', 'diamond_pendant2'],
}

# r2 values chosen so that exactly one assignment survives
FAKE_R2 = {'tadpole32': 9, 'bull': 8, 'cricket': 11, 'house': 9, 'bowtie': 12,
           'diamond_pendant2': 10, 'diamond_pendant3': 10}


def _exact(values):
    return {label: GrValue(v, v, 2, label) for label, v in values.items()}


def test_fact_hosts():
    assert [s for s, _ in fact_hosts('f10')] == ['F3.1.1', 'F3.1.2', 'F3.1.3', 'K133']
    assert fact_hosts('F9') == fact_hosts('f10')
    assert [s for s, _ in fact_hosts('f12')][-1] == 'F4.2.1'
    assert [s for s, _ in fact_hosts('f13')][-1] == 'F4.2.2'
    assert len(fact_hosts('f12')) == 6
    hosts = dict(fact_hosts('f12'))
    assert hosts['F4.1.1'].edge_count == 7
    assert hosts['F4.1.5'].edge_count == 8


def test_unpinnable_alias():
    with pytest.raises(ValueError):
        fact_hosts('f11')
    with pytest.raises(ValueError):
        structural_candidates('f3')


@pytest.mark.parametrize('alias', sorted(STRUCTURAL))
def test_structural_candidates(alias):
    assert structural_candidates(alias) == STRUCTURAL[alias]


@pytest.mark.parametrize('alias', sorted(STRUCTURAL))
def test_candidates_embed_in_every_host(alias):
    for label in structural_candidates(alias):
        assert label != 'banner'
        assert all(is_subgraph(named(label), host) for _, host in fact_hosts(alias))


def test_f10_candidates_fit_k133():
    assert k133().order == 7
    for label in structural_candidates('f10'):
        assert is_subgraph(named(label), k133())


def test_fixture_consistent_candidates(store):
    assert fixture_consistent_candidates('f10', store) == STRUCTURAL['f10']
    assert fixture_consistent_candidates('f9', store) == STRUCTURAL['f9']
    assert fixture_consistent_candidates('f12', store) == ['diamond_pendant3']
    assert fixture_consistent_candidates('f13', store) == ['diamond_pendant2']


def test_r2_pool():
    pool = r2_pool()
    assert pool == ['tadpole32', 'bull', 'cricket', 'house', 'bowtie', 'diamond_pendant2', 'diamond_pendant3']
    assert all(is_subgraph(complete(3), named(label)) for label in pool)
    assert set(NAMED_LABELS) - set(pool) == {'p5', 'k14', 'chair', 'c5', 'banner', 'k23'}


def test_single_assignment():
    found = presets._assignments(STRUCTURAL, _exact(FAKE_R2))
    assert found == [{'f9': 'tadpole32', 'f10': 'house', 'f12': 'diamond_pendant3', 'f13': 'diamond_pendant2'}]


def test_assignments_need_distinct_labels():
    values = dict(FAKE_R2, house=20)
    assert presets._assignments(STRUCTURAL, _exact(values)) == []


def test_assignments_accept_ranges():
    r2 = _exact(FAKE_R2)
    r2['bull'] = GrValue(8, None, 2, 'bull')
    found = presets._assignments(STRUCTURAL, r2)
    assert {a['f9'] for a in found} == {'tadpole32', 'bull'}
    assert all(len(set(a.values())) == 4 for a in found)


def test_pin_result_properties():
    table = {'aliases': {'f11': 'banner', 'f12': 'cricket'}, 'candidates': {'f9': ['bull']}}
    result = PinResult(table, '{}\n', (), {})
    assert not result.consistent
    assert result.pinned == {'f12': 'cricket'}


@pytest.fixture
def fake_search(monkeypatch):
    r2 = _exact(FAKE_R2)
    monkeypatch.setattr(presets, 'compute_r2', lambda h, n_max, budget, config: r2[h.label()])


def test_pin_presets_pins_everything(fake_search):
    result = pin_presets(n_max=10, budget=1000)
    assert result.consistent
    assert result.pinned == {'f9': 'tadpole32', 'f10': 'house', 'f12': 'diamond_pendant3', 'f13': 'diamond_pendant2'}
    assert result.table['candidates'] == {}
    assert result.table['aliases']['f11'] == 'banner'
    evidence = json.loads(result.evidence_text)
    assert evidence['budget'] == 1000
    assert evidence['n_max'] == 10
    assert evidence['r2']['house'] == {'lo': 9, 'hi': 9, 'note': None}
    assert evidence['hosts']['f9'] == ['F3.1.1', 'F3.1.2', 'F3.1.3', 'K133']
    assert result.evidence_text.endswith('\n')


def test_pin_presets_is_deterministic(fake_search):
    assert pin_presets(n_max=10, budget=1000).evidence_text == pin_presets(n_max=10, budget=1000).evidence_text


def test_pin_presets_without_solution(monkeypatch):
    r2 = _exact({label: 20 for label in FAKE_R2})
    monkeypatch.setattr(presets, 'compute_r2', lambda h, n_max, budget, config: r2[h.label()])
    result = pin_presets(n_max=10, budget=1000)
    assert not result.consistent
    assert result.pinned == {}
    assert result.table['candidates'] == STRUCTURAL


def test_written_table_resolves(fake_search, tmp_path):
    store = FixtureStore(str(tmp_path))
    presets_path, evidence_path = write_pin_result(pin_presets(n_max=10, budget=1000), store)
    assert presets_path.endswith('presets.json')
    assert json.loads(store.load_evidence())['pinned']['f13'] == 'diamond_pendant2'
    table = store.load_presets()
    assert resolve_alias('f10', table) == 'house'
    assert resolve_alias('f11', table) == 'banner'


@pytest.mark.slow
def test_pin_presets_by_search():
    result = pin_presets(n_max=10)
    assert set(result.r2) == set(r2_pool())
    for alias, label in result.pinned.items():
        assert label in STRUCTURAL[alias]
