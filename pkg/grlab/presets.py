"""
Alias preset pinning for f9, f10, f12 and f13.

Each structural fact about Gallai partitions of an H-free colouring says that a
certain host graph cannot appear monochromatically, so H must be a subgraph of
every host. Together with the k = 3 tower witness (which avoids H) this cuts
the catalog down to a few candidates per alias; the two-colour Ramsey numbers
computed by search then select the assignment.
"""

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

from catalog import (NAMED_LABELS, TargetGraph, complete, complete_multipartite, is_isomorphic, is_subgraph,
                     named)
from coloring import ColoredCompleteGraph
from config_loader import get_config
from constructions import F9_F10_BASE, F12_F13_BASE, witness_f9_f10, witness_f12_f13
from detect import find_mono_copy
from fixture_store import FixtureStore
from formulas import GrValue
from search import SearchConfig, compute_r2

logger = logging.getLogger(__name__)

PINNED_ALIASES = ('f9', 'f10', 'f12', 'f13')
R2_TARGET = {'f9': 9, 'f10': 9, 'f12': 10, 'f13': 10}


def _graph(order: int, edges, name: str) -> TargetGraph:
    return TargetGraph.from_edges(order, edges, name)


def gem() -> TargetGraph:
    """Path 0-1-2-3 plus apex 4"""
    return _graph(5, [(0, 1), (1, 2), (2, 3), (4, 0), (4, 1), (4, 2), (4, 3)], 'gem')


def edge_plus_k32() -> TargetGraph:
    """Edge 01 plus all edges {0,1,2} x {3,4}"""
    return _graph(5, [(0, 1)] + [(a, x) for a in (0, 1, 2) for x in (3, 4)], 'edge+k32')


def edge_plus_k33() -> TargetGraph:
    return _graph(6, [(0, 1)] + [(a, x) for a in (0, 1, 2) for x in (3, 4, 5)], 'edge+k33')


def p3_plus_k32() -> TargetGraph:
    """Path 0-1-2 plus all edges {0,1,2} x {3,4}"""
    return _graph(5, [(0, 1), (1, 2)] + [(a, x) for a in (0, 1, 2) for x in (3, 4)], 'p3+k32')


def k4_pendant() -> TargetGraph:
    return _graph(5, complete(4).sorted_edges() + [(3, 4)], 'k4+pendant')


def p3_apex_pendant() -> TargetGraph:
    """Path 0-1-2, vertex 3 joined to all of it and to the pendant 4"""
    return _graph(5, [(0, 1), (1, 2), (3, 0), (3, 1), (3, 2), (3, 4)], 'p3+apex+pendant')


def wheel4() -> TargetGraph:
    graph = complete_multipartite([1, 2, 2])
    return TargetGraph(graph.order, graph.edges, 'k122')


def k133() -> TargetGraph:
    graph = complete_multipartite([1, 3, 3])
    return TargetGraph(graph.order, graph.edges, 'k133')


_SHARED_41 = (('F4.1.1', gem), ('F4.1.2', edge_plus_k33), ('F4.1.3', p3_plus_k32),
              ('F4.1.4', k4_pendant), ('F4.1.5', wheel4))

_HOSTS = {
    'f10': (('F3.1.1', gem), ('F3.1.2', edge_plus_k32), ('F3.1.3', wheel4), ('K133', k133)),
    'f12': _SHARED_41 + (('F4.2.1', p3_apex_pendant),),
    'f13': _SHARED_41 + (('F4.2.2', edge_plus_k32),),
}


def _check_alias(alias: str) -> str:
    alias = alias.lower()
    if alias not in PINNED_ALIASES:
        raise ValueError(f"alias must be one of {', '.join(PINNED_ALIASES)}, got '{alias}'")
    return alias


def fact_hosts(alias: str) -> List[Tuple[str, TargetGraph]]:
    """(source, host) pairs; the alias pattern is a subgraph of every host"""
    alias = _check_alias(alias)
    return [(source, build()) for source, build in _HOSTS['f10' if alias == 'f9' else alias]]


@lru_cache(maxsize=2)
def _tower(family: str) -> ColoredCompleteGraph:
    return witness_f9_f10(3) if family == 'f10' else witness_f12_f13(3)


@lru_cache(maxsize=8)
def _structural(alias: str) -> Tuple[str, ...]:
    hosts = [host for _, host in fact_hosts(alias)]
    tower = _tower('f10' if alias in ('f9', 'f10') else 'f12')
    picked = []
    for label in NAMED_LABELS:
        if label == 'banner':
            continue
        h = named(label)
        if not all(is_subgraph(h, host) for host in hosts):
            continue
        if find_mono_copy(tower, h) is not None:
            continue
        picked.append(label)
    if alias == 'f9':
        larger = _structural('f10')
        picked = [label for label in picked
                  if any(is_subgraph(named(label), named(big)) and not is_isomorphic(named(label), named(big))
                         for big in larger)]
    return tuple(picked)


def structural_candidates(alias: str) -> List[str]:
    """Named patterns (banner excluded) compatible with every fact host and
    absent from the k = 3 tower; f9 must also sit properly inside an f10
    candidate."""
    return list(_structural(_check_alias(alias)))


def base_fixture_for(alias: str, store: Optional[FixtureStore] = None) -> ColoredCompleteGraph:
    alias = _check_alias(alias)
    store = store or FixtureStore()
    return store.load_fixture(F9_F10_BASE if alias in ('f9', 'f10') else F12_F13_BASE)


def fixture_consistent_candidates(alias: str, store: Optional[FixtureStore] = None) -> List[str]:
    """Structural candidates the committed two-colour base avoids"""
    base = base_fixture_for(alias, store)
    return [label for label in structural_candidates(alias) if find_mono_copy(base, named(label)) is None]


def r2_pool() -> List[str]:
    """Named patterns with five or six edges that contain a triangle"""
    triangle = complete(3)
    return [label for label in NAMED_LABELS
            if named(label).edge_count in (5, 6) and is_subgraph(triangle, named(label))]


@dataclass(frozen=True)
class PinResult:
    table: Dict[str, Any]
    evidence_text: str
    assignments: Tuple[Dict[str, str], ...]
    r2: Dict[str, GrValue]

    @property
    def consistent(self) -> bool:
        return bool(self.assignments)

    @property
    def pinned(self) -> Dict[str, str]:
        return {alias: label for alias, label in self.table['aliases'].items() if alias in PINNED_ALIASES}


def _assignments(structural: Dict[str, List[str]], r2: Dict[str, GrValue]) -> List[Dict[str, str]]:
    def fits(label: str, alias: str) -> bool:
        value = r2.get(label)
        return value is not None and value.contains(R2_TARGET[alias])

    low = [(a, b) for b in structural['f10'] for a in structural['f9']
           if a != b and fits(a, 'f9') and fits(b, 'f10') and is_subgraph(named(a), named(b))]
    high = [(c, d) for c in structural['f12'] for d in structural['f13']
            if c != d and fits(c, 'f12') and fits(d, 'f13')]
    found = []
    for a, b in low:
        for c, d in high:
            if len({a, b, c, d}) == 4:
                found.append({'f9': a, 'f10': b, 'f12': c, 'f13': d})
    return found


def pin_presets(n_max: Optional[int] = None, budget: Optional[int] = None,
                config: Optional[SearchConfig] = None) -> PinResult:
    """Structural stage, r2 stage, then assignment enumeration.

    Aliases on which every consistent assignment agrees are pinned; the others
    keep their candidate lists. With no consistent assignment every alias keeps
    its structural candidates.
    """
    settings = get_config()
    n_max = n_max if n_max is not None else settings.pinning_n_max
    budget = budget if budget is not None else settings.pinning_budget
    config = config or SearchConfig.from_settings(True, budget=budget)

    logger.info("Pinning stage 1: structural candidates")
    structural = {alias: structural_candidates(alias) for alias in PINNED_ALIASES}
    for alias, labels in structural.items():
        logger.info(f"  {alias}: {', '.join(labels) or '-'}")

    logger.info(f"Pinning stage 2: r2 by search (n_max={n_max}, budget={budget})")
    r2: Dict[str, GrValue] = {}
    for label in r2_pool():
        r2[label] = compute_r2(named(label), n_max, budget, config)
        logger.info(f"  r2({label}) = {r2[label]}")

    logger.info("Pinning stage 3: assignments")
    assignments = _assignments(structural, r2)
    pinned: Dict[str, str] = {}
    candidates: Dict[str, List[str]] = {}
    for alias in PINNED_ALIASES:
        options = sorted({a[alias] for a in assignments}) if assignments else structural[alias]
        if assignments and len(options) == 1:
            pinned[alias] = options[0]
        else:
            candidates[alias] = list(options)
    if not assignments:
        logger.warning("No assignment satisfies every constraint; reporting all candidates")

    table = {'aliases': dict(sorted({'f11': 'banner', **pinned}.items())), 'candidates': candidates}
    evidence = {
        'seed': settings.pinning_seed,
        'n_max': n_max,
        'budget': budget,
        'vertex_symmetry': config.vertex_symmetry,
        'hosts': {alias: [source for source, _ in fact_hosts(alias)] for alias in PINNED_ALIASES},
        'structural': structural,
        'r2': {label: {'lo': v.lo, 'hi': v.hi, 'note': v.note} for label, v in r2.items()},
        'assignments': assignments,
        'pinned': pinned,
        'candidates': candidates,
    }
    text = json.dumps(evidence, indent=2, sort_keys=True) + '\n'
    return PinResult(table, text, tuple(assignments), r2)


def write_pin_result(result: PinResult, store: Optional[FixtureStore] = None) -> Tuple[str, str]:
    store = store or FixtureStore()
    return store.save_presets(result.table), store.save_evidence(result.evidence_text)
