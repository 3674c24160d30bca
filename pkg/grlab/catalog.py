"""
Pattern catalog: small uncoloured target graphs and their identifiers.

Every catalog entry comes with a fixed canonical vertex numbering, so two
calls with the same id return equal TargetGraphs. The F-aliases f1..f13 are
resolved through the preset table in the data directory; only f11 is fixed
(it is always the banner).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from config_loader import get_config

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class UnknownPatternError(ValueError):
    """Raised for catalog ids that do not name a pattern."""


class AmbiguousAliasError(ValueError):
    """Raised when an F-alias has not been pinned in the preset table."""

    def __init__(self, alias: str, candidates: Sequence[str]):
        self.alias = alias
        self.candidates = tuple(candidates)
        listed = ', '.join(self.candidates) if self.candidates else 'unknown'
        super().__init__(f"ambiguous alias {alias}: preset table not pinned (candidates: {listed})")


@dataclass(frozen=True)
class TargetGraph:
    """A simple uncoloured pattern on vertices 0..order-1."""

    order: int
    edges: FrozenSet[Edge]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"pattern order must be >= 1, got {self.order}")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.order - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'edges', frozenset(normalized))

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[Edge], name: Optional[str] = None) -> 'TargetGraph':
        return cls(order, frozenset(edges), name)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def neighbors(self, v: int) -> List[int]:
        return sorted({b if a == v else a for a, b in self.edges if v in (a, b)})

    def degrees(self) -> List[int]:
        deg = [0] * self.order
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree_sequence(self) -> List[int]:
        return sorted(self.degrees(), reverse=True)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.order))
        graph.add_edges_from(self.edges)
        return graph

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())

    def label(self) -> str:
        return self.name or f"graph{self.order}:{self.edge_count}"

    def __repr__(self) -> str:
        return f"TargetGraph({self.label()}, order={self.order}, edges={self.sorted_edges()})"


# The thirteen connected graphs on five vertices with at most six edges.
NAMED_EDGES: Dict[str, Tuple[Edge, ...]] = {
    'p5': ((0, 1), (1, 2), (2, 3), (3, 4)),
    'k14': ((0, 1), (0, 2), (0, 3), (0, 4)),
    'chair': ((0, 1), (1, 2), (2, 3), (1, 4)),
    'c5': ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)),
    'banner': ((0, 1), (1, 2), (2, 3), (0, 3), (0, 4)),
    'tadpole32': ((0, 1), (0, 2), (1, 2), (2, 3), (3, 4)),
    'bull': ((0, 1), (0, 2), (1, 2), (0, 3), (1, 4)),
    'cricket': ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4)),
    'house': ((0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 4)),
    'bowtie': ((0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)),
    'diamond_pendant2': ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4)),
    'diamond_pendant3': ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (0, 4)),
    'k23': ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)),
}

NAMED_LABELS: Tuple[str, ...] = tuple(NAMED_EDGES)

ALIASES: Tuple[str, ...] = tuple(f"f{i}" for i in range(1, 14))
FIXED_ALIASES: Dict[str, str] = {'f11': 'banner'}

_PARAMETRIC = ('path', 'star', 'cycle', 'complete', 'multipartite', 'f2n')


@dataclass(frozen=True)
class CatalogId:
    """Identifier of a catalog pattern.

    tag is one of path, star, cycle, complete, multipartite, f2n, named or
    alias; params carries the integers of the parametric tags and label the
    name of the named/alias tags.
    """

    tag: str
    params: Tuple[int, ...] = ()
    label: Optional[str] = None

    @classmethod
    def parse(cls, text: str) -> 'CatalogId':
        """Parse 'f9', 'banner', 'k3', 'path:4', 'multipartite:1,3,3', 'f2n:5', ...

        Raises:
            UnknownPatternError: If text names no pattern
        """
        token = text.strip().lower()
        if not token:
            raise UnknownPatternError("empty pattern id")
        if token == 'k3':
            return cls('complete', (3,))
        if token in ALIASES:
            return cls('alias', (), token)
        if token in NAMED_EDGES:
            return cls('named', (), token)
        if ':' in token:
            tag, _, rest = token.partition(':')
            if tag not in _PARAMETRIC:
                raise UnknownPatternError(f"unknown pattern family '{tag}'")
            try:
                params = tuple(int(p) for p in rest.split(','))
            except ValueError:
                raise UnknownPatternError(f"bad parameters in '{text}'")
            if tag != 'multipartite' and len(params) != 1:
                raise UnknownPatternError(f"'{tag}' takes exactly one parameter")
            return cls(tag, params)
        raise UnknownPatternError(f"unknown pattern '{text}'")

    def __str__(self) -> str:
        if self.tag in ('named', 'alias'):
            return self.label or self.tag
        if self.tag == 'complete' and self.params == (3,):
            return 'k3'
        return f"{self.tag}:{','.join(str(p) for p in self.params)}"


def path(m: int) -> TargetGraph:
    """Path on m vertices"""
    if m < 1:
        raise UnknownPatternError(f"path needs >= 1 vertex, got {m}")
    return TargetGraph.from_edges(m, ((i, i + 1) for i in range(m - 1)), f"path:{m}")


def star(m: int) -> TargetGraph:
    """K_{1,m} with centre 0"""
    if m < 1:
        raise UnknownPatternError(f"star needs >= 1 leaf, got {m}")
    return TargetGraph.from_edges(m + 1, ((0, i) for i in range(1, m + 1)), f"star:{m}")


def cycle(m: int) -> TargetGraph:
    if m < 3:
        raise UnknownPatternError(f"cycle needs >= 3 vertices, got {m}")
    return TargetGraph.from_edges(m, ((i, (i + 1) % m) for i in range(m)), f"cycle:{m}")


def complete(m: int) -> TargetGraph:
    if m < 1:
        raise UnknownPatternError(f"complete graph needs >= 1 vertex, got {m}")
    name = 'k3' if m == 3 else f"complete:{m}"
    return TargetGraph.from_edges(m, ((u, v) for u in range(m) for v in range(u + 1, m)), name)


def complete_multipartite(sizes: Sequence[int]) -> TargetGraph:
    """Complete multipartite graph; parts are consecutive vertex blocks"""
    if not sizes or any(s < 1 for s in sizes):
        raise UnknownPatternError(f"part sizes must be positive, got {list(sizes)}")
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(range(start, start + size))
        start += size
    edges = [(u, v) for i, a in enumerate(blocks) for b in blocks[i + 1:] for u in a for v in b]
    return TargetGraph.from_edges(start, edges, f"multipartite:{','.join(map(str, sizes))}")


def f2n(n: int) -> TargetGraph:
    """C4 on 0..3 with n-2 pendant edges at vertex 0 (the centre)"""
    if n < 3:
        raise UnknownPatternError(f"f2n needs n >= 3, got {n}")
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)] + [(0, p) for p in range(4, n + 2)]
    return TargetGraph.from_edges(n + 2, edges, 'banner' if n == 3 else f"f2n:{n}")


def named(label: str) -> TargetGraph:
    try:
        return TargetGraph.from_edges(5, NAMED_EDGES[label], label)
    except KeyError:
        raise UnknownPatternError(f"unknown named pattern '{label}'")


def named_catalog() -> List[TargetGraph]:
    return [named(label) for label in NAMED_LABELS]


def load_preset_table() -> Mapping[str, object]:
    """Preset table from the data directory"""
    from fixture_store import FixtureStore
    return FixtureStore().load_presets()


def resolve_alias(alias: str, table: Optional[Mapping[str, object]] = None) -> str:
    """Named label an F-alias stands for.

    Raises:
        AmbiguousAliasError: If the preset table does not pin the alias
        UnknownPatternError: If alias is not one of f1..f13
    """
    alias = alias.lower()
    if alias not in ALIASES:
        raise UnknownPatternError(f"unknown alias '{alias}'")
    if alias in FIXED_ALIASES:
        return FIXED_ALIASES[alias]
    if table is None:
        table = load_preset_table()
    pinned = table.get('aliases', {}) or {}
    label = pinned.get(alias)
    if label:
        if label not in NAMED_EDGES:
            raise UnknownPatternError(f"preset table maps {alias} to unknown pattern '{label}'")
        return label
    candidates = (table.get('candidates', {}) or {}).get(alias, [])
    raise AmbiguousAliasError(alias, candidates)


def catalog_graph(cid, table: Optional[Mapping[str, object]] = None) -> TargetGraph:
    """Pattern for a catalog id (a CatalogId or its text form).

    Args:
        cid: CatalogId or a string accepted by CatalogId.parse
        table: Preset table; loaded from the data directory when needed

    Returns:
        TargetGraph with the canonical numbering of its family

    Raises:
        UnknownPatternError: Unknown label or invalid parameters
        AmbiguousAliasError: Unpinned alias
    """
    if isinstance(cid, str):
        cid = CatalogId.parse(cid)
    tag, params = cid.tag, cid.params
    if tag == 'alias':
        label = resolve_alias(cid.label, table)
        graph = named(label)
        return TargetGraph(graph.order, graph.edges, label)
    if tag == 'named':
        return named(cid.label)
    if tag == 'path':
        return path(params[0])
    if tag == 'star':
        return star(params[0])
    if tag == 'cycle':
        return cycle(params[0])
    if tag == 'complete':
        return complete(params[0])
    if tag == 'multipartite':
        return complete_multipartite(params)
    if tag == 'f2n':
        return f2n(params[0])
    raise UnknownPatternError(f"unknown catalog tag '{tag}'")


def _check_order(h: TargetGraph) -> None:
    limit = get_config().max_pattern_order
    if h.order > limit:
        raise ValueError(f"pattern {h.label()} has order {h.order} > {limit}")


def is_subgraph(h1: TargetGraph, h2: TargetGraph) -> bool:
    """True iff h1 embeds injectively into h2 carrying edges to edges"""
    _check_order(h1)
    _check_order(h2)
    if h1.order > h2.order or h1.edge_count > h2.edge_count:
        return False
    matcher = isomorphism.GraphMatcher(h2.to_networkx(), h1.to_networkx())
    return matcher.subgraph_is_monomorphic()


def is_isomorphic(h1: TargetGraph, h2: TargetGraph) -> bool:
    if h1.order != h2.order or h1.edge_count != h2.edge_count:
        return False
    return nx.is_isomorphic(h1.to_networkx(), h2.to_networkx())


def identify(h: TargetGraph) -> Optional[str]:
    """Named label isomorphic to h, if any"""
    for graph in named_catalog():
        if is_isomorphic(h, graph):
            return graph.name
    return None
