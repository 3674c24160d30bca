"""
Rainbow-triangle detection, monochromatic pattern detection and the
structural fact auditor for Gallai partitions.

Pattern embedding works on integer bitsets: a host colour class is a tuple of
neighbourhood masks and the pattern is walked in a precomputed order where
each new vertex is constrained by its already placed neighbours.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from catalog import (AmbiguousAliasError, TargetGraph, complete, is_isomorphic, load_preset_table,
                     named, path, resolve_alias)
from coloring import ColoredCompleteGraph

logger = logging.getLogger(__name__)

Triangle = Tuple[int, int, int]


@dataclass(frozen=True)
class Embedding:
    """image[p] is the host vertex of pattern vertex p."""

    pattern: TargetGraph
    image: Tuple[int, ...]
    color: int

    def host_edges(self) -> List[Tuple[int, int]]:
        return [(self.image[a], self.image[b]) for a, b in self.pattern.sorted_edges()]

    def is_valid(self, g: ColoredCompleteGraph) -> bool:
        """Re-check the embedding against g"""
        if len(set(self.image)) != len(self.image) or len(self.image) != self.pattern.order:
            return False
        if any(not 0 <= v < g.n for v in self.image):
            return False
        return all(g.color(u, v) == self.color for u, v in self.host_edges())

    def describe(self) -> str:
        vertices = ','.join(str(v + 1) for v in self.image)
        return f"{self.pattern.label()} color={self.color} vertices={vertices}"


@dataclass(frozen=True)
class EmbeddingPlan:
    """Placement order for a pattern.

    back[i] lists the earlier positions adjacent to position i, degrees[i]
    is the pattern degree of the vertex at position i.
    """

    pattern: TargetGraph
    order: Tuple[int, ...]
    back: Tuple[Tuple[int, ...], ...]
    degrees: Tuple[int, ...]


def plan_for(h: TargetGraph, start: Sequence[int] = ()) -> EmbeddingPlan:
    """Greedy connectivity-first order, optionally beginning with start"""
    deg = h.degrees()
    nbrs = [set(h.neighbors(v)) for v in range(h.order)]
    order = list(start)
    remaining = set(range(h.order)) - set(order)
    while remaining:
        placed = set(order)
        best = max(remaining, key=lambda v: (len(nbrs[v] & placed), deg[v], -v))
        order.append(best)
        remaining.remove(best)
    position = {v: i for i, v in enumerate(order)}
    back = tuple(tuple(sorted(position[w] for w in nbrs[v] if position[w] < i)) for i, v in enumerate(order))
    return EmbeddingPlan(h, tuple(order), back, tuple(deg[v] for v in order))


@lru_cache(maxsize=256)
def default_plan(h: TargetGraph) -> EmbeddingPlan:
    return plan_for(h)


@lru_cache(maxsize=256)
def anchored_plans(h: TargetGraph) -> Tuple[EmbeddingPlan, ...]:
    """One plan per oriented pattern edge, that edge placed first"""
    plans = []
    for a, b in h.sorted_edges():
        plans.append(plan_for(h, (a, b)))
        plans.append(plan_for(h, (b, a)))
    return tuple(plans)


def _extend(adj: Sequence[int], plan: EmbeddingPlan, universe: int, host_deg: Sequence[int],
            image: List[int], used: int) -> bool:
    pos = len(image)
    if pos == len(plan.order):
        return True
    cand = universe & ~used
    for j in plan.back[pos]:
        cand &= adj[image[j]]
    need = plan.degrees[pos]
    while cand:
        low = cand & -cand
        cand ^= low
        w = low.bit_length() - 1
        if host_deg[w] < need:
            continue
        image.append(w)
        if _extend(adj, plan, universe, host_deg, image, used | low):
            return True
        image.pop()
    return False


def _as_pattern_image(plan: EmbeddingPlan, placed: Sequence[int]) -> Tuple[int, ...]:
    image = [0] * len(plan.order)
    for pos, v in enumerate(plan.order):
        image[v] = placed[pos]
    return tuple(image)


def embed_in_adjacency(adj: Sequence[int], plan: EmbeddingPlan, universe: int,
                       fixed: Sequence[int] = ()) -> Optional[Tuple[int, ...]]:
    """Embed plan.pattern into one colour class.

    Args:
        adj: Neighbourhood bitsets of the colour class
        plan: Placement order
        universe: Bitset of host vertices allowed in the image
        fixed: Host vertices for the first len(fixed) plan positions

    Returns:
        Host image indexed by pattern vertex, or None
    """
    host_deg = [(a & universe).bit_count() for a in adj]
    used = 0
    for pos, w in enumerate(fixed):
        bit = 1 << w
        if not universe & bit or used & bit or host_deg[w] < plan.degrees[pos]:
            return None
        if any(not adj[fixed[j]] & bit for j in plan.back[pos]):
            return None
        used |= bit
    placed = list(fixed)
    if _extend(adj, plan, universe, host_deg, placed, used):
        return _as_pattern_image(plan, placed)
    return None


def find_mono_copy_through_edge(adj: Sequence[int], plans: Sequence[EmbeddingPlan], u: int, v: int,
                                universe: int) -> Optional[Tuple[int, ...]]:
    """Copy of a pattern in one colour class using the host edge uv"""
    for plan in plans:
        image = embed_in_adjacency(adj, plan, universe, (u, v))
        if image is not None:
            return image
    return None


def find_rainbow_triangle(g: ColoredCompleteGraph) -> Optional[Triangle]:
    """Lexicographically first triangle with three distinct colours, or None"""
    m = g.matrix
    n = g.n
    for u in range(n - 2):
        row = m[u, u + 1:]
        sub = m[u + 1:, u + 1:]
        a = row[:, None]
        b = row[None, :]
        mask = (a != b) & (a != sub) & (b != sub)
        hits = np.argwhere(np.triu(mask, 1))
        if hits.size:
            v, w = hits[0]
            return u, u + 1 + int(v), u + 1 + int(w)
    return None


def find_mono_copy(g: ColoredCompleteGraph, h: TargetGraph, color: Optional[int] = None) -> Optional[Embedding]:
    """Monochromatic copy of h, in the given colour or in any colour.

    Raises:
        ValueError: If h has more vertices than g
    """
    if h.order > g.n:
        raise ValueError(f"pattern {h.label()} (order {h.order}) larger than host (n={g.n})")
    colors = [color] if color is not None else sorted(g.colors_used)
    if h.edge_count == 0:
        return Embedding(h, tuple(range(h.order)), color if color is not None else min(g.colors_used, default=1))
    plan = default_plan(h)
    universe = (1 << g.n) - 1
    for c in colors:
        image = embed_in_adjacency(g.adjacency(c), plan, universe)
        if image is not None:
            return Embedding(h, image, c)
    return None


@dataclass(frozen=True)
class Violation:
    """A broken constraint: a rainbow triangle or a monochromatic copy."""

    kind: str
    triangle: Optional[Triangle] = None
    embedding: Optional[Embedding] = None

    def describe(self) -> str:
        if self.kind == 'rainbow_k3':
            return f"rainbow_k3 vertices={','.join(str(v + 1) for v in self.triangle)}"
        return f"mono {self.embedding.describe()}"


def check_forbid(g: ColoredCompleteGraph, rainbow_k3: bool, patterns: Sequence[TargetGraph]) -> List[Violation]:
    """First violation per constraint; empty when g avoids them all"""
    violations = []
    if rainbow_k3:
        triangle = find_rainbow_triangle(g)
        if triangle is not None:
            violations.append(Violation('rainbow_k3', triangle=triangle))
    for h in patterns:
        if h.order > g.n:
            continue
        embedding = find_mono_copy(g, h)
        if embedding is not None:
            violations.append(Violation('mono', embedding=embedding))
    return violations


# ---------------------------------------------------------------------------
# Fact auditor
# ---------------------------------------------------------------------------

FACT_IDS = ('F3.1.1', 'F3.1.2', 'F3.1.3', 'F4.1.1', 'F4.1.2', 'F4.1.3', 'F4.1.4', 'F4.1.5', 'F4.2.1', 'F4.2.2')

FAMILY_FACTS: Dict[str, Tuple[str, ...]] = {
    'f9': ('F3.1.1', 'F3.1.2', 'F3.1.3'),
    'f10': ('F3.1.1', 'F3.1.2', 'F3.1.3'),
    'f12': ('F4.1.1', 'F4.1.2', 'F4.1.3', 'F4.1.4', 'F4.1.5', 'F4.2.1'),
    'f13': ('F4.1.1', 'F4.1.2', 'F4.1.3', 'F4.1.4', 'F4.1.5', 'F4.2.2'),
}

SECOND_PART_READING = "clause read as 'alpha not in C(V_i) and alpha not in C(V_j)'"


@dataclass(frozen=True)
class FactCounterexample:
    """Part indices (i, j), witnessing host vertices and the colour alpha."""

    parts: Tuple[int, int]
    vertices: Tuple[int, ...]
    color: int


@dataclass(frozen=True)
class FactReport:
    fact_id: str
    holds: bool
    instances: int
    counterexample: Optional[FactCounterexample] = None
    note: Optional[str] = None

    @property
    def vacuous(self) -> bool:
        return self.instances == 0

    def summary(self) -> str:
        status = 'hold' if self.holds else 'FAIL'
        line = f"fact {self.fact_id} {status} instances={self.instances}"
        if self.vacuous:
            line += ' vacuous'
        if self.counterexample is not None:
            ce = self.counterexample
            line += (f" parts={ce.parts[0] + 1},{ce.parts[1] + 1} color={ce.color}"
                     f" vertices={','.join(str(v + 1) for v in ce.vertices)}")
        return line


def infer_family(h: TargetGraph) -> str:
    """Alias among f9/f10/f12/f13 whose pinned preset is isomorphic to h.

    Raises:
        ValueError: If no pinned alias matches
    """
    table = load_preset_table()
    for alias in ('f10', 'f9', 'f12', 'f13'):
        try:
            label = resolve_alias(alias, table)
        except AmbiguousAliasError:
            continue
        if is_isomorphic(h, named(label)):
            return alias
    raise ValueError(f"cannot infer the fact family of {h.label()}; pass family explicitly")


class _FactChecker:
    """Evaluates fact conclusions over ordered part pairs."""

    def __init__(self, g: ColoredCompleteGraph, partition):
        self.g = g
        self.partition = partition
        self.parts = partition.parts
        self.masks = [sum(1 << v for v in part) for part in self.parts]
        self._p3 = default_plan(path(3))
        self._p4 = default_plan(path(4))
        self._k3 = default_plan(complete(3))

    def _pairs(self):
        m = len(self.parts)
        for i in range(m):
            for j in range(m):
                if i != j:
                    yield i, j, self.partition.color_between(i, j)

    def _mono_within(self, plan: EmbeddingPlan, i: int, color: int) -> Optional[Tuple[int, ...]]:
        if len(self.parts[i]) < plan.pattern.order:
            return None
        return embed_in_adjacency(self.g.adjacency(color), plan, self.masks[i])

    def _color_edge_within(self, i: int, color: int) -> Optional[Tuple[int, ...]]:
        adj = self.g.adjacency(color)
        for v in self.parts[i]:
            hit = adj[v] & self.masks[i]
            if hit:
                return v, (hit & -hit).bit_length() - 1
        return None

    def _run(self, fact_id: str, hypothesis, conclusion, note: Optional[str] = None) -> FactReport:
        instances = 0
        for i, j, alpha in self._pairs():
            if not hypothesis(i, j):
                continue
            instances += 1
            witness = conclusion(i, j, alpha)
            if witness is not None:
                ce = FactCounterexample((i, j), tuple(witness), alpha)
                return FactReport(fact_id, False, instances, ce, note)
        return FactReport(fact_id, True, instances, None, note)

    def size(self, i: int) -> int:
        return len(self.parts[i])

    def no_mono_p4(self, fact_id: str) -> FactReport:
        return self._run(fact_id, lambda i, j: True,
                         lambda i, j, a: self._mono_within(self._p4, i, a))

    def alpha_absent(self, fact_id: str, min_i: int, min_j: int, both: bool = False,
                     note: Optional[str] = None) -> FactReport:
        def conclusion(i, j, a):
            edge = self._color_edge_within(i, a)
            if edge is None and both:
                edge = self._color_edge_within(j, a)
            return edge
        return self._run(fact_id, lambda i, j: self.size(i) >= min_i and self.size(j) >= min_j,
                         conclusion, note)

    def no_mono_p3(self, fact_id: str, min_i: int, min_j: int) -> FactReport:
        return self._run(fact_id, lambda i, j: self.size(i) >= min_i and self.size(j) >= min_j,
                         lambda i, j, a: self._mono_within(self._p3, i, a))

    def no_mono_k3(self, fact_id: str) -> FactReport:
        return self._run(fact_id, lambda i, j: self.size(i) >= 4,
                         lambda i, j, a: self._mono_within(self._k3, i, a))

    def no_common_alpha_vertex(self, fact_id: str) -> FactReport:
        def conclusion(i, j, a):
            for l in range(len(self.parts)):
                if l in (i, j):
                    continue
                if self.partition.color_between(l, i) == a and self.partition.color_between(l, j) == a:
                    return self.parts[l][0], self.parts[i][0], self.parts[j][0]
            return None
        return self._run(fact_id, lambda i, j: self.size(i) >= 2 and self.size(j) >= 2, conclusion)


def audit_facts(g: ColoredCompleteGraph, p, h: Optional[TargetGraph] = None,
                family: Optional[str] = None) -> List[FactReport]:
    """Evaluate the partition facts that apply to h's family.

    Args:
        g: Host colouring
        p: Gallai partition of g (validated first)
        h: Target pattern, used to infer the family from the preset table
        family: One of f9, f10, f12, f13; overrides inference

    Returns:
        One FactReport per applicable fact, in fact-id order

    Raises:
        InvalidPartitionError: If p is not a valid Gallai partition of g
        ValueError: If the family is unknown or cannot be inferred
    """
    from gallai import InvalidPartitionError, verify_partition

    if family is None:
        if h is None:
            raise ValueError("audit_facts needs a pattern or an explicit family")
        family = infer_family(h)
    family = family.lower()
    if family not in FAMILY_FACTS:
        raise ValueError(f"no facts recorded for family '{family}'")

    report = verify_partition(g, p)
    if not report.holds:
        raise InvalidPartitionError(report)

    checker = _FactChecker(g, p)
    handlers = {
        'F3.1.1': lambda: checker.no_mono_p4('F3.1.1'),
        'F3.1.2': lambda: checker.alpha_absent('F3.1.2', 3, 2),
        'F3.1.3': lambda: checker.no_common_alpha_vertex('F3.1.3'),
        'F4.1.1': lambda: checker.no_mono_p4('F4.1.1'),
        'F4.1.2': lambda: checker.alpha_absent('F4.1.2', 3, 3, both=True, note=SECOND_PART_READING),
        'F4.1.3': lambda: checker.no_mono_p3('F4.1.3', 3, 2),
        'F4.1.4': lambda: checker.no_mono_k3('F4.1.4'),
        'F4.1.5': lambda: checker.no_common_alpha_vertex('F4.1.5'),
        'F4.2.1': lambda: checker.no_mono_p3('F4.2.1', 4, 1),
        'F4.2.2': lambda: checker.alpha_absent('F4.2.2', 3, 2),
    }
    reports = [handlers[fact_id]() for fact_id in FAMILY_FACTS[family]]
    failed = [r.fact_id for r in reports if not r.holds]
    if failed:
        logger.info(f"Fact audit for {family}: {len(failed)} failing ({', '.join(failed)})")
    return reports

