"""
Branch-and-prune search over k-colourings of K_n.

Edges are coloured vertex by vertex: (0,1), (0,2), (1,2), (0,3), ... so every
triangle and every pattern copy is complete exactly when its last edge is
assigned, and the checks only look at copies through that edge.

Symmetry breaking:
  * colours appear in first-occurrence order (colour c only after 1..c-1);
  * optionally, each time a vertex v is completed, the prefix on 0..v must not
    get lexicographically smaller under any transposition of two of its
    vertices (followed by first-occurrence relabelling).

Budgets count attempted colour assignments, so runs replay exactly.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from catalog import TargetGraph
from coloring import COLOR_DTYPE, ColoredCompleteGraph
from config_loader import get_config
from detect import anchored_plans, check_forbid, default_plan, embed_in_adjacency, find_mono_copy_through_edge
from formulas import GrValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Forbid:
    """Constraints a colouring must avoid."""

    rainbow_k3: bool = False
    mono: Tuple[TargetGraph, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'mono', tuple(self.mono))
        if not self.rainbow_k3 and not self.mono:
            raise ValueError("Forbid needs rainbow_k3 or at least one monochromatic pattern")

    def describe(self) -> str:
        parts = []
        if self.rainbow_k3:
            parts.append('rainbow_k3')
        parts.extend(f"mono:{h.label()}" for h in self.mono)
        return ' '.join(parts)


@dataclass(frozen=True)
class SearchConfig:
    budget: int
    threads: int = 1
    split_depth: int = 6
    vertex_symmetry: bool = False

    @classmethod
    def from_settings(cls, proof: bool, **overrides) -> 'SearchConfig':
        """Defaults from config.json; proofs and witness hunts differ in vertex symmetry"""
        config = get_config()
        settings = cls(
            budget=config.search_budget,
            threads=config.search_threads,
            split_depth=config.search_split_depth,
            vertex_symmetry=config.vertex_symmetry_proofs if proof else config.vertex_symmetry_witness,
        )
        return replace(settings, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class Found:
    graph: ColoredCompleteGraph


@dataclass(frozen=True)
class Exhausted:
    nodes_visited: int
    max_depth: int


@dataclass(frozen=True)
class Budget:
    nodes_visited: int


Verdict = Union[Found, Exhausted, Budget]


@dataclass(frozen=True)
class SubtreeRecord:
    prefix: Tuple[int, ...]
    verdict: str
    nodes: int


@dataclass(frozen=True)
class SearchOutcome:
    verdict: Verdict
    elapsed: float
    n: int
    k: int
    forbid: Forbid
    config: SearchConfig
    nodes_visited: int
    max_depth: int
    prefix_nodes: int = 0
    subtrees: Tuple[SubtreeRecord, ...] = field(default=())

    @property
    def found(self) -> bool:
        return isinstance(self.verdict, Found)

    @property
    def exhausted(self) -> bool:
        return isinstance(self.verdict, Exhausted)

    @property
    def out_of_budget(self) -> bool:
        return isinstance(self.verdict, Budget)

    @property
    def graph(self) -> Optional[ColoredCompleteGraph]:
        return self.verdict.graph if isinstance(self.verdict, Found) else None

    @property
    def verdict_name(self) -> str:
        return {Found: 'found', Exhausted: 'exhausted', Budget: 'budget'}[type(self.verdict)]


class _BudgetExceeded(Exception):
    pass


class _Engine:
    """Depth-first search state; one instance per (sub)tree."""

    def __init__(self, n: int, k: int, forbid: Forbid, budget: int, vertex_symmetry: bool):
        self.n = n
        self.k = k
        self.rainbow = forbid.rainbow_k3
        self.plans = [anchored_plans(h) for h in forbid.mono if h.edge_count and h.order <= n]
        self.edges = [(u, v) for v in range(1, n) for u in range(v)]
        self.adj = [[0] * n for _ in range(k + 1)]
        self.col = [[0] * n for _ in range(n)]
        self.seq: List[int] = []
        self.max_used = 0
        self.nodes = 0
        self.budget = budget
        self.max_depth = 0
        self.vertex_symmetry = vertex_symmetry

    def _assign(self, u: int, v: int, c: int) -> None:
        self.col[u][v] = self.col[v][u] = c
        self.adj[c][u] |= 1 << v
        self.adj[c][v] |= 1 << u
        self.seq.append(c)

    def _unassign(self, u: int, v: int, c: int) -> None:
        self.col[u][v] = self.col[v][u] = 0
        self.adj[c][u] &= ~(1 << v)
        self.adj[c][v] &= ~(1 << u)
        self.seq.pop()

    def replay(self, prefix: Sequence[int]) -> None:
        for idx, c in enumerate(prefix):
            u, v = self.edges[idx]
            self._assign(u, v, c)
            self.max_used = max(self.max_used, c)
        self.max_depth = len(prefix)

    def _mono_free(self, u: int, v: int, c: int) -> bool:
        universe = (1 << (v + 1)) - 1
        adj = self.adj[c]
        for plans in self.plans:
            if find_mono_copy_through_edge(adj, plans, u, v, universe) is not None:
                return False
        return True

    def _lexmin(self, v: int) -> bool:
        col, seq, edges = self.col, self.seq, self.edges
        length = len(seq)
        for b in range(1, v + 1):
            for a in range(b):
                relabel: Dict[int, int] = {}
                for idx in range(length):
                    x, y = edges[idx]
                    x = b if x == a else a if x == b else x
                    y = b if y == a else a if y == b else y
                    c = col[x][y]
                    r = relabel.get(c)
                    if r is None:
                        r = relabel[c] = len(relabel) + 1
                    current = seq[idx]
                    if r != current:
                        if r < current:
                            return False
                        break
        return True

    def descend(self, idx: int, stop_depth: Optional[int] = None,
                collect: Optional[List[Tuple[Tuple[int, ...], int]]] = None) -> bool:
        if idx > self.max_depth:
            self.max_depth = idx
        if idx == len(self.edges):
            return True
        if stop_depth is not None and idx == stop_depth:
            collect.append((tuple(self.seq), self.nodes))
            return False
        u, v = self.edges[idx]
        adj = self.adj
        open_mask = 0
        if self.rainbow and u > 0:
            same = 0
            for d in range(1, self.max_used + 1):
                same |= adj[d][u] & adj[d][v]
            open_mask = ((1 << u) - 1) & ~same
        prev_max = self.max_used
        for c in range(1, min(self.k, prev_max + 1) + 1):
            if self.nodes >= self.budget:
                raise _BudgetExceeded()
            self.nodes += 1
            if open_mask & ~adj[c][u] & ~adj[c][v]:
                continue
            self._assign(u, v, c)
            if c > prev_max:
                self.max_used = c
            if (self._mono_free(u, v, c)
                    and (not self.vertex_symmetry or u != v - 1 or self._lexmin(v))
                    and self.descend(idx + 1, stop_depth, collect)):
                return True
            self._unassign(u, v, c)
            self.max_used = prev_max
        return False

    def graph(self) -> ColoredCompleteGraph:
        return ColoredCompleteGraph(np.array(self.col, dtype=COLOR_DTYPE), self.k)


def _run_subtree(task: Tuple[int, int, Forbid, Tuple[int, ...], int, bool]):
    n, k, forbid, prefix, budget, vertex_symmetry = task
    engine = _Engine(n, k, forbid, budget, vertex_symmetry)
    engine.replay(prefix)
    try:
        found = engine.descend(len(prefix))
    except _BudgetExceeded:
        return 'budget', engine.nodes, engine.max_depth, None
    if found:
        return 'found', engine.nodes, engine.max_depth, engine.col
    return 'exhausted', engine.nodes, engine.max_depth, None


def _trivially_unavoidable(n: int, forbid: Forbid) -> bool:
    return any(h.edge_count == 0 and h.order <= n for h in forbid.mono)


def _verified(graph: ColoredCompleteGraph, forbid: Forbid) -> ColoredCompleteGraph:
    violations = check_forbid(graph, forbid.rainbow_k3, forbid.mono)
    if violations:
        raise RuntimeError(f"search produced a colouring violating {violations[0].describe()}")
    return graph


def _search(n: int, k: int, forbid: Forbid, config: SearchConfig) -> SearchOutcome:
    if n < 1 or k < 1:
        raise ValueError(f"search needs n >= 1 and k >= 1, got n={n} k={k}")
    started = time.perf_counter()
    logger.info(f"Search n={n} k={k} forbid=[{forbid.describe()}] budget={config.budget} "
                f"threads={config.threads} vertex_symmetry={config.vertex_symmetry}")

    def outcome(verdict: Verdict, nodes: int, depth: int, prefix_nodes: int = 0,
                subtrees: Tuple[SubtreeRecord, ...] = ()) -> SearchOutcome:
        result = SearchOutcome(verdict, time.perf_counter() - started, n, k, forbid, config,
                               nodes, depth, prefix_nodes, subtrees)
        logger.info(f"Search n={n} k={k} finished: {result.verdict_name} after {nodes} nodes")
        return result

    if _trivially_unavoidable(n, forbid):
        return outcome(Exhausted(0, 0), 0, 0)

    edge_total = n * (n - 1) // 2
    if config.threads > 1 and 0 < config.split_depth < edge_total:
        return _parallel_search(n, k, forbid, config, outcome)

    engine = _Engine(n, k, forbid, config.budget, config.vertex_symmetry)
    try:
        found = engine.descend(0)
    except _BudgetExceeded:
        return outcome(Budget(engine.nodes), engine.nodes, engine.max_depth)
    if found:
        return outcome(Found(_verified(engine.graph(), forbid)), engine.nodes, engine.max_depth)
    return outcome(Exhausted(engine.nodes, engine.max_depth), engine.nodes, engine.max_depth)


def _parallel_search(n: int, k: int, forbid: Forbid, config: SearchConfig, outcome) -> SearchOutcome:
    """Farm the subtrees below split_depth out to workers, then replay the
    single-threaded node accounting over their results in prefix order.

    A subtree collected after `at` splitter nodes can never be granted more
    than budget - at nodes, so that is its worker budget; the share it is
    actually allowed also subtracts every earlier subtree's nodes.
    """
    splitter = _Engine(n, k, forbid, config.budget, config.vertex_symmetry)
    collected: List[Tuple[Tuple[int, ...], int]] = []
    try:
        splitter.descend(0, stop_depth=config.split_depth, collect=collected)
    except _BudgetExceeded:
        return outcome(Budget(splitter.nodes), splitter.nodes, splitter.max_depth)
    prefix_nodes = splitter.nodes
    logger.info(f"Split at depth {config.split_depth}: {len(collected)} subtrees, {prefix_nodes} prefix nodes")

    budget = config.budget
    tasks = [(n, k, forbid, prefix, budget - at, config.vertex_symmetry) for prefix, at in collected]
    records: List[SubtreeRecord] = []
    consumed = 0
    depth = splitter.max_depth
    with ProcessPoolExecutor(max_workers=config.threads) as pool:
        for (prefix, at), (verdict, nodes, sub_depth, col) in zip(collected, pool.map(_run_subtree, tasks)):
            allowed = budget - at - consumed
            if allowed < 0 or verdict == 'budget' or nodes > allowed:
                records.append(SubtreeRecord(prefix, 'budget', max(allowed, 0)))
                pool.shutdown(wait=True, cancel_futures=True)
                return outcome(Budget(budget), budget, depth, prefix_nodes, tuple(records))
            records.append(SubtreeRecord(prefix, verdict, nodes))
            consumed += nodes
            depth = max(depth, sub_depth)
            if verdict == 'found':
                pool.shutdown(wait=True, cancel_futures=True)
                graph = ColoredCompleteGraph(np.array(col, dtype=COLOR_DTYPE), k)
                total = at + consumed
                return outcome(Found(_verified(graph, forbid)), total, depth, prefix_nodes, tuple(records))

    subtrees = tuple(records)
    total = prefix_nodes + consumed
    if total > budget:
        return outcome(Budget(budget), budget, depth, prefix_nodes, subtrees)
    return outcome(Exhausted(total, depth), total, depth, prefix_nodes, subtrees)


def _config(proof: bool, budget: Optional[int], config: Optional[SearchConfig]) -> SearchConfig:
    if config is None:
        config = SearchConfig.from_settings(proof)
    if budget is not None:
        config = replace(config, budget=budget)
    return config


def find_free_coloring(n: int, k: int, forbid: Forbid, budget: Optional[int] = None,
                       config: Optional[SearchConfig] = None) -> SearchOutcome:
    """Look for a k-colouring of K_n avoiding every constraint of forbid.

    Returns:
        Found(graph), Exhausted when no such colouring exists, or Budget
    """
    return _search(n, k, forbid, _config(False, budget, config))


def prove_unavoidable(n: int, k: int, forbid: Forbid, budget: Optional[int] = None,
                      config: Optional[SearchConfig] = None) -> SearchOutcome:
    """Show every k-colouring of K_n hits forbid.

    Exhausted is the certificate; Found is a counterexample.
    """
    return _search(n, k, forbid, _config(True, budget, config))


def naive_decide(n: int, k: int, forbid: Forbid) -> Optional[ColoredCompleteGraph]:
    """Full enumeration of k^(n choose 2) colourings; tiny n only.

    Returns the lexicographically first free colouring in edge order.
    """
    edges = [(u, v) for v in range(1, n) for u in range(v)]
    plans = [default_plan(h) for h in forbid.mono if h.order <= n]
    if _trivially_unavoidable(n, forbid):
        return None
    universe = (1 << n) - 1
    triangles = [(a, b, c) for c in range(n) for b in range(c) for a in range(b)]
    for colors in product(range(1, k + 1), repeat=len(edges)):
        col = [[0] * n for _ in range(n)]
        adj = [[0] * n for _ in range(k + 1)]
        for (u, v), c in zip(edges, colors):
            col[u][v] = col[v][u] = c
            adj[c][u] |= 1 << v
            adj[c][v] |= 1 << u
        if forbid.rainbow_k3 and any(
                col[a][b] != col[a][c] and col[a][b] != col[b][c] and col[a][c] != col[b][c]
                for a, b, c in triangles):
            continue
        if any(plan.pattern.edge_count and embed_in_adjacency(adj[c], plan, universe) is not None
               for plan in plans for c in range(1, k + 1)):
            continue
        return ColoredCompleteGraph(np.array(col, dtype=COLOR_DTYPE), k)
    return None


def format_certificate(outcome: SearchOutcome) -> str:
    """Line-oriented record of a search run; elapsed time only in a comment"""
    config = outcome.config
    lines = [
        '# grlab search certificate',
        f"# elapsed {outcome.elapsed:.3f}s",
        f"n {outcome.n}",
        f"k {outcome.k}",
        f"forbid_rainbow_k3 {'true' if outcome.forbid.rainbow_k3 else 'false'}",
    ]
    for h in outcome.forbid.mono:
        edges = ' '.join(f"{u}-{v}" for u, v in h.sorted_edges())
        lines.append(f"forbid_mono {h.label()} order={h.order} edges={edges}")
    lines += [
        f"budget {config.budget}",
        f"threads {config.threads}",
        f"split_depth {config.split_depth}",
        f"vertex_symmetry {'true' if config.vertex_symmetry else 'false'}",
        f"verdict {outcome.verdict_name}",
        f"nodes_visited {outcome.nodes_visited}",
        f"max_depth {outcome.max_depth}",
    ]
    if outcome.subtrees:
        lines.append(f"prefix_nodes {outcome.prefix_nodes}")
        for index, record in enumerate(outcome.subtrees):
            prefix = ''.join(str(c) for c in record.prefix)
            lines.append(f"subtree {index} prefix={prefix} verdict={record.verdict} nodes={record.nodes}")
    if outcome.graph is not None:
        lines.append('witness')
        m = outcome.graph.matrix
        for u in range(outcome.n - 1):
            lines.append(' '.join(str(int(c)) for c in m[u, u + 1:]))
    return '\n'.join(lines) + '\n'


def _scan(h: TargetGraph, k: int, rainbow: bool, n_max: Optional[int], budget: Optional[int],
          config: Optional[SearchConfig]) -> GrValue:
    if n_max is None:
        n_max = get_config().pinning_n_max
    forbid = Forbid(rainbow, (h,))
    lo, hi = h.order, None
    unresolved: List[int] = []
    for n in range(h.order, n_max + 1):
        result = prove_unavoidable(n, k, forbid, budget, config)
        if result.found:
            lo = n + 1
        elif result.exhausted:
            hi = n
            break
        else:
            unresolved.append(n)
    note = f"budget exhausted at n={','.join(map(str, unresolved))}" if unresolved else None
    if hi is None:
        note = note or f"unresolved up to n={n_max}"
    return GrValue(lo, hi, k, h.label(), note)


def compute_r2(h: TargetGraph, n_max: Optional[int] = None, budget: Optional[int] = None,
               config: Optional[SearchConfig] = None) -> GrValue:
    """r2(h) by scanning n upward from the order of h"""
    return _scan(h, 2, False, n_max, budget, config)


def compute_gr(h: TargetGraph, k: int, n_max: Optional[int] = None, budget: Optional[int] = None,
               config: Optional[SearchConfig] = None) -> GrValue:
    """gr_k(K3 : h) by scanning n upward with rainbow triangles forbidden"""
    return _scan(h, k, True, n_max, budget, config)
