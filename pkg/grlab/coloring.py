"""
Edge-coloured complete graphs.

A ColoredCompleteGraph is an immutable n x n colour matrix (0 on the diagonal,
colours 1..k elsewhere). Mutation happens only on a ColoringBuilder, which has a
single owner and produces a graph through build().
"""

import logging
import threading
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

COLOR_DTYPE = np.int16
MAX_COLORS = int(np.iinfo(COLOR_DTYPE).max)


class ColoredCompleteGraph:
    """A complete graph on n vertices with a colour in 1..k on every edge."""

    __slots__ = ('_matrix', '_k', '_adjacency', '_adjacency_lock', '_colors_used')

    def __init__(self, matrix: np.ndarray, k: Optional[int] = None):
        """Wrap a colour matrix.

        Args:
            matrix: Square symmetric integer matrix with a zero diagonal
            k: Declared colour count; defaults to the largest colour used

        Raises:
            ValueError: If the matrix is not a valid colouring
        """
        m = np.array(matrix, dtype=COLOR_DTYPE, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"colour matrix must be square and non-empty, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("colour matrix is not symmetric")
        if np.any(np.diagonal(m) != 0):
            raise ValueError("self-pairs must not be coloured")

        n = m.shape[0]
        off_diagonal = m[~np.eye(n, dtype=bool)]
        top = int(off_diagonal.max()) if off_diagonal.size else 0
        if off_diagonal.size and int(off_diagonal.min()) < 1:
            raise ValueError("every pair needs a colour >= 1")
        if k is None:
            k = max(top, 1)
        if not 1 <= k <= MAX_COLORS:
            raise ValueError(f"colour count must be in 1..{MAX_COLORS}, got {k}")
        if top > k:
            raise ValueError(f"colour {top} exceeds declared colour count {k}")

        m.setflags(write=False)
        self._matrix = m
        self._k = int(k)
        self._adjacency: Dict[int, Tuple[int, ...]] = {}
        self._adjacency_lock = threading.Lock()
        self._colors_used: FrozenSet[int] = frozenset(int(c) for c in np.unique(off_diagonal))

    @property
    def n(self) -> int:
        return self._matrix.shape[0]

    @property
    def k(self) -> int:
        return self._k

    @property
    def matrix(self) -> np.ndarray:
        """Read-only colour matrix"""
        return self._matrix

    @property
    def colors_used(self) -> FrozenSet[int]:
        return self._colors_used

    def color(self, u: int, v: int) -> int:
        """Colour of the edge uv"""
        if u == v:
            raise ValueError(f"vertex {u} has no self-pair colour")
        return int(self._matrix[u, v])

    def edges(self) -> Iterable[Tuple[int, int, int]]:
        """Yield (u, v, colour) for u < v in row order"""
        n = self.n
        for u in range(n):
            row = self._matrix[u]
            for v in range(u + 1, n):
                yield u, v, int(row[v])

    def adjacency(self, color: int) -> Tuple[int, ...]:
        """Per-vertex neighbourhood bitsets of one colour class.

        Bit v of entry u is set iff c(uv) == color. Computed on first use and
        cached; the graph is immutable so the cache never goes stale.
        """
        with self._adjacency_lock:
            cached = self._adjacency.get(color)
            if cached is not None:
                return cached
        masks = tuple(
            int.from_bytes(np.packbits(row == color, bitorder='little').tobytes(), 'little')
            for row in self._matrix
        )
        with self._adjacency_lock:
            self._adjacency.setdefault(color, masks)
        return masks

    def color_degrees(self, color: int) -> np.ndarray:
        return (self._matrix == color).sum(axis=1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredCompleteGraph):
            return NotImplemented
        return self._k == other._k and np.array_equal(self._matrix, other._matrix)

    def __hash__(self) -> int:
        return hash((self._k, self._matrix.shape[0], self._matrix.tobytes()))

    def __repr__(self) -> str:
        return f"ColoredCompleteGraph(n={self.n}, k={self.k}, colors_used={sorted(self.colors_used)})"


class ColoringBuilder:
    """Mutable single-owner colouring under construction."""

    def __init__(self, n: int, k: int):
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        if k < 1:
            raise ValueError(f"colour count must be >= 1, got {k}")
        self.n = n
        self.k = k
        self._matrix = np.zeros((n, n), dtype=COLOR_DTYPE)

    def set(self, u: int, v: int, color: int) -> 'ColoringBuilder':
        if u == v:
            raise ValueError(f"cannot colour self-pair ({u}, {u})")
        if not 1 <= color <= self.k:
            raise ValueError(f"colour {color} outside 1..{self.k}")
        self._matrix[u, v] = color
        self._matrix[v, u] = color
        return self

    def get(self, u: int, v: int) -> Optional[int]:
        c = int(self._matrix[u, v])
        return c or None

    def is_colored(self, u: int, v: int) -> bool:
        return self._matrix[u, v] != 0

    def missing_pairs(self) -> List[Tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._matrix == 0, 1))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    def build(self) -> ColoredCompleteGraph:
        """Freeze into a ColoredCompleteGraph.

        Raises:
            ValueError: If some pair is still uncoloured
        """
        missing = self.missing_pairs()
        if missing:
            u, v = missing[0]
            raise ValueError(f"{len(missing)} pair(s) uncoloured, first ({u}, {v})")
        return ColoredCompleteGraph(self._matrix, self.k)


def monochromatic(n: int, color: int = 1, k: Optional[int] = None) -> ColoredCompleteGraph:
    """K_n with every edge in one colour"""
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    m = np.full((n, n), color, dtype=COLOR_DTYPE)
    np.fill_diagonal(m, 0)
    return ColoredCompleteGraph(m, k if k is not None else color)


def from_function(n: int, fn: Callable[[int, int], int], k: Optional[int] = None) -> ColoredCompleteGraph:
    """Build K_n colouring each pair u < v with fn(u, v)"""
    m = np.zeros((n, n), dtype=COLOR_DTYPE)
    for u in range(n):
        for v in range(u + 1, n):
            m[u, v] = m[v, u] = fn(u, v)
    return ColoredCompleteGraph(m, k)


def from_rows(rows: Sequence[Sequence[int]], k: Optional[int] = None) -> ColoredCompleteGraph:
    """Build from upper-triangle rows: rows[u] lists c(u,u+1) .. c(u,n-1)"""
    n = len(rows) + 1
    m = np.zeros((n, n), dtype=COLOR_DTYPE)
    for u, row in enumerate(rows):
        if len(row) != n - 1 - u:
            raise ValueError(f"row {u} has {len(row)} entries, expected {n - 1 - u}")
        m[u, u + 1:] = row
        m[u + 1:, u] = row
    return ColoredCompleteGraph(m, k)


def upper_rows(g: ColoredCompleteGraph) -> List[List[int]]:
    m = g.matrix
    return [[int(c) for c in m[u, u + 1:]] for u in range(g.n - 1)]


def with_color_count(g: ColoredCompleteGraph, k: int) -> ColoredCompleteGraph:
    """Same colouring with a different declared colour count"""
    return ColoredCompleteGraph(g.matrix, k)


def colors_within(g: ColoredCompleteGraph, vertices: Iterable[int]) -> FrozenSet[int]:
    """C(U): colours on edges inside U"""
    idx = np.fromiter(sorted(set(vertices)), dtype=np.intp)
    if idx.size < 2:
        return frozenset()
    block = g.matrix[np.ix_(idx, idx)]
    return frozenset(int(c) for c in np.unique(block[np.triu_indices(idx.size, 1)]))


def colors_between(g: ColoredCompleteGraph, first: Iterable[int], second: Iterable[int]) -> FrozenSet[int]:
    """C(U, V): colours on edges with one end in U and the other in V"""
    a = np.fromiter(sorted(set(first)), dtype=np.intp)
    b = np.fromiter(sorted(set(second)), dtype=np.intp)
    if np.intersect1d(a, b).size:
        raise ValueError("vertex sets must be disjoint")
    if a.size == 0 or b.size == 0:
        return frozenset()
    return frozenset(int(c) for c in np.unique(g.matrix[np.ix_(a, b)]))


def single_color_between(g: ColoredCompleteGraph, first: Iterable[int], second: Iterable[int]) -> Optional[int]:
    """c(U, V) when all edges between U and V share one colour, else None"""
    colors = colors_between(g, first, second)
    return next(iter(colors)) if len(colors) == 1 else None


def induced(g: ColoredCompleteGraph, vertices: Iterable[int]) -> ColoredCompleteGraph:
    """G[U], renumbered in ascending vertex order"""
    idx = np.fromiter(sorted(set(vertices)), dtype=np.intp)
    if idx.size == 0:
        raise ValueError("cannot induce on an empty vertex set")
    return ColoredCompleteGraph(g.matrix[np.ix_(idx, idx)], g.k)


def delete_vertices(g: ColoredCompleteGraph, vertices: Iterable[int]) -> ColoredCompleteGraph:
    """G - U"""
    drop = set(vertices)
    return induced(g, (v for v in range(g.n) if v not in drop))


def permute(g: ColoredCompleteGraph, perm: Sequence[int]) -> ColoredCompleteGraph:
    """Relabel vertices: vertex v of the result is vertex perm[v] of g"""
    idx = np.asarray(perm, dtype=np.intp)
    if sorted(idx.tolist()) != list(range(g.n)):
        raise ValueError("perm must be a permutation of the vertex set")
    return ColoredCompleteGraph(g.matrix[np.ix_(idx, idx)], g.k)


def relabel_colors(g: ColoredCompleteGraph, mapping: Dict[int, int], k: Optional[int] = None) -> ColoredCompleteGraph:
    """Rename colours through mapping; colours not in mapping are kept"""
    lookup = np.arange(max(g.k, max(mapping, default=0)) + 1, dtype=COLOR_DTYPE)
    for old, new in mapping.items():
        lookup[old] = new
    m = lookup[g.matrix]
    return ColoredCompleteGraph(m, k)
