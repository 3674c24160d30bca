"""
Gallai partitions: decomposition, verification, reduced graphs and the
substitution (blow-up) operator.

Decomposition scans colour pairs {i, j} (i == j allowed) in lexicographic
order. The edges coloured neither i nor j form an auxiliary graph; when it is
disconnected its components are the parts. All edges between two components
lie in {i, j}, and a rainbow-free colouring cannot mix both colours between
one pair of components, so every pair is monochromatic.
"""

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from coloring import COLOR_DTYPE, ColoredCompleteGraph
from detect import find_rainbow_triangle

logger = logging.getLogger(__name__)


class RainbowTriangleError(ValueError):
    """The colouring has a rainbow triangle, so no Gallai partition exists."""

    def __init__(self, triangle: Tuple[int, int, int]):
        self.triangle = triangle
        listed = ','.join(str(v + 1) for v in triangle)
        super().__init__(f"rainbow triangle on vertices {listed}")


@dataclass(frozen=True)
class GallaiPartition:
    """Parts in canonical order (decreasing size, then smallest member).

    pair_colors holds (i, j, c) for every part pair i < j.
    """

    parts: Tuple[Tuple[int, ...], ...]
    between_colors: FrozenSet[int]
    pair_colors: Tuple[Tuple[int, int, int], ...]
    _lookup: Dict[Tuple[int, int], int] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, '_lookup', {(i, j): c for i, j, c in self.pair_colors})

    @property
    def m(self) -> int:
        return len(self.parts)

    @property
    def r(self) -> int:
        """Number of parts with at least three vertices"""
        return sum(1 for part in self.parts if len(part) >= 3)

    @property
    def sizes(self) -> List[int]:
        return [len(part) for part in self.parts]

    def color_between(self, i: int, j: int) -> Optional[int]:
        if i == j:
            raise ValueError("a part has no colour to itself")
        return self._lookup.get((min(i, j), max(i, j)))


@dataclass(frozen=True)
class ValidationReport:
    holds: bool
    problems: Tuple[str, ...] = ()
    pair: Optional[Tuple[int, int]] = None
    color: Optional[int] = None


class InvalidPartitionError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"invalid Gallai partition: {'; '.join(report.problems)}")


ReducedGraph = ColoredCompleteGraph


def canonical_parts(groups: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    parts = [tuple(sorted(group)) for group in groups]
    parts.sort(key=lambda part: (-len(part), part[0]))
    return tuple(parts)


def partition_from_parts(g: ColoredCompleteGraph, groups: Sequence[Sequence[int]]) -> GallaiPartition:
    """Partition with pair colours read off g (first vertex of each part)"""
    parts = canonical_parts(groups)
    m = g.matrix
    pair_colors = tuple(
        (i, j, int(m[parts[i][0], parts[j][0]]))
        for i in range(len(parts)) for j in range(i + 1, len(parts))
    )
    return GallaiPartition(parts, frozenset(c for _, _, c in pair_colors), pair_colors)


def _require_gallai(g: ColoredCompleteGraph) -> None:
    if g.n < 2:
        raise ValueError(f"a Gallai partition needs n >= 2, got n={g.n}")
    triangle = find_rainbow_triangle(g)
    if triangle is not None:
        raise RainbowTriangleError(triangle)


def _color_pairs(g: ColoredCompleteGraph) -> Iterator[Tuple[int, int]]:
    return combinations_with_replacement(sorted(g.colors_used), 2)


def _components_avoiding(g: ColoredCompleteGraph, i: int, j: int) -> Tuple[int, np.ndarray]:
    m = g.matrix
    mask = (m != i) & (m != j) & (m != 0)
    return connected_components(csr_matrix(mask), directed=False)


def _candidates(g: ColoredCompleteGraph) -> Iterator[Tuple[Tuple[int, int], np.ndarray]]:
    for i, j in _color_pairs(g):
        count, labels = _components_avoiding(g, i, j)
        if count >= 2:
            yield (i, j), labels


def _groups(labels: np.ndarray) -> List[List[int]]:
    groups: Dict[int, List[int]] = {}
    for v, label in enumerate(labels.tolist()):
        groups.setdefault(label, []).append(v)
    return list(groups.values())


def find_gallai_partition(g: ColoredCompleteGraph) -> GallaiPartition:
    """First partition of the colour-pair family.

    With at most two colours in use the all-singletons partition is returned.

    Raises:
        RainbowTriangleError: If g is not a Gallai colouring
        ValueError: If n < 2
    """
    _require_gallai(g)
    if len(g.colors_used) <= 2:
        return partition_from_parts(g, [[v] for v in range(g.n)])
    for pair, labels in _candidates(g):
        logger.debug(f"Colour pair {pair} splits {g.n} vertices")
        return partition_from_parts(g, _groups(labels))
    # unreachable for rainbow-free input
    raise RuntimeError("no colour pair disconnects a rainbow-free colouring")


def minimize_parts(g: ColoredCompleteGraph) -> GallaiPartition:
    """Partition with the fewest parts over the whole colour-pair family.

    Minimal within the family only; ties go to the first pair scanned.
    """
    _require_gallai(g)
    best: Optional[np.ndarray] = None
    best_count = g.n + 1
    for _, labels in _candidates(g):
        count = int(labels.max()) + 1
        if count < best_count:
            best, best_count = labels, count
    if best is None:
        raise RuntimeError("no colour pair disconnects a rainbow-free colouring")
    return partition_from_parts(g, _groups(best))


def verify_partition(g: ColoredCompleteGraph, p: GallaiPartition) -> ValidationReport:
    """Check every Gallai-partition clause of p against g"""
    problems: List[str] = []
    n = g.n
    if p.m < 2:
        return ValidationReport(False, (f"m>=2 violated: {p.m} part(s)",))

    labels = np.full(n, -1, dtype=np.int64)
    for index, part in enumerate(p.parts):
        if not part:
            problems.append(f"part {index + 1} is empty")
        for v in part:
            if not 0 <= v < n:
                problems.append(f"vertex {v + 1} outside 1..{n}")
            elif labels[v] >= 0:
                problems.append(f"vertex {v + 1} in parts {labels[v] + 1} and {index + 1}")
            else:
                labels[v] = index
    uncovered = np.flatnonzero(labels < 0)
    if uncovered.size:
        problems.append(f"{uncovered.size} vertex/vertices uncovered, first {int(uncovered[0]) + 1}")
    if problems:
        return ValidationReport(False, tuple(problems))

    if canonical_parts(p.parts) != tuple(tuple(part) for part in p.parts):
        problems.append("parts not ordered by decreasing size then smallest member")

    m = p.m
    us, vs = np.triu_indices(n, 1)
    lu, lv = labels[us], labels[vs]
    between = lu != lv
    a = np.minimum(lu[between], lv[between])
    b = np.maximum(lu[between], lv[between])
    colors = g.matrix[us[between], vs[between]].astype(np.int64)
    keys = np.unique((a * m + b) * (g.k + 1) + colors)
    pair_keys, color_values = keys // (g.k + 1), keys % (g.k + 1)

    bad_pair: Optional[Tuple[int, int]] = None
    bad_color: Optional[int] = None
    seen: Dict[Tuple[int, int], List[int]] = {}
    for key, c in zip(pair_keys.tolist(), color_values.tolist()):
        seen.setdefault((key // m, key % m), []).append(c)
    for (i, j), cs in sorted(seen.items()):
        if len(cs) > 1:
            problems.append(f"parts {i + 1},{j + 1} carry colors {cs}")
            if bad_pair is None:
                bad_pair, bad_color = (i, j), cs[1]
            continue
        recorded = p.color_between(i, j)
        if recorded != cs[0]:
            problems.append(f"parts {i + 1},{j + 1} recorded color {recorded}, actual {cs[0]}")
            if bad_pair is None:
                bad_pair, bad_color = (i, j), cs[0]

    actual_between = sorted({c for cs in seen.values() for c in cs})
    if len(actual_between) > 2:
        third = actual_between[2]
        problems.append(f"{len(actual_between)} colors between parts, third color {third}")
        if bad_color is None:
            bad_color = third
            bad_pair = next(pair for pair, cs in sorted(seen.items()) if third in cs)
    if len(p.between_colors) > 2:
        problems.append(f"between_colors lists {len(p.between_colors)} colors")
    stray = {c for _, _, c in p.pair_colors} - set(p.between_colors)
    if stray:
        problems.append(f"pair colors {sorted(stray)} missing from between_colors")

    return ValidationReport(not problems, tuple(problems), bad_pair, bad_color)


def reduce(g: ColoredCompleteGraph, p: GallaiPartition) -> ReducedGraph:
    """Reduced graph: vertex i stands for parts[i]

    Raises:
        InvalidPartitionError: If p fails verify_partition
    """
    report = verify_partition(g, p)
    if not report.holds:
        raise InvalidPartitionError(report)
    m = np.zeros((p.m, p.m), dtype=COLOR_DTYPE)
    for i, j, c in p.pair_colors:
        m[i, j] = m[j, i] = c
    return ColoredCompleteGraph(m, g.k)


def substitute(base: ColoredCompleteGraph, parts: Sequence[ColoredCompleteGraph]) -> ColoredCompleteGraph:
    """Blow-up: vertex i of base becomes a copy of parts[i].

    The result declares k = largest colour used (at least 1).

    Raises:
        ValueError: If parts is empty or does not match base.n
    """
    if not parts:
        raise ValueError("substitute needs at least one part")
    if len(parts) != base.n:
        raise ValueError(f"base has {base.n} vertices but {len(parts)} parts were given")
    sizes = [part.n for part in parts]
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    owner = np.repeat(np.arange(base.n), sizes)
    m = base.matrix[np.ix_(owner, owner)].astype(COLOR_DTYPE)
    for index, part in enumerate(parts):
        lo, hi = offsets[index], offsets[index + 1]
        m[lo:hi, lo:hi] = part.matrix
    top = int(m.max()) if m.size else 0
    return ColoredCompleteGraph(m, max(top, 1))


def partition_to_json(p: GallaiPartition) -> str:
    """Machine-facing JSON with 0-based vertices"""
    payload = {
        'parts': [list(part) for part in p.parts],
        'between_colors': sorted(p.between_colors),
        'pair_colors': [list(entry) for entry in p.pair_colors],
    }
    return json.dumps(payload)


def partition_from_json(text: str) -> GallaiPartition:
    data = json.loads(text)
    try:
        parts = tuple(tuple(int(v) for v in part) for part in data['parts'])
        between = frozenset(int(c) for c in data['between_colors'])
        pair_colors = tuple(sorted((int(i), int(j), int(c)) for i, j, c in data['pair_colors']))
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed partition JSON: {e}")
    return GallaiPartition(parts, between, pair_colors)
