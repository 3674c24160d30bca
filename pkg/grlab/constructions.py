"""
Lower-bound witness colourings.

Every generator first builds a WitnessRecipe (named steps: base graphs,
substitutions into a base, cones) and then evaluates it. The recipe trace is
what `grlab construct --trace` prints.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from catalog import CatalogId
from coloring import COLOR_DTYPE, ColoredCompleteGraph, monochromatic
from gallai import substitute

logger = logging.getLogger(__name__)

F9_F10_BASE = 'f9_f10_base'
F12_F13_BASE = 'f12_f13_base'


class BaseWitnessUnavailable(RuntimeError):
    """A tower needs a committed 2-colour base fixture that is missing."""


@dataclass(frozen=True)
class BaseStep:
    name: str
    graph: ColoredCompleteGraph
    description: str


@dataclass(frozen=True)
class SubstituteStep:
    name: str
    base: str
    parts: Tuple[str, ...]


@dataclass(frozen=True)
class ConeStep:
    name: str
    source: str
    color: int


Step = Union[BaseStep, SubstituteStep, ConeStep]


@dataclass(frozen=True)
class WitnessRecipe:
    steps: Tuple[Step, ...]
    target: CatalogId
    claimed_order: int
    claimed_colors: int

    def trace_lines(self) -> List[str]:
        graphs = _evaluate_steps(self.steps)
        lines = [f"target {self.target} order={self.claimed_order} colors={self.claimed_colors}"]
        for step in self.steps:
            g = graphs[step.name]
            if isinstance(step, BaseStep):
                lines.append(f"base {step.name} = {step.description} n={g.n}")
            elif isinstance(step, SubstituteStep):
                lines.append(f"substitute {step.name} = {step.base}[{', '.join(step.parts)}] n={g.n}")
            else:
                lines.append(f"cone {step.name} = {step.source} + apex color {step.color} n={g.n}")
        return lines

    def substitution_layers(self) -> List[Tuple[FrozenSet[int], FrozenSet[int]]]:
        """(base colours, colours inside the parts) per substitute step"""
        graphs = _evaluate_steps(self.steps)
        layers = []
        for step in self.steps:
            if isinstance(step, SubstituteStep):
                inner = frozenset().union(*(graphs[p].colors_used for p in step.parts))
                layers.append((graphs[step.base].colors_used, inner))
        return layers


def _evaluate_steps(steps: Sequence[Step]) -> Dict[str, ColoredCompleteGraph]:
    graphs: Dict[str, ColoredCompleteGraph] = {}
    for step in steps:
        if isinstance(step, BaseStep):
            graphs[step.name] = step.graph
        elif isinstance(step, SubstituteStep):
            graphs[step.name] = substitute(graphs[step.base], [graphs[p] for p in step.parts])
        else:
            graphs[step.name] = cone(graphs[step.source], step.color)
    return graphs


def evaluate_recipe(recipe: WitnessRecipe) -> ColoredCompleteGraph:
    """Evaluate and check the claims.

    Raises:
        ValueError: If the result disagrees with claimed_order or claimed_colors
    """
    if not recipe.steps:
        raise ValueError("empty recipe")
    result = _evaluate_steps(recipe.steps)[recipe.steps[-1].name]
    if result.n != recipe.claimed_order:
        raise ValueError(f"recipe for {recipe.target} built {result.n} vertices, claimed {recipe.claimed_order}")
    if len(result.colors_used) != recipe.claimed_colors:
        raise ValueError(
            f"recipe for {recipe.target} used {len(result.colors_used)} colors, claimed {recipe.claimed_colors}")
    return result


def pentagon_base(c1: int, c2: int) -> ColoredCompleteGraph:
    """K5 with colour c1 on the cycle 0-1-2-3-4 and c2 on the complementary cycle"""
    if c1 == c2:
        raise ValueError(f"pentagon colours must differ, got {c1} twice")
    return circulant(5, {1: c1, 2: c2})


def circulant(order: int, distance_colors: Dict[int, int]) -> ColoredCompleteGraph:
    """Colour uv by distance_colors[min(|u-v|, order-|u-v|)]"""
    idx = np.arange(order)
    diff = np.abs(idx[:, None] - idx[None, :])
    dist = np.minimum(diff, order - diff)
    lookup = np.zeros(order // 2 + 1, dtype=COLOR_DTYPE)
    for d, c in distance_colors.items():
        lookup[d] = c
    m = lookup[dist]
    if np.any(m[~np.eye(order, dtype=bool)] == 0):
        raise ValueError(f"distance classes do not cover every pair of Z_{order}")
    return ColoredCompleteGraph(m)


def cone(g: ColoredCompleteGraph, c: int) -> ColoredCompleteGraph:
    """Add vertex n joined to every vertex in colour c"""
    n = g.n
    m = np.zeros((n + 1, n + 1), dtype=COLOR_DTYPE)
    m[:n, :n] = g.matrix
    m[n, :n] = c
    m[:n, n] = c
    return ColoredCompleteGraph(m, max(g.k, c))


def _pentagon_tower(first: BaseStep, first_color: int, layers: int, target: CatalogId,
                    claimed_order: int) -> WitnessRecipe:
    steps: List[Step] = [first]
    current = first.name
    for layer in range(layers):
        c1 = first_color + 2 * layer
        c2 = c1 + 1
        pentagon = f"P{layer + 1}"
        steps.append(BaseStep(pentagon, pentagon_base(c1, c2), f"pentagon({c1},{c2})"))
        name = f"G{layer + 1}"
        steps.append(SubstituteStep(name, pentagon, (current,) * 5))
        current = name
    claimed_colors = len(first.graph.colors_used) + 2 * layers
    return WitnessRecipe(tuple(steps), target, claimed_order, claimed_colors)


def _base_fixture(name: str, base: Optional[ColoredCompleteGraph]) -> ColoredCompleteGraph:
    if base is not None:
        return base
    from fixture_store import FixtureStore
    store = FixtureStore()
    if not store.has_fixture(name):
        raise BaseWitnessUnavailable(
            f"base witness '{name}' missing from {store.fixtures_dir}; run regenerate_fixtures.py")
    return store.load_fixture(name)


def _two_colour_tower(k: int, base_name: str, even_base: Optional[ColoredCompleteGraph], alias: str,
                      even_factor: int) -> WitnessRecipe:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    target = CatalogId('alias', (), alias)
    if k % 2:
        layers = (k - 1) // 2
        first = BaseStep('G0', monochromatic(4, 1), 'mono K4 color 1')
        return _pentagon_tower(first, 2, layers, target, 4 * 5 ** layers)
    layers = (k - 2) // 2
    graph = _base_fixture(base_name, even_base)
    if graph.n != even_factor or not graph.colors_used <= {1, 2}:
        raise ValueError(f"base witness '{base_name}' must be a 2-coloured K{even_factor}, got {graph!r}")
    first = BaseStep('G0', graph, f"{base_name} fixture")
    return _pentagon_tower(first, 3, layers, target, even_factor * 5 ** layers)


def recipe_f9_f10(k: int, base: Optional[ColoredCompleteGraph] = None) -> WitnessRecipe:
    return _two_colour_tower(k, F9_F10_BASE, base, 'f10', 8)


def witness_f9_f10(k: int, base: Optional[ColoredCompleteGraph] = None) -> ColoredCompleteGraph:
    """Tower avoiding F9 and F10: mono K4 for odd k, the K8 base for even k.

    Args:
        k: Colour count (>= 1)
        base: 2-coloured K8 to use instead of the committed fixture

    Raises:
        ValueError: k < 1
        BaseWitnessUnavailable: Even k without a base fixture
    """
    return evaluate_recipe(recipe_f9_f10(k, base))


def recipe_f12_f13(k: int, base: Optional[ColoredCompleteGraph] = None) -> WitnessRecipe:
    return _two_colour_tower(k, F12_F13_BASE, base, 'f13', 9)


def witness_f12_f13(k: int, base: Optional[ColoredCompleteGraph] = None) -> ColoredCompleteGraph:
    """As witness_f9_f10 with the K9 base"""
    return evaluate_recipe(recipe_f12_f13(k, base))


def recipe_k3(k: int) -> WitnessRecipe:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    target = CatalogId('complete', (3,))
    if k % 2 == 0:
        layers = k // 2
        first = BaseStep('G0', monochromatic(1, 1), 'K1')
        recipe = _pentagon_tower(first, 1, layers, target, 5 ** layers)
        return WitnessRecipe(recipe.steps, target, recipe.claimed_order, 2 * layers)
    layers = (k - 1) // 2
    first = BaseStep('G0', monochromatic(2, 1), 'mono K2 color 1')
    return _pentagon_tower(first, 2, layers, target, 2 * 5 ** layers)


def witness_k3(k: int) -> ColoredCompleteGraph:
    """Pentagon tower without monochromatic or rainbow triangles"""
    return evaluate_recipe(recipe_k3(k))


def _star_order(n: int) -> int:
    return 2 * n - 1 - (1 if n % 2 == 0 else 0)


def witness_star(n: int) -> ColoredCompleteGraph:
    """Circulant 2-colouring of K_{2n-1-eps} with both colour degrees <= n-1.

    eps is 1 for even n. Odd n splits the distances 1..n-1 evenly; even n
    gives colour 2 the perfect matching on top of its half.
    """
    if n < 3:
        raise ValueError(f"star witness needs n >= 3, got {n}")
    order = _star_order(n)
    if n % 2:
        split = (n - 1) // 2
    else:
        split = (n - 2) // 2
    classes = {d: (1 if d <= split else 2) for d in range(1, order // 2 + 1)}
    return circulant(order, classes)


def recipe_f2n(k: int, n: int) -> WitnessRecipe:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < 3:
        raise ValueError(f"f2n needs n >= 3, got {n}")
    target = CatalogId('f2n', (n,))
    steps: List[Step] = []
    if k == 1:
        steps.append(BaseStep('G1', monochromatic(n + 1, 1), f"mono K{n + 1} color 1"))
        return WitnessRecipe(tuple(steps), target, n + 1, 1)
    if k == 2 or n in (3, 4):
        star = witness_star(n)
        steps.append(BaseStep('G2', star, f"star witness n={n}"))
        current = 'G2'
        for color in range(3, k + 1):
            name = f"G{color}"
            steps.append(ConeStep(name, current, color))
            current = name
        return WitnessRecipe(tuple(steps), target, star.n + k - 2, k)

    steps.append(BaseStep('P', pentagon_base(2, 3), 'pentagon(2,3)'))
    if n % 2 == 0:
        half = n // 2
        steps.append(BaseStep('A', monochromatic(half, 1), f"mono K{half} color 1"))
        steps.append(BaseStep('B', monochromatic(half - 1, 1), f"mono K{half - 1} color 1"))
        blocks = ('A', 'B', 'B', 'B', 'B')
        order = 5 * half - 4
    else:
        half = (n - 1) // 2
        steps.append(BaseStep('A', monochromatic(half, 1), f"mono K{half} color 1"))
        blocks = ('A',) * 5
        order = 5 * half
    steps.append(SubstituteStep('G3', 'P', blocks))
    current = 'G3'
    for color in range(4, k + 1):
        name = f"G{color}"
        steps.append(ConeStep(name, current, color))
        current = name
    order += k - 3
    if n == 5:
        steps.append(ConeStep('G', current, 1))
        order += 1
    return WitnessRecipe(tuple(steps), target, order, k)


def witness_f2n(k: int, n: int) -> ColoredCompleteGraph:
    """Colouring without rainbow triangles or monochromatic F_{2,n}.

    n in {3, 4}: star witness then one cone per extra colour. n >= 5: colour-1
    cliques substituted into pentagon(2,3), cones in colours 4..k, and for
    n = 5 one more cone in colour 1.
    """
    return evaluate_recipe(recipe_f2n(k, n))


def _split(rng: np.random.Generator, n: int, m: int) -> List[int]:
    cuts = np.sort(rng.choice(np.arange(1, n), size=m - 1, replace=False))
    return np.diff(np.concatenate(([0], cuts, [n]))).astype(int).tolist()


def _random_gallai(rng: np.random.Generator, n: int, max_colors: int) -> ColoredCompleteGraph:
    if n == 1:
        return monochromatic(1, 1)
    m = int(rng.integers(2, min(n, 5) + 1))
    if max_colors >= 2:
        pair = rng.choice(np.arange(1, max_colors + 1), size=2, replace=False)
    else:
        pair = np.array([1, 1])
    base = np.zeros((m, m), dtype=COLOR_DTYPE)
    upper = np.triu_indices(m, 1)
    base[upper] = pair[rng.integers(0, 2, size=upper[0].size)]
    base = base + base.T
    parts = [_random_gallai(rng, size, max_colors) for size in _split(rng, n, m)]
    return substitute(ColoredCompleteGraph(base), parts)


def random_gallai_coloring(rng: np.random.Generator, max_order: int = 60,
                           max_colors: int = 6) -> ColoredCompleteGraph:
    """Random rainbow-free colouring built by nested 2-coloured substitutions"""
    n = int(rng.integers(2, max_order + 1))
    g = _random_gallai(rng, n, max_colors)
    return ColoredCompleteGraph(g.matrix, max_colors)


def recipe_for_target(target: Union[str, CatalogId], k: int) -> WitnessRecipe:
    """Recipe for a `grlab construct --target` value.

    Accepts f9/f10/f12/f13, f11 or banner, k3, f2n:n and star:n (k <= 2).

    Raises:
        UnknownPatternError: If the target names no pattern
        ValueError: If the target has no construction for k
    """
    cid = CatalogId.parse(target) if isinstance(target, str) else target
    if cid.tag == 'alias' and cid.label in ('f9', 'f10'):
        return recipe_f9_f10(k)
    if cid.tag == 'alias' and cid.label in ('f12', 'f13'):
        return recipe_f12_f13(k)
    if (cid.tag == 'alias' and cid.label == 'f11') or (cid.tag == 'named' and cid.label == 'banner'):
        return recipe_f2n(k, 3)
    if cid.tag == 'complete' and cid.params == (3,):
        return recipe_k3(k)
    if cid.tag == 'f2n':
        return recipe_f2n(k, cid.params[0])
    if cid.tag == 'star':
        n = cid.params[0]
        if k == 1:
            step = BaseStep('G1', monochromatic(n, 1), f"mono K{n} color 1")
            return WitnessRecipe((step,), cid, n, 1)
        if k == 2:
            graph = witness_star(n)
            return WitnessRecipe((BaseStep('G2', graph, f"star witness n={n}"),), cid, graph.n, 2)
        raise ValueError(f"star targets are built for k <= 2 only, got k={k}")
    raise ValueError(f"no construction for target '{cid}'")
