import numpy as np
import pytest

from catalog import CatalogId, complete, f2n, named
from coloring import monochromatic, with_color_count
from constructions import (BaseWitnessUnavailable, ConeStep, SubstituteStep, WitnessRecipe, circulant, cone,
                           evaluate_recipe, pentagon_base, recipe_f2n, recipe_f9_f10, recipe_for_target, recipe_k3,
                           witness_f2n, witness_f9_f10, witness_f12_f13, witness_k3, witness_star)
from detect import find_mono_copy, find_rainbow_triangle
from formulas import gr_value
from gallai import find_gallai_partition, reduce, substitute
from gcg_codec import encode_gcg
from presets import fixture_consistent_candidates


def _class_is_five_cycle(g, color):
    degrees = g.color_degrees(color)
    return g.n == 5 and bool(np.all(degrees == 2))


def _free_of(g, labels):
    return all(find_mono_copy(g, named(label)) is None for label in labels if g.n >= 5)


@pytest.mark.parametrize('c1, c2', [(1, 2), (7, 9)])
def test_pentagon_base(c1, c2):
    g = pentagon_base(c1, c2)
    assert g.colors_used == frozenset({c1, c2})
    assert _class_is_five_cycle(g, c1)
    assert _class_is_five_cycle(g, c2)
    assert find_mono_copy(g, complete(3)) is None


def test_pentagon_needs_two_colours():
    with pytest.raises(ValueError):
        pentagon_base(2, 2)


def test_pentagon_decomposition_round_trip():
    g = substitute(pentagon_base(1, 2), [monochromatic(3, 3)] * 5)
    assert reduce(g, find_gallai_partition(g)) == with_color_count(pentagon_base(1, 2), 3)


def test_circulant_must_cover_every_distance():
    with pytest.raises(ValueError):
        circulant(6, {1: 1, 2: 2})


def test_cone():
    g = cone(monochromatic(1), 1)
    assert g.n == 2
    assert g.color(0, 1) == 1
    apex = cone(pentagon_base(1, 2), 3)
    assert apex.k == 3
    assert all(apex.color(v, 5) == 3 for v in range(5))
    assert find_rainbow_triangle(apex) is None


@pytest.mark.parametrize('k, order', [(1, 4), (2, 8), (3, 20), (4, 40)])
def test_f9_f10_tower_orders(k, order):
    g = witness_f9_f10(k)
    assert g.n == order
    assert len(g.colors_used) == k
    assert find_rainbow_triangle(g) is None
    assert _free_of(g, fixture_consistent_candidates('f10'))


@pytest.mark.parametrize('k, order', [(2, 9), (3, 20), (4, 45), (5, 100)])
def test_f12_f13_tower_orders(k, order):
    g = witness_f12_f13(k)
    assert g.n == order
    assert find_rainbow_triangle(g) is None
    assert _free_of(g, fixture_consistent_candidates('f12') + fixture_consistent_candidates('f13'))


def test_tower_k1_is_mono_k4():
    assert witness_f9_f10(1) == monochromatic(4)


def test_tower_rejects_k0():
    with pytest.raises(ValueError):
        witness_f9_f10(0)


def test_even_tower_without_fixture(tmp_data_dir):
    with pytest.raises(BaseWitnessUnavailable):
        witness_f9_f10(2)
    assert witness_f9_f10(3).n == 20


def test_explicit_base_is_checked():
    with pytest.raises(ValueError):
        witness_f9_f10(2, base=monochromatic(8, 3))
    base = witness_f9_f10(2)
    assert witness_f9_f10(4, base=base) == witness_f9_f10(4)


def test_tower_uses_fresh_colours():
    layers = recipe_f9_f10(5).substitution_layers()
    assert layers[0] == (frozenset({2, 3}), frozenset({1}))
    assert layers[1] == (frozenset({4, 5}), frozenset({1, 2, 3}))
    for base_colors, inner in layers:
        assert not base_colors & inner


@pytest.mark.parametrize('k, order', [(1, 2), (2, 5), (3, 10), (4, 25)])
def test_k3_tower(k, order):
    g = witness_k3(k)
    assert g.n == order
    assert gr_value('k3', k).lo - 1 == order
    assert find_rainbow_triangle(g) is None
    if g.n >= 3:
        assert find_mono_copy(g, complete(3)) is None


def test_k3_tower_k2_is_pentagon():
    assert witness_k3(2) == pentagon_base(1, 2)


@pytest.mark.parametrize('n', [4, 5, 6, 7])
def test_star_witness_degrees(n):
    g = witness_star(n)
    assert g.n == 2 * n - 1 - (1 if n % 2 == 0 else 0)
    for color in (1, 2):
        assert int(g.color_degrees(color).max()) <= n - 1


def test_star_witness_n3_is_pentagon():
    assert witness_star(3) == pentagon_base(1, 2)


@pytest.mark.parametrize('k, n, order', [(3, 3, 6), (3, 5, 11), (4, 8, 17), (1, 6, 7), (2, 4, 6)])
def test_f2n_orders(k, n, order):
    assert witness_f2n(k, n).n == order


def test_f2n_grid():
    for n in (3, 4, 5, 6, 8):
        for k in range(1, 7):
            g = witness_f2n(k, n)
            assert g.n == gr_value(f'f2n:{n}', k).lo - 1
            assert find_rainbow_triangle(g) is None
            if g.n >= n + 2:
                assert find_mono_copy(g, f2n(n)) is None


def test_f2n_recipe_trace():
    lines = recipe_f2n(5, 5).trace_lines()
    assert lines[0] == 'target f2n:5 order=13 colors=5'
    assert any(line.startswith('substitute G3 = P[A, A, A, A, A]') for line in lines)
    assert lines[-1].startswith('cone G = G5 + apex color 1')


def test_f2n_rejects_bad_parameters():
    with pytest.raises(ValueError):
        witness_f2n(0, 5)
    with pytest.raises(ValueError):
        witness_f2n(3, 2)


def test_recipes_are_deterministic():
    assert encode_gcg(witness_f12_f13(4)) == encode_gcg(witness_f12_f13(4))
    assert encode_gcg(witness_f2n(6, 7)) == encode_gcg(witness_f2n(6, 7))


def test_recipe_claims_are_checked():
    recipe = recipe_k3(3)
    broken = WitnessRecipe(recipe.steps, recipe.target, recipe.claimed_order + 1, recipe.claimed_colors)
    with pytest.raises(ValueError, match="claimed"):
        evaluate_recipe(broken)


def test_recipe_steps():
    recipe = recipe_f2n(5, 4)
    assert isinstance(recipe.steps[-1], ConeStep)
    assert [step.color for step in recipe.steps if isinstance(step, ConeStep)] == [3, 4, 5]
    assert not any(isinstance(step, SubstituteStep) for step in recipe.steps)


def test_recipe_for_target():
    assert evaluate_recipe(recipe_for_target('f11', 3)).n == 6
    assert evaluate_recipe(recipe_for_target('k3', 3)).n == 10
    assert evaluate_recipe(recipe_for_target('f13', 2)).n == 9
    assert evaluate_recipe(recipe_for_target('star:4', 2)).n == 6
    assert recipe_for_target(CatalogId('f2n', (5,)), 3).claimed_order == 11
    with pytest.raises(ValueError):
        recipe_for_target('star:4', 3)
    with pytest.raises(ValueError):
        recipe_for_target('house', 2)
