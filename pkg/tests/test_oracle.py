import random

import pytest

from _support import SIX, depth_profile_to_shape, full_tree_depths, naive_optimum, random_scheme, six_scheme
from dpfx.errors import Infeasible, TooLarge
from dpfx.model import BlockingScheme, FrequencyTable, TreeShape
from dpfx.oracle import brute_force_optimal, enumerate_shapes


def test_small_enumerations():
    assert enumerate_shapes(2) == [TreeShape((1, 0))]
    assert enumerate_shapes(3) == [TreeShape((2, 1, 0))]
    assert set(enumerate_shapes(4)) == {TreeShape((3, 2, 0)), TreeShape((3, 2, 1, 0))}
    assert enumerate_shapes(1) == [TreeShape((0,))]


@pytest.mark.parametrize("n", range(1, 8))
def test_shape_count_matches_direct_tree_enumeration(n):
    shapes = enumerate_shapes(n)
    assert len(shapes) == len(set(shapes))
    assert {s.counts for s in shapes} == {depth_profile_to_shape(d) for d in full_tree_depths(n)}


def test_height_cap_and_guard():
    assert all(s.height <= 3 for s in enumerate_shapes(6, 3))
    with pytest.raises(TooLarge):
        enumerate_shapes(11)


def test_six_symbol_budget_100():
    value, shape = brute_force_optimal(FrequencyTable.from_freqs(SIX), six_scheme(), 100)
    assert value <= 76
    assert value == 76 and shape == TreeShape((5, 4, 2, 1, 0))


def test_unconstrained_single_block():
    ft = FrequencyTable.from_freqs([3, 5, 7, 11])
    value, _ = brute_force_optimal(ft, BlockingScheme(((3, 2),)), None)
    assert value == 2 * 26


def test_infeasible_budget():
    with pytest.raises(Infeasible):
        brute_force_optimal(FrequencyTable.from_freqs(SIX), six_scheme(), 86)


def test_agrees_with_naive_tree_enumeration():
    rng = random.Random(11)
    for _ in range(150):
        freqs = [rng.randint(1, 32) for _ in range(rng.randint(1, 8))]
        bs = random_scheme(rng)
        ft = FrequencyTable.from_freqs(freqs)
        budget = rng.randint(sum(freqs), 4 * sum(freqs))
        expected = naive_optimum(freqs, bs.blocks, bs.extend, budget)
        if expected is None:
            with pytest.raises(Infeasible):
                brute_force_optimal(ft, bs, budget)
        else:
            assert brute_force_optimal(ft, bs, budget)[0] == expected
