import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import SIX, budget_sweep, greedy_huffman, instance_set, naive_optimum, random_scheme, six_scheme
from dpfx.errors import Infeasible, NoValidTree, SchemeTooShort, WorkLimitExceeded
from dpfx.exact import enumerate_decode_values, solve_exact, solve_fixed_block_levels
from dpfx.model import BlockingScheme, FrequencyTable, TreeShape, decode_time_from_shape, len_from_shape
from dpfx.oracle import brute_force_optimal, enumerate_shapes

SIX_FT = FrequencyTable.from_freqs(SIX)


def test_six_symbol_budget_100():
    report, shape = solve_exact(SIX_FT, six_scheme(), 100)
    assert report.decode_time <= 76
    assert report.decode_time == brute_force_optimal(SIX_FT, six_scheme(), 100)[0] == 76
    assert shape == TreeShape((5, 4, 2, 1, 0))
    assert report.code_length == 100
    assert report.per_block_counts == (3, 3)


def test_single_uniform_block_at_huffman_budget():
    report, _ = solve_exact(SIX_FT, BlockingScheme(((5, 1),)), 87)
    assert report.decode_time == 46
    assert report.code_length == 87


def test_budget_below_huffman_is_infeasible():
    with pytest.raises(Infeasible):
        solve_exact(SIX_FT, six_scheme(), 86)


def test_scheme_too_short_is_distinguished():
    ft = FrequencyTable.from_freqs([1, 2, 3])
    with pytest.raises(SchemeTooShort):
        solve_exact(ft, BlockingScheme(((1, 1),)), 100)
    # six symbols fit in 3 levels, but not within the Huffman budget
    with pytest.raises(SchemeTooShort):
        solve_exact(SIX_FT, BlockingScheme(((3, 1),)), 87)
    assert solve_exact(SIX_FT, BlockingScheme(((3, 1),)), 108)[0].decode_time == 46


def test_height_cap_below_log_rejected():
    with pytest.raises(ValueError):
        solve_exact(SIX_FT, six_scheme(), 100, h=2)


def test_work_limit():
    with pytest.raises(WorkLimitExceeded):
        solve_exact(SIX_FT, six_scheme(), 100, work_limit=10)


def test_single_symbol():
    ft = FrequencyTable.from_freqs([7])
    report, shape = solve_exact(ft, BlockingScheme(((2, 3),)), 7)
    assert shape == TreeShape((0,))
    assert (report.code_length, report.decode_time) == (7, 21)
    with pytest.raises(Infeasible):
        solve_exact(ft, BlockingScheme(((2, 3),)), 6)


def test_unbounded_budget_single_cost():
    rng = random.Random(5)
    for _ in range(20):
        freqs = [rng.randint(1, 50) for _ in range(rng.randint(2, 9))]
        ft = FrequencyTable.from_freqs(freqs)
        report, _ = solve_exact(ft, BlockingScheme(((len(freqs), Fraction(7, 3)),)), 100 * sum(freqs))
        assert report.decode_time == Fraction(7, 3) * sum(freqs)


def test_matches_brute_force_on_random_instances():
    for ft, bs, budgets in instance_set(count=80, seed=99):
        for budget in budgets:
            try:
                expected = brute_force_optimal(ft, bs, budget)[0]
            except Infeasible:
                with pytest.raises((Infeasible, SchemeTooShort)):
                    solve_exact(ft, bs, budget)
                continue
            report, shape = solve_exact(ft, bs, budget)
            assert report.decode_time == expected
            assert len_from_shape(ft, shape) == report.code_length <= budget
            assert decode_time_from_shape(ft, shape, bs) == report.decode_time


def test_matches_naive_optimum_at_larger_budgets():
    rng = random.Random(3)
    for _ in range(60):
        freqs = [rng.randint(1, 60) for _ in range(rng.randint(2, 8))]
        bs = random_scheme(rng, extend=True)
        budget = rng.randint(greedy_huffman(freqs), 3 * sum(freqs))
        report, _ = solve_exact(FrequencyTable.from_freqs(freqs), bs, budget)
        assert report.decode_time == naive_optimum(freqs, bs.blocks, bs.extend, budget)


def test_exact_picks_shortest_among_decode_optimal():
    for ft, bs, budgets in instance_set(count=40, seed=17):
        for budget in budgets:
            try:
                report, _ = solve_exact(ft, bs, budget)
            except (Infeasible, SchemeTooShort):
                continue
            tighter = report.code_length - 1
            if tighter >= greedy_huffman(list(ft.freqs)):
                try:
                    other = solve_exact(ft, bs, tighter)[0].decode_time
                except (Infeasible, SchemeTooShort):
                    continue
                assert other > report.decode_time


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 32), min_size=2, max_size=8), st.integers(0, 40), st.integers(0, 40), st.randoms())
def test_monotone_in_budget(freqs, extra1, extra2, rnd):
    ft = FrequencyTable.from_freqs(freqs)
    bs = random_scheme(rnd, extend=True)
    base = greedy_huffman(freqs)
    lo, hi = sorted((base + extra1, base + extra2))
    assert solve_exact(ft, bs, hi)[0].decode_time <= solve_exact(ft, bs, lo)[0].decode_time


# ------------------------------------------------------- fixed block levels


def test_fixed_levels_six_symbol():
    bs = six_scheme(extend=False)
    assert solve_fixed_block_levels(SIX_FT, bs, 100)[0].decode_time == solve_exact(SIX_FT, bs, 100)[0].decode_time
    with pytest.raises(NoValidTree):
        solve_fixed_block_levels(SIX_FT, bs, 86)


def test_fixed_levels_uniform_four():
    ft = FrequencyTable.from_freqs([1, 1, 1, 1])
    report, shape = solve_fixed_block_levels(ft, BlockingScheme(((2, 1), (2, 3))), 8)
    assert report.decode_time == 4
    assert shape == TreeShape((3, 2, 0))


def test_fixed_levels_guards():
    with pytest.raises(ValueError):
        solve_fixed_block_levels(SIX_FT, six_scheme(extend=True), 100)
    with pytest.raises(WorkLimitExceeded):
        solve_fixed_block_levels(SIX_FT, BlockingScheme(((1, 1),) * 4), 100)
    with pytest.raises(WorkLimitExceeded):
        solve_fixed_block_levels(SIX_FT, six_scheme(extend=False), 100, work_limit=1000)


def test_fixed_levels_matches_exact_on_random_instances():
    rng = random.Random(23)
    checked = 0
    while checked < 60:
        n = rng.randint(2, 8)
        freqs = [rng.randint(1, 32) for _ in range(n)]
        bs = random_scheme(rng, max_blocks=2, extend=False)
        ft = FrequencyTable.from_freqs(freqs)
        for budget in budget_sweep(greedy_huffman(freqs), 3):
            try:
                expected = solve_exact(ft, bs, budget)[0].decode_time
            except (Infeasible, SchemeTooShort):
                with pytest.raises(Infeasible):
                    solve_fixed_block_levels(ft, bs, budget)
                continue
            assert solve_fixed_block_levels(ft, bs, budget)[0].decode_time == expected
        checked += 1


def test_decode_values():
    # the x_1 smallest frequencies pay the block cost, the others pay nothing
    assert enumerate_decode_values(FrequencyTable.from_freqs([1, 2]), BlockingScheme(((2, 3),))) == {0, 3, 9}
    assert enumerate_decode_values(FrequencyTable.from_freqs([5]), BlockingScheme(((1, 4),))) == {0, 20}
    ft = FrequencyTable.from_freqs([3, 1, 4, 1, 5])
    bs = BlockingScheme(((2, 1), (2, Fraction(5, 2))))
    values = enumerate_decode_values(ft, bs)
    assert Fraction(7, 2) * 14 in values
    assert len(values) <= 21  # C(n+m, m)


def test_decode_values_contain_every_shape_total():
    rng = random.Random(8)
    for _ in range(30):
        freqs = [rng.randint(1, 20) for _ in range(rng.randint(1, 7))]
        bs = random_scheme(rng, max_blocks=2, extend=False, fractional=False)
        ft = FrequencyTable.from_freqs(freqs)
        values = enumerate_decode_values(ft, bs)
        for shape in enumerate_shapes(ft.n):
            if shape.height <= bs.total_width:
                assert decode_time_from_shape(ft, shape, bs) in values
