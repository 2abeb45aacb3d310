"""Pseudo-approximation on a rounded length grid, and its height-bounded variant."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import Infeasible
from .exact import (
    DEFAULT_WORK_LIMIT,
    INF,
    _raise_unreachable,
    _scaled_profile,
    _single_symbol,
    backtrack,
    resolve_height,
    run_level_dp,
    solve_exact,
)
from .huffman import huffman_dp
from .model import BlockingScheme, CostReport, FrequencyTable, TreeShape, as_fraction, hierarchy_count, prefix_sums
from .tree import report_for_shape


@dataclass(frozen=True)
class RoundingGrid:
    """Budget axis restricted to multiples ``b * lam`` for ``b <= max_index``."""

    lam: int
    max_index: int
    epsilon: Fraction
    h: int

    @classmethod
    def build(cls, budget: int, epsilon, h: int) -> RoundingGrid:
        eps = as_fraction(epsilon)
        if not 0 < eps <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
        lam = math.floor(eps * budget / (2 * h))
        top = math.ceil(2 * h / eps) + h
        if lam:
            top = max(top, -(-budget // lam) + h)
        return cls(lam, top, eps, h)

    def values(self) -> list[int]:
        return [b * self.lam for b in range(self.max_index + 1)]


def round_up(x: int, grid) -> int:
    lam = grid.lam if isinstance(grid, RoundingGrid) else int(grid)
    if x < 0:
        raise ValueError("x must be non-negative")
    return -(-x // lam) * lam


def approx_tables(ft: FrequencyTable, bs: BlockingScheme, grid: RoundingGrid) -> list[dict]:
    """Full rounded tables ``tables[l][i][row, b]`` for inspection on small inputs."""
    P = prefix_sums(ft)
    _, qhat = _scaled_profile(bs, grid.h)
    shifts = [-(-p // grid.lam) for p in P]
    _, _, tables = run_level_dp(P, qhat, ft.n, grid.h, grid.max_index + 1, shifts, keep_tables=True)
    return tables


def solve_pseudo_approx(
    ft: FrequencyTable,
    bs: BlockingScheme,
    budget: int,
    epsilon,
    h=None,
    *,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> tuple[CostReport, TreeShape]:
    """Tree with length <= (1+epsilon)*budget and decode time <= the exact optimum.

    When the grid step rounds down to zero the exact solver runs instead.
    """
    budget = int(budget)
    if ft.n == 1:
        return _single_symbol(ft, bs, budget, "approx")
    huff, _ = huffman_dp(ft)
    if budget < huff:
        raise Infeasible(f"budget {budget} below the Huffman code length {huff}")
    h_req, h_eff = resolve_height(ft, bs, budget, h)
    grid = RoundingGrid.build(budget, epsilon, h_eff)
    if grid.lam == 0:
        report, shape = solve_exact(ft, bs, budget, h_eff, work_limit=work_limit)
        return replace(report, method="approx/exact"), shape
    P = prefix_sums(ft)
    scale, qhat = _scaled_profile(bs, h_eff)
    shifts = [-(-p // grid.lam) for p in P]
    top = -(-budget // grid.lam) + h_eff
    root, argmins, _ = run_level_dp(P, qhat, ft.n, h_eff, grid.max_index + 1, shifts, work_limit=work_limit)
    if root[top] >= INF:
        _raise_unreachable(ft, bs, h_req, h_eff, budget)
    k = int(np.argmax(root[: top + 1] == root[top]))
    shape = backtrack(argmins, ft.n, k, shifts)
    report = report_for_shape(ft, shape, bs, budget, "approx")
    assert report.decode_time == Fraction(int(root[top]), scale)
    return report, shape


def height_bound(n: int, k: int, delta) -> int:
    """Height within which a (1+delta)-approximate tree always exists."""
    d = as_fraction(delta)
    if n < 2 or k < 1 or not 0 < d <= 1:
        raise ValueError("need n >= 2, k >= 1 and 0 < delta <= 1")
    log_n = math.ceil(math.log2(n))
    return max(log_n, 2 * k * math.ceil(1 / d) * log_n)


def solve_constant_hierarchy(
    ft: FrequencyTable,
    bs: BlockingScheme,
    budget: int,
    epsilon,
    delta,
    *,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> tuple[CostReport, TreeShape]:
    """Grid DP with the height capped by :func:`height_bound`.

    The bounded-height witness tree may be up to (1+delta) longer than the
    budget, so the grid DP runs on ``floor((1+delta) * budget)``.
    """
    budget = int(budget)
    if ft.n == 1:
        return _single_symbol(ft, bs, budget, "const-k")
    huff, _ = huffman_dp(ft)
    if budget < huff:
        raise Infeasible(f"budget {budget} below the Huffman code length {huff}")
    d = as_fraction(delta)
    h = min(ft.n - 1, height_bound(ft.n, hierarchy_count(bs), d))
    relaxed = math.floor((1 + d) * budget)
    report, shape = solve_pseudo_approx(ft, bs, relaxed, epsilon, h, work_limit=work_limit)
    return replace(report, budget=budget, method="const-k"), shape
