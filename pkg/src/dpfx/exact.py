"""Exact decode-optimal prefix trees under a code-length budget.

Two solvers live here:

* :func:`solve_exact` fills ``D(i, r, l, L)``, the least decode time of a
  forest rooted at level ``l`` with ``i`` internal nodes over its ``r``
  smallest-frequency leaves and code length at most ``L``. The leaf count
  ``r`` bounds how many leaves may sit below level ``l`` (``j >= 2i - r``),
  which is what keeps every recovered sequence a real tree.
* :func:`solve_fixed_block_levels` swaps the roles of length and decode time
  and indexes the table by the finitely many achievable decode values of a
  scheme with few blocks, which makes it strongly polynomial.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

import numpy as np

from .errors import Infeasible, NoValidTree, SchemeTooShort, WorkLimitExceeded
from .huffman import huffman_dp
from .model import (
    BlockingScheme,
    CostReport,
    FrequencyTable,
    TreeShape,
    block_of_depth,
    level_cost_profile,
    prefix_sums,
    safe_height,
)
from .tree import report_for_shape

DEFAULT_WORK_LIMIT = 200_000_000
INF = np.int64(1 << 62)


@dataclass(frozen=True)
class DoptState:
    i: int
    level: int
    L: int


@dataclass(frozen=True)
class DualState:
    i: int
    level: int
    T: Fraction


def _rows(i: int, n: int) -> int:
    """Number of distinct leaf counts r in [i+1, min(n, 2i)] for state i."""
    return min(n, 2 * i) - i


def _row(i: int, r: int) -> int:
    return min(r, 2 * i) - i - 1


def dp_cells(n: int, h: int, width: int) -> int:
    return h * sum(_rows(i, n) for i in range(1, n)) * width


def run_level_dp(P, qhat, n, h, width, shifts, *, keep_tables=False, work_limit=DEFAULT_WORK_LIMIT):
    """Fill the level tables bottom-up.

    ``qhat[l]`` is the integer cost charged at level ``l + 1``; ``shifts[a]``
    is how many budget-axis units ``a`` leaves below a level consume. Returns
    ``(root_row, argmins, tables)`` where ``argmins[l][i]`` has shape
    ``(rows, width)`` and ``tables`` is only populated with ``keep_tables``.
    """
    cells = dp_cells(n, h, width)
    if cells > work_limit:
        raise WorkLimitExceeded(f"DP needs {cells} cells, limit is {work_limit}")
    idx_dtype = np.int8 if n < 2**7 else np.int16 if n < 2**15 else np.int32
    argmins: list[dict] = [None] * h
    tables: list[dict] = [None] * (h + 1)
    zeros = np.zeros(width, dtype=np.int64)
    prev: dict | None = None
    for l in range(h - 1, -1, -1):
        q = int(qhat[l])
        cur, argl = {}, {}
        for i in range(1, n):
            nrows = _rows(i, n)
            rows = np.empty((nrows, width), dtype=np.int64)
            arg = np.empty((nrows, width), dtype=idx_dtype)
            best = np.full(width, INF, dtype=np.int64)
            bestj = np.zeros(width, dtype=idx_dtype)
            for j in range(i - 1, max(0, 2 * i - n) - 1, -1):
                a = 2 * i - j
                s = shifts[a]
                if s < width:
                    if j == 0:
                        nxt = zeros
                    elif prev is None:
                        nxt = None
                    else:
                        nxt = prev[j][_row(j, a)]
                    if nxt is not None:
                        cand = np.full(width, INF, dtype=np.int64)
                        np.minimum(nxt[: width - s] + q * P[a], INF, out=cand[s:])
                        better = cand < best
                        best = np.where(better, cand, best)
                        bestj = np.where(better, j, bestj)
                rows[a - i - 1] = best
                arg[a - i - 1] = bestj
            cur[i] = rows
            argl[i] = arg
        argmins[l] = argl
        if keep_tables:
            tables[l] = cur
        prev = cur
    root = prev[n - 1][0] if prev is not None else None
    return root, argmins, tables


def backtrack(argmins, n: int, k: int, shifts) -> TreeShape:
    seq = [n - 1]
    i, r, l = n - 1, n, 0
    while i:
        j = int(argmins[l][i][_row(i, r), k])
        a = 2 * i - j
        k -= shifts[a]
        i, r, l = j, a, l + 1
        seq.append(i)
    return TreeShape(tuple(seq))


def _single_symbol(ft, bs, budget, method) -> tuple[CostReport, TreeShape]:
    if budget < ft.freqs[0]:
        raise Infeasible(f"budget {budget} below the 1-bit code length {ft.freqs[0]}")
    shape = TreeShape((0,))
    return report_for_shape(ft, shape, bs, budget, method), shape


def resolve_height(ft: FrequencyTable, bs: BlockingScheme, budget: int, h) -> tuple[int, int]:
    """Return ``(requested, effective)`` height bounds.

    ``None`` means ``n - 1``; ``"auto"`` means the tallest height any tree
    within ``budget`` can reach. The effective bound is further capped by the
    scheme's addressable width.
    """
    n = ft.n
    need = max(1, math.ceil(math.log2(n)))
    if h is None:
        h = n - 1
    elif h == "auto":
        h = safe_height(ft, budget)
    h = int(h)
    if h < need:
        raise ValueError(f"height bound {h} below ceil(log2 n) = {need}")
    if bs.total_width < need:
        raise SchemeTooShort(f"scheme {bs} addresses {bs.total_width} levels, {n} symbols need {need}")
    return h, int(min(h, bs.total_width, n - 1))


def _scaled_profile(bs: BlockingScheme, h: int) -> tuple[int, list[int]]:
    prof = level_cost_profile(bs, h)
    scale = math.lcm(*(q.denominator for q in prof.qhat)) if prof.qhat else 1
    return scale, [int(q * scale) for q in prof.qhat]


def _raise_unreachable(ft, bs, h_req, h_eff, budget):
    if bs.total_width < min(h_req, safe_height(ft, budget)):
        raise SchemeTooShort(f"no tree within budget {budget} fits the {bs.total_width} levels of {bs}")
    raise Infeasible(f"no tree of height <= {h_eff} has code length <= {budget}")


def solve_exact(
    ft: FrequencyTable,
    bs: BlockingScheme,
    budget: int,
    h=None,
    *,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> tuple[CostReport, TreeShape]:
    """Least decode time over trees with code length <= ``budget`` and height <= ``h``.

    Among decode-optimal trees the one with the smallest code length is
    returned; remaining ties go to the largest ``j`` (shallower trees).
    """
    budget = int(budget)
    if ft.n == 1:
        return _single_symbol(ft, bs, budget, "exact")
    huff, _ = huffman_dp(ft)
    if budget < huff:
        raise Infeasible(f"budget {budget} below the Huffman code length {huff}")
    h_req, h_eff = resolve_height(ft, bs, budget, h)
    # no tree taller than safe_height fits the budget, so this cap loses nothing
    h_eff = min(h_eff, safe_height(ft, budget))
    P = prefix_sums(ft)
    scale, qhat = _scaled_profile(bs, h_eff)
    root, argmins, _ = run_level_dp(P, qhat, ft.n, h_eff, budget + 1, P, work_limit=work_limit)
    if root[budget] >= INF:
        _raise_unreachable(ft, bs, h_req, h_eff, budget)
    k = int(np.argmax(root == root[budget]))
    shape = backtrack(argmins, ft.n, k, P)
    report = report_for_shape(ft, shape, bs, budget, "exact")
    assert report.decode_time == Fraction(int(root[budget]), scale)
    return report, shape


def budget_tables(ft: FrequencyTable, bs: BlockingScheme, budget: int, h: int) -> list[dict]:
    """Full exact tables ``tables[l][i][row, L]`` for inspection on small inputs."""
    P = prefix_sums(ft)
    _, qhat = _scaled_profile(bs, h)
    _, _, tables = run_level_dp(P, qhat, ft.n, h, budget + 1, P, keep_tables=True)
    return tables


# ------------------------------------------------------- fixed block levels


def _cumulative_scaled(bs: BlockingScheme) -> tuple[int, list[int]]:
    scale, costs = bs.with_cost_scale()
    return scale, [0, *accumulate(costs)]


def _decode_values_scaled(freqs, cum) -> list[int]:
    n, m = len(freqs), len(cum) - 1
    P = [0, *accumulate(freqs)]
    values = set()

    def rec(block, start, acc):
        # block m takes the smallest frequencies, block 1 the largest placed
        if block == 0:
            values.add(acc)
            return
        for x in range(n - start + 1):
            rec(block - 1, start + x, acc + cum[block] * (P[start + x] - P[start]))

    rec(m, 0, 0)
    return sorted(values)


def enumerate_decode_values(ft: FrequencyTable, bs: BlockingScheme) -> set[Fraction]:
    """Every decode total reachable by placing sorted symbols into the blocks.

    For counts ``x_0..x_m`` summing to n, the ``x_m`` smallest frequencies
    sit in block m, the next ``x_{m-1}`` in block m-1 and so on; the ``x_0``
    largest contribute nothing.
    """
    scale, cum = _cumulative_scaled(bs)
    return {Fraction(v, scale) for v in _decode_values_scaled(ft.freqs, cum)}


def solve_fixed_block_levels(
    ft: FrequencyTable,
    bs: BlockingScheme,
    budget: int,
    *,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> tuple[CostReport, TreeShape]:
    """Exact optimum for a scheme of ``m <= 3`` non-repeating blocks.

    The table holds the least code length of a forest whose symbols' total
    cumulative decode cost is at most ``T``, for ``T`` ranging over
    :func:`enumerate_decode_values`.
    """
    if bs.extend:
        raise ValueError("fixed-level solver needs a scheme without the repeat rule")
    budget = int(budget)
    n, m = ft.n, bs.m
    if m > 3:
        raise WorkLimitExceeded(f"{m} block levels, at most 3 supported")
    if n ** (m + 3) > work_limit:
        raise WorkLimitExceeded(f"n^(m+3) = {n ** (m + 3)} exceeds the work limit {work_limit}")
    if n == 1:
        return _single_symbol(ft, bs, budget, "fixed")
    H = int(bs.total_width)
    if H < math.ceil(math.log2(n)):
        raise NoValidTree(f"scheme {bs} addresses {H} levels, too few for {n} symbols")
    H = min(H, n - 1)
    scale, cum = _cumulative_scaled(bs)
    S = np.array(_decode_values_scaled(ft.freqs, cum), dtype=np.int64)
    nS = len(S)
    P = prefix_sums(ft)
    # cost of reaching depth l (0 at the root)
    C = [0] + [cum[block_of_depth(bs, d)[0]] for d in range(1, H + 1)]

    def leaf_only(l, r):
        return np.where(S >= C[l] * P[r], 0, INF)

    args: list[dict] = [None] * H
    prev: dict | None = None
    for l in range(H - 1, -1, -1):
        cur, argl = {}, {}
        for i in range(1, n):
            # the charge for leaves at this level depends on r, so no clamping
            for r in range(i + 1, n + 1):
                best = np.full(nS, INF, dtype=np.int64)
                bestj = np.zeros(nS, dtype=np.int16)
                for j in range(i - 1, max(0, 2 * i - r) - 1, -1):
                    a = 2 * i - j
                    x = S - C[l] * (P[r] - P[a])
                    if j == 0:
                        sub = np.where(x >= C[l + 1] * P[a], 0, INF)
                    elif prev is None:
                        continue
                    else:
                        t = np.searchsorted(S, x, side="right") - 1
                        sub = np.where(t >= 0, prev[(j, a)][np.maximum(t, 0)], INF)
                    cand = np.minimum(sub + P[a], INF)
                    better = cand < best
                    best = np.where(better, cand, best)
                    bestj = np.where(better, j, bestj)
                cur[(i, r)] = best
                argl[(i, r)] = bestj
        args[l] = argl
        prev = cur
    root = prev[(n - 1, n)]
    ok = np.nonzero(root <= budget)[0]
    if len(ok) == 0:
        raise NoValidTree(f"no tree with code length <= {budget} under {bs}")
    t = int(ok[0])
    seq = [n - 1]
    i, r, l, T = n - 1, n, 0, int(S[t])
    while i:
        j = int(args[l][(i, r)][t])
        a = 2 * i - j
        T -= C[l] * (P[r] - P[a])
        t = bisect_right(S.tolist(), T) - 1 if j else t
        i, r, l = j, a, l + 1
        seq.append(i)
    shape = TreeShape(tuple(seq))
    report = report_for_shape(ft, shape, bs, budget, "fixed")
    assert report.decode_time == Fraction(int(S[ok[0]]), scale), (report, S[ok[0]])
    return report, shape
