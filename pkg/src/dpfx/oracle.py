"""Brute-force ground truth over every tree shape of a small alphabet."""
from __future__ import annotations

from fractions import Fraction

from .errors import Infeasible, TooLarge
from .model import BlockingScheme, FrequencyTable, TreeShape, decode_time_from_shape, len_from_shape

MAX_N = 10


def enumerate_shapes(n: int, h_max: int | None = None) -> list[TreeShape]:
    """All internal-node sequences of full binary trees on ``n`` leaves.

    Depth-first over ``j = i_{l+1}`` in ``[max(0, 2i - r), i - 1]`` where
    ``r`` is the number of leaves still to place at or below the level.
    """
    if n > MAX_N:
        raise TooLarge(f"n={n} exceeds the enumeration guard of {MAX_N}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return [TreeShape((0,))]
    h_max = n - 1 if h_max is None else h_max
    out = []

    def rec(seq, r):
        i = seq[-1]
        if i == 0:
            out.append(TreeShape(tuple(seq)))
            return
        if len(seq) - 1 >= h_max:
            return
        for j in range(i - 1, max(0, 2 * i - r) - 1, -1):
            seq.append(j)
            rec(seq, 2 * i - j)
            seq.pop()

    rec([n - 1], n)
    return out


def brute_force_optimal(
    ft: FrequencyTable, bs: BlockingScheme, budget, h_max: int | None = None
) -> tuple[Fraction, TreeShape]:
    """Least decode time over all shapes with length <= ``budget``.

    Ties resolve to the shorter code, then the lexicographically larger
    sequence. ``budget=None`` means unconstrained.
    """
    best = None
    for shape in enumerate_shapes(ft.n, h_max):
        if shape.height > bs.total_width:
            continue
        length = len_from_shape(ft, shape)
        if budget is not None and length > budget:
            continue
        key = (decode_time_from_shape(ft, shape, bs), length, tuple(-c for c in shape.counts))
        if best is None or key < best[0]:
            best = (key, shape)
    if best is None:
        raise Infeasible(f"no shape within budget {budget}")
    return best[0][0], best[1]
