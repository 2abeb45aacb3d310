"""Materialise canonical codes from internal-node sequences and back."""
from __future__ import annotations

from typing import Sequence

from .errors import InvalidShape
from .model import (
    CostReport,
    FrequencyTable,
    PrefixCode,
    TreeShape,
    decode_time_from_shape,
    len_from_shape,
    per_block_counts,
    validate_shape,
)


def depths_from_shape(ft: FrequencyTable, shape: TreeShape) -> dict:
    """Symbol -> depth, highest frequency on the shallowest leaves."""
    if not validate_shape(shape, ft.n):
        raise InvalidShape(f"{shape} is not a valid tree shape for n={ft.n}")
    if ft.n == 1:
        return {ft.symbols[0]: 1}
    per_depth = shape.leaves_per_depth()
    depths = {}
    it = iter(ft.descending())
    for d, count in enumerate(per_depth):
        for _ in range(count):
            depths[next(it)] = d
    return depths


def build_tree_from_shape(ft: FrequencyTable, shape: TreeShape) -> PrefixCode:
    depths = depths_from_shape(ft, shape)
    symbols = ft.original_symbols()
    return PrefixCode.from_lengths(symbols, [depths[s] for s in symbols])


def depth_vector(code: PrefixCode) -> list[int]:
    return list(code.lengths)


def shape_from_lengths(lengths: Sequence[int]) -> TreeShape:
    """Recover ``<i_0..i_h>`` from codeword lengths of a complete code."""
    n = len(lengths)
    if n == 0:
        raise InvalidShape("no codeword lengths")
    if n == 1:
        return TreeShape((0,))
    h = max(lengths)
    leaves = [0] * (h + 1)
    for l in lengths:
        leaves[l] += 1
    internal = []
    nodes = 1
    for d in range(h + 1):
        inner = nodes - leaves[d]
        if inner < 0:
            raise InvalidShape("lengths oversubscribe the code space")
        internal.append(inner)
        nodes = 2 * inner
    if internal[h] != 0:
        raise InvalidShape("lengths do not form a complete code")
    counts = [sum(internal[l:]) for l in range(h + 1)]
    shape = TreeShape(tuple(counts))
    if not validate_shape(shape, n):
        raise InvalidShape(f"lengths give invalid shape {shape}")
    return shape


def report_for_shape(ft: FrequencyTable, shape: TreeShape, bs, budget=None, method: str = "") -> CostReport:
    depths = depths_from_shape(ft, shape)
    return CostReport(
        code_length=len_from_shape(ft, shape),
        decode_time=decode_time_from_shape(ft, shape, bs),
        per_block_counts=per_block_counts(bs, depths.values()),
        budget=budget,
        height=max(depths.values()),
        method=method,
    )
