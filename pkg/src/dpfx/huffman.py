"""Unconstrained optimum: the level-sum Huffman DP and a greedy cross-check."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .model import FrequencyTable, TreeShape, prefix_sums, validate_shape


@dataclass(frozen=True)
class HuffmanDpTable:
    H: tuple[int, ...]
    parents: tuple[int, ...]


def huffman_table(ft: FrequencyTable) -> HuffmanDpTable:
    """``H[i]`` = least code length over forests with ``i`` internal nodes.

    Among minimising predecessors the largest ``j`` wins, which favours
    shallower trees.
    """
    n = ft.n
    P = prefix_sums(ft)
    H = [0] * n
    parents = [0] * n
    for i in range(1, n):
        best = None
        for j in range(i - 1, max(0, 2 * i - n) - 1, -1):
            v = H[j] + P[2 * i - j]
            if best is None or v < best:
                best, parents[i] = v, j
        H[i] = best
    return HuffmanDpTable(tuple(H), tuple(parents))


def huffman_dp(ft: FrequencyTable) -> tuple[int, TreeShape]:
    if ft.n == 1:
        return ft.freqs[0], TreeShape((0,))
    table = huffman_table(ft)
    seq = [ft.n - 1]
    while seq[-1]:
        seq.append(table.parents[seq[-1]])
    shape = TreeShape(tuple(seq))
    assert validate_shape(shape, ft.n), shape
    return table.H[ft.n - 1], shape


def classic_huffman(ft: FrequencyTable) -> int:
    """Greedy two-smallest merge; the cost is the sum of all merged weights."""
    if ft.n == 1:
        return ft.freqs[0]
    heap = list(ft.freqs)
    heapq.heapify(heap)
    total = 0
    while len(heap) > 1:
        merged = heapq.heappop(heap) + heapq.heappop(heap)
        total += merged
        heapq.heappush(heap, merged)
    return total
