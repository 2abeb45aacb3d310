"""Optimize, simulate and benchmark pipelines shared by the CLI and tests."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .approx import solve_constant_hierarchy, solve_pseudo_approx
from .codec import compile_tables, decode_stream, encode_stream, measured_cost, model_cost
from .exact import DEFAULT_WORK_LIMIT, solve_exact, solve_fixed_block_levels
from .huffman import huffman_dp
from .model import (
    BlockingScheme,
    CostReport,
    FrequencyTable,
    PrefixCode,
    TreeShape,
    as_fraction,
    parse_blocking_scheme,
)
from .tree import build_tree_from_shape, report_for_shape


@dataclass(frozen=True)
class Outcome:
    huffman: CostReport | None  # None when the Huffman tree does not fit the scheme
    optimized: CostReport
    shape: TreeShape
    code: PrefixCode
    huffman_length: int

    @property
    def speedup(self) -> Fraction | None:
        if self.huffman is None or self.optimized.decode_time == 0:
            return None
        return self.huffman.decode_time / self.optimized.decode_time

    @property
    def relaxation(self) -> Fraction:
        """Realized relaxation over the Huffman length (achieved / Huffman - 1)."""
        return Fraction(self.optimized.code_length, self.huffman_length) - 1


def run_solver(
    ft: FrequencyTable,
    bs: BlockingScheme,
    budget: int,
    algo: str = "exact",
    *,
    epsilon=Fraction(1, 20),
    delta=Fraction(1, 4),
    height=None,
    work_limit: int | None = None,
) -> tuple[CostReport, TreeShape]:
    wl = work_limit or DEFAULT_WORK_LIMIT
    if algo == "exact":
        return solve_exact(ft, bs, budget, height, work_limit=wl)
    if algo == "fixed":
        return solve_fixed_block_levels(ft, bs, budget, work_limit=wl)
    if algo == "approx":
        return solve_pseudo_approx(ft, bs, budget, epsilon, "auto" if height is None else height, work_limit=wl)
    if algo == "const-k":
        return solve_constant_hierarchy(ft, bs, budget, epsilon, delta, work_limit=wl)
    raise ValueError(f"unknown algorithm {algo!r}")


def huffman_report(ft: FrequencyTable, bs: BlockingScheme) -> tuple[CostReport | None, int]:
    length, shape = huffman_dp(ft)
    if shape.height > bs.total_width:
        return None, length
    return report_for_shape(ft, shape, bs, method="huffman"), length


def optimize(ft: FrequencyTable, bs: BlockingScheme, budget: int, algo: str = "exact", **kw) -> Outcome:
    base, huff_len = huffman_report(ft, bs)
    report, shape = run_solver(ft, bs, budget, algo, **kw)
    return Outcome(base, report, shape, build_tree_from_shape(ft, shape), huff_len)


def fill_scheme(template: str, x) -> BlockingScheme:
    """Substitute the latency factor for every ``x`` in a scheme template."""
    return parse_blocking_scheme(template.replace("x", str(as_fraction(x))))


def simulate_cell(ft: FrequencyTable, bs: BlockingScheme, relax, algo: str = "approx", **kw) -> Outcome:
    """Solve for a total relaxation ``relax`` over the Huffman length.

    With an approximate algorithm half of the relaxation goes to the grid
    error and the budget shrinks so that the guaranteed length stays within
    ``(1 + relax)`` times Huffman.
    """
    relax = as_fraction(relax)
    huff, _ = huffman_dp(ft)
    if algo in ("approx", "const-k") and relax > 0:
        eps = relax / 2
        budget = max(huff, math.floor((1 + relax) * huff / (1 + eps)))
        kw["epsilon"] = eps
    else:
        budget = math.floor((1 + relax) * huff)
    if algo == "const-k":
        d = as_fraction(kw.get("delta", Fraction(1, 4)))
        budget = max(huff, math.floor(budget / (1 + d)))
    return optimize(ft, bs, budget, algo, **kw)


def simulate(
    ft: FrequencyTable,
    templates: Sequence[str],
    latencies: Sequence,
    relaxations: Sequence,
    algo: str = "approx",
    **kw,
) -> list[dict]:
    """Model-computed speedups; one row per latency factor, one column per (scheme, relaxation)."""
    rows = []
    for x in latencies:
        row = {"x": as_fraction(x)}
        for tpl in templates:
            bs = fill_scheme(tpl, x)
            for t in relaxations:
                out = simulate_cell(ft, bs, t, algo, **kw)
                row[(tpl, as_fraction(t))] = out
        rows.append(row)
    return rows


@dataclass(frozen=True)
class BenchRow:
    label: str
    code_length: int
    model_decode: Fraction
    measured_decode: Fraction
    accesses: tuple[int, ...]
    encode_seconds: float
    decode_seconds: float
    roundtrip: bool
    container_bytes: int


def bench_code(label: str, data: Sequence, code: PrefixCode, bs: BlockingScheme) -> BenchRow:
    """Encode and decode ``data`` for real, metering table accesses."""
    tables = compile_tables(code, bs)
    t0 = time.perf_counter()
    container = encode_stream(data, code)
    blob = container.to_bytes()
    t1 = time.perf_counter()
    out, meter = decode_stream(container, tables)
    t2 = time.perf_counter()
    counts: dict = {}
    for s in data:
        counts[s] = counts.get(s, 0) + 1
    return BenchRow(
        label=label,
        code_length=container.payload_bits,
        model_decode=model_cost(counts, code, bs),
        measured_decode=measured_cost(meter, bs),
        accesses=tuple(meter.accesses),
        encode_seconds=t1 - t0,
        decode_seconds=t2 - t1,
        roundtrip=list(out) == list(data),
        container_bytes=len(blob),
    )


def bench(data: bytes, ft: FrequencyTable, bs: BlockingScheme, budget: int, algo: str = "exact", **kw) -> list[BenchRow]:
    outcome = optimize(ft, bs, budget, algo, **kw)
    rows = []
    if outcome.huffman is not None:
        _, shape = huffman_dp(ft)
        rows.append(bench_code("huffman", data, build_tree_from_shape(ft, shape), bs))
    rows.append(bench_code(outcome.optimized.method or algo, data, outcome.code, bs))
    return rows
