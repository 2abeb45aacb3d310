"""Domain types and cost functions for decode-time-aware prefix codes.

Everything here is exact: frequencies are integers and block access costs are
:class:`fractions.Fraction` values, so code lengths and decode times compare
without tolerance.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InvalidShape, MalformedTable, ParseError, SchemeTooShort, EmptyInput


def as_fraction(value) -> Fraction:
    """Convert ints, decimal strings, floats (via repr) or Fractions exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class FrequencyTable:
    """Symbols with positive counts, stored in ascending frequency order.

    ``permutation[k]`` is the position of ``symbols[k]`` in the original
    (ingestion) order. Equal frequencies are ordered so that the *descending*
    view lists them in original order, which makes the shallowest leaf go to
    the earliest symbol.
    """

    symbols: tuple
    freqs: tuple[int, ...]
    permutation: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (len(self.symbols) == len(self.freqs) == len(self.permutation)):
            raise MalformedTable("symbols, freqs and permutation differ in length")
        if not self.symbols:
            raise EmptyInput("frequency table has no symbols")
        if any(f <= 0 for f in self.freqs):
            raise MalformedTable("frequencies must be positive")
        if any(a > b for a, b in zip(self.freqs, self.freqs[1:])):
            raise MalformedTable("frequencies must be sorted ascending")
        if sorted(self.permutation) != list(range(len(self.symbols))):
            raise MalformedTable("permutation is not a bijection")
        index = {s: k for k, s in enumerate(self.symbols)}
        if len(index) != len(self.symbols):
            raise MalformedTable("duplicate symbol")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_counts(cls, counts: Mapping[Hashable, int] | Iterable[tuple[Hashable, int]]) -> FrequencyTable:
        pairs = list(counts.items()) if isinstance(counts, Mapping) else list(counts)
        seen = set()
        kept = []
        for pos, (sym, cnt) in enumerate(pairs):
            if sym in seen:
                raise MalformedTable(f"duplicate symbol {sym!r}")
            seen.add(sym)
            cnt = int(cnt)
            if cnt < 0:
                raise MalformedTable(f"negative count for {sym!r}")
            if cnt > 0:
                kept.append((sym, cnt, pos))
        if not kept:
            raise EmptyInput("no symbol has a positive count")
        # original positions renumbered densely after dropping zero counts
        kept = [(s, c, k) for k, (s, c, _) in enumerate(kept)]
        kept.sort(key=lambda t: (t[1], -t[2]))
        return cls(
            symbols=tuple(t[0] for t in kept),
            freqs=tuple(t[1] for t in kept),
            permutation=tuple(t[2] for t in kept),
        )

    @classmethod
    def from_freqs(cls, freqs: Sequence[int]) -> FrequencyTable:
        """Table whose symbols are the positions ``0..n-1`` of ``freqs``."""
        return cls.from_counts(list(enumerate(freqs)))

    @property
    def n(self) -> int:
        return len(self.freqs)

    @property
    def total(self) -> int:
        return sum(self.freqs)

    def freq_of(self, symbol) -> int:
        return self.freqs[self._index[symbol]]

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def original_symbols(self) -> tuple:
        out = [None] * self.n
        for k, pos in enumerate(self.permutation):
            out[pos] = self.symbols[k]
        return tuple(out)

    def descending(self) -> tuple:
        return self.symbols[::-1]


@dataclass(frozen=True)
class BlockingScheme:
    """Chained lookup tables: ``blocks[j] = (width_bits, access_cost)``.

    With ``extend`` set the last block repeats indefinitely.
    """

    blocks: tuple[tuple[int, Fraction], ...]
    extend: bool = False

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("blocking scheme needs at least one block")
        norm = []
        for w, q in self.blocks:
            if int(w) != w or w < 1:
                raise ValueError(f"block width must be a positive integer, got {w!r}")
            q = as_fraction(q)
            if q <= 0:
                raise ValueError(f"block cost must be positive, got {q}")
            norm.append((int(w), q))
        object.__setattr__(self, "blocks", tuple(norm))

    @classmethod
    def parse(cls, text: str) -> BlockingScheme:
        return parse_blocking_scheme(text)

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def total_width(self) -> float | int:
        if self.extend:
            return math.inf
        return sum(w for w, _ in self.blocks)

    def block(self, index: int) -> tuple[int, Fraction]:
        """Parameters of 1-based block ``index``, honouring the repeat rule."""
        if index <= self.m:
            return self.blocks[index - 1]
        if not self.extend:
            raise SchemeTooShort(f"scheme has only {self.m} blocks, block {index} requested")
        return self.blocks[-1]

    def with_cost_scale(self) -> tuple[int, list[int]]:
        """Common denominator and the block costs scaled to integers."""
        scale = math.lcm(*(q.denominator for _, q in self.blocks))
        return scale, [int(q * scale) for _, q in self.blocks]

    def __str__(self) -> str:
        parts = [f"({w},{_fmt_cost(q)})" for w, q in self.blocks]
        if self.extend:
            parts.append("...")
        return ",".join(parts)


def _fmt_cost(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        digits = 0
        while (q * 10**digits).denominator != 1:
            digits += 1
        return f"{float(q):.{digits}f}"
    return f"{q.numerator}/{q.denominator}"


_PAIR = re.compile(r"\s*\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*")
_ELLIPSIS = re.compile(r"\s*(\.\.\.|…)\s*$")


def parse_blocking_scheme(text: str) -> BlockingScheme:
    """Parse ``"(w,q),(w,q),..."``; a trailing ``...`` sets ``extend``.

    Optional surrounding angle brackets are accepted.
    """
    src = text.strip()
    offset = len(text) - len(text.lstrip())
    if src.startswith("<") and src.endswith(">"):
        src, offset = src[1:-1], offset + 1
    pos = 0
    blocks = []
    extend = False
    while True:
        m = _PAIR.match(src, pos)
        if not m:
            raise ParseError("expected '(width,cost)'", offset + pos)
        w_txt, q_txt = m.group(1), m.group(2)
        if not w_txt.isdigit() or int(w_txt) < 1:
            raise ParseError(f"width must be an integer >= 1, got {w_txt!r}", offset + m.start(1))
        try:
            q = Fraction(q_txt)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cost must be a decimal rational, got {q_txt!r}", offset + m.start(2)) from None
        if q <= 0:
            raise ParseError(f"cost must be positive, got {q_txt!r}", offset + m.start(2))
        blocks.append((int(w_txt), q))
        pos = m.end()
        if pos == len(src):
            break
        if src[pos] != ",":
            raise ParseError("expected ','", offset + pos)
        pos += 1
        if _ELLIPSIS.match(src, pos):
            extend = True
            break
    return BlockingScheme(tuple(blocks), extend)


@dataclass(frozen=True)
class LevelCostProfile:
    """``qhat[l-1]`` is the cost charged at tree level ``l`` (levels start at 1).

    A level carries the cost of block ``j`` when it is the first level of that
    block and zero otherwise.
    """

    qhat: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.qhat)

    def at(self, level: int) -> Fraction:
        return self.qhat[level - 1]


@dataclass(frozen=True)
class TreeShape:
    """``counts[l]`` = number of internal nodes at depth >= l, ending in 0."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def height(self) -> int:
        return len(self.counts) - 1

    def leaves_below(self) -> list[int]:
        """``2*i_l - i_{l+1}`` for every level l < height."""
        c = self.counts
        return [2 * c[l] - c[l + 1] for l in range(len(c) - 1)]

    def leaves_per_depth(self) -> list[int]:
        """Entry d is the number of leaves at depth d (index 0 unused)."""
        below = self.leaves_below() + [0]
        return [0] + [below[d - 1] - below[d] for d in range(1, len(below))]

    def __str__(self) -> str:
        return "<" + ",".join(map(str, self.counts)) + ">"


@dataclass(frozen=True)
class PrefixCode:
    """Per-symbol canonical codewords, symbols in original order.

    ``codes[k]`` holds the codeword of ``symbols[k]`` as an integer whose
    ``lengths[k]`` low bits are read most-significant first.
    """

    symbols: tuple
    lengths: tuple[int, ...]
    codes: tuple[int, ...]

    @classmethod
    def from_lengths(cls, symbols: Sequence, lengths: Sequence[int]) -> PrefixCode:
        """Canonical assignment: consecutive codes in (length, position) order."""
        if len(symbols) != len(lengths):
            raise ValueError("symbols and lengths differ in size")
        if any(l < 1 for l in lengths):
            raise ValueError("codeword lengths must be >= 1")
        codes = [0] * len(symbols)
        code = 0
        prev = None
        for k in sorted(range(len(symbols)), key=lambda k: (lengths[k], k)):
            if prev is not None:
                code = (code + 1) << (lengths[k] - prev)
            else:
                code = 0
            codes[k] = code
            prev = lengths[k]
        if len(symbols) and code >= 1 << prev:
            raise ValueError("lengths violate the Kraft inequality")
        return cls(tuple(symbols), tuple(int(l) for l in lengths), tuple(codes))

    @property
    def height(self) -> int:
        return max(self.lengths, default=0)

    @property
    def n(self) -> int:
        return len(self.symbols)

    def canonical_order(self) -> list[int]:
        return sorted(range(self.n), key=lambda k: (self.lengths[k], k))

    def as_dict(self) -> dict:
        return {s: (c, l) for s, c, l in zip(self.symbols, self.codes, self.lengths)}

    def bitstring(self, symbol) -> str:
        c, l = self.as_dict()[symbol]
        return format(c, f"0{l}b")

    def kraft_sum(self) -> Fraction:
        return sum((Fraction(1, 2**l) for l in self.lengths), Fraction(0))


@dataclass(frozen=True)
class CostReport:
    code_length: int
    decode_time: Fraction
    per_block_counts: tuple[int, ...]
    budget: int | None = None
    height: int = 0
    method: str = ""
    measured_cost: Fraction | None = None


# ---------------------------------------------------------------- functions


def prefix_sums(ft: FrequencyTable) -> list[int]:
    return [0, *accumulate(ft.freqs)]


def level_cost_profile(bs: BlockingScheme, h: int) -> LevelCostProfile:
    if h < 0:
        raise ValueError("height must be non-negative")
    if h > bs.total_width:
        raise SchemeTooShort(f"scheme {bs} addresses {bs.total_width} levels, tree needs {h}")
    qhat = [Fraction(0)] * h
    level, j = 1, 1
    while level <= h:
        w, q = bs.block(j)
        qhat[level - 1] = q
        level += w
        j += 1
    return LevelCostProfile(tuple(qhat))


def block_of_depth(bs: BlockingScheme, d: int) -> tuple[int, Fraction]:
    """Block index holding depth ``d`` and the cumulative cost to reach it."""
    if d < 1:
        raise ValueError("depth must be >= 1")
    covered, cost, j = 0, Fraction(0), 0
    while covered < d:
        j += 1
        w, q = bs.block(j)
        covered += w
        cost += q
    return j, cost


def hierarchy_count(bs: BlockingScheme) -> int:
    costs = [q for _, q in bs.blocks]
    return 1 + sum(1 for a, b in zip(costs, costs[1:]) if a != b)


def _freqs_by_symbol(ft: FrequencyTable, code: PrefixCode) -> list[int]:
    try:
        return [ft.freq_of(s) for s in code.symbols]
    except KeyError as exc:
        raise ValueError(f"symbol {exc.args[0]!r} missing from frequency table") from None


def code_length(ft: FrequencyTable, code: PrefixCode) -> int:
    if set(code.symbols) != set(ft.symbols):
        raise ValueError("code and frequency table cover different symbols")
    return sum(f * l for f, l in zip(_freqs_by_symbol(ft, code), code.lengths))


def decode_time(ft: FrequencyTable, code: PrefixCode, bs: BlockingScheme) -> Fraction:
    if set(code.symbols) != set(ft.symbols):
        raise ValueError("code and frequency table cover different symbols")
    cum = {}
    total = Fraction(0)
    for f, l in zip(_freqs_by_symbol(ft, code), code.lengths):
        if l not in cum:
            cum[l] = block_of_depth(bs, l)[1]
        total += f * cum[l]
    return total


def validate_shape(shape: TreeShape | Sequence[int], n: int) -> bool:
    """True iff the internal-node sequence describes a full binary tree on n leaves.

    Besides the window ``0 <= 2*i_l - i_{l+1} <= n`` this also requires every
    level to have enough parents: internal nodes at depth l+1 are at most twice
    the internal nodes at depth l.
    """
    c = tuple(shape.counts if isinstance(shape, TreeShape) else shape)
    if n < 1 or not c or c[0] != n - 1 or c[-1] != 0:
        return False
    for a, b in zip(c, c[1:]):
        if b >= a or not 0 <= 2 * a - b <= n:
            return False
    for l in range(len(c) - 2):
        if c[l + 1] - c[l + 2] > 2 * (c[l] - c[l + 1]):
            return False
    return True


def _require_valid(ft: FrequencyTable, shape: TreeShape) -> None:
    if not validate_shape(shape, ft.n):
        raise InvalidShape(f"{shape} is not a valid tree shape for n={ft.n}")


def len_from_shape(ft: FrequencyTable, shape: TreeShape) -> int:
    _require_valid(ft, shape)
    P = prefix_sums(ft)
    if ft.n == 1:
        return P[1]
    return sum(P[a] for a in shape.leaves_below())


def decode_time_from_shape(ft: FrequencyTable, shape: TreeShape, bs: BlockingScheme) -> Fraction:
    _require_valid(ft, shape)
    P = prefix_sums(ft)
    if ft.n == 1:
        return bs.blocks[0][1] * P[1]
    prof = level_cost_profile(bs, shape.height)
    return sum((prof.qhat[l] * a for l, a in enumerate(P[x] for x in shape.leaves_below())), Fraction(0))


def per_block_counts(bs: BlockingScheme, lengths: Iterable[int]) -> tuple[int, ...]:
    counts: dict[int, int] = {}
    for l in lengths:
        j = block_of_depth(bs, l)[0]
        counts[j] = counts.get(j, 0) + 1
    top = max(counts, default=0)
    return tuple(counts.get(j, 0) for j in range(1, top + 1))


def min_length_for_height(ft: FrequencyTable, height: int) -> int:
    """Lower bound on ``len(T)`` over trees of height >= ``height``.

    A tree of height H has, along the path to its deepest leaf, H disjoint
    sibling subtrees whose leaves sit at depths >= 1..H, plus the deepest leaf.
    """
    n = ft.n
    bounds = sorted([height, *range(height, 0, -1)] + [1] * (n - height - 1), reverse=True)
    return sum(f * b for f, b in zip(ft.freqs, bounds))


def safe_height(ft: FrequencyTable, length_cap: int) -> int:
    """Largest height any tree with ``len(T) <= length_cap`` can have."""
    n = ft.n
    if n <= 2:
        return max(n - 1, 0)
    lo = max(1, math.ceil(math.log2(n)))
    best = lo
    for H in range(lo, n):
        if min_length_for_height(ft, H) <= length_cap:
            best = H
        else:
            break
    return best
