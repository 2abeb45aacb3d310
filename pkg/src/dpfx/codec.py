"""Multi-level lookup-table decoder, bitstream encoder and the DPFX container.

Each lookup resolves exactly one symbol or descends one block level, so the
per-level access counts recorded by :class:`AccessMeter` are the empirical
counterpart of the analytical decode time.
"""
from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import CorruptContainer, SchemeTooShort, TableMismatch, UnknownSymbol
from .model import BlockingScheme, PrefixCode, block_of_depth

MAGIC = b"DPFX"
VERSION = 1


class Decoded(NamedTuple):
    symbol: object
    bits: int


class Descend(NamedTuple):
    table: int


@dataclass(frozen=True)
class LookupTable:
    width: int
    cost: Fraction
    block_level: int
    # None only marks the unused half of a one-symbol code
    entries: tuple


@dataclass(frozen=True)
class TableSet:
    tables: tuple[LookupTable, ...]
    signature: tuple

    @property
    def root(self) -> LookupTable:
        return self.tables[0]


def code_signature(code: PrefixCode) -> tuple:
    return tuple((code.symbols[k], code.lengths[k]) for k in code.canonical_order())


def compile_tables(code: PrefixCode, bs: BlockingScheme) -> TableSet:
    """Build the root table and one child table per block-boundary internal node."""
    if code.height > bs.total_width:
        raise SchemeTooShort(f"code height {code.height} exceeds the {bs.total_width} levels of {bs}")
    by_prefix: dict[tuple[int, int], object] = {
        (l, c): s for s, c, l in zip(code.symbols, code.codes, code.lengths)
    }
    tables: list[LookupTable | None] = []

    def build(depth: int, prefix: int, level: int) -> int:
        width, cost = bs.block(level)
        slot = len(tables)
        tables.append(None)
        entries: list = [None] * (1 << width)
        for s in range(1 << width):
            for r in range(1, width + 1):
                sym = by_prefix.get((depth + r, (prefix << r) | (s >> (width - r))))
                if sym is not None:
                    entries[s] = Decoded(sym, r)
                    break
        pending = [s for s in range(1 << width) if entries[s] is None]
        for s in pending:
            child_prefix = (prefix << width) | s
            if _has_descendant(code, depth + width, child_prefix):
                entries[s] = Descend(build(depth + width, child_prefix, level + 1))
        tables[slot] = LookupTable(width, cost, level, tuple(entries))
        return slot

    build(0, 0, 1)
    return TableSet(tuple(tables), code_signature(code))


def _has_descendant(code: PrefixCode, depth: int, prefix: int) -> bool:
    for c, l in zip(code.codes, code.lengths):
        if l > depth and (c >> (l - depth)) == prefix:
            return True
    return False


@dataclass
class AccessMeter:
    """Table lookups per block level (index 0 is block level 1)."""

    accesses: list[int] = field(default_factory=list)

    def hit(self, level: int) -> None:
        while len(self.accesses) < level:
            self.accesses.append(0)
        self.accesses[level - 1] += 1


def measured_cost(meter: AccessMeter, bs: BlockingScheme) -> Fraction:
    return sum((count * bs.block(j + 1)[1] for j, count in enumerate(meter.accesses)), Fraction(0))


def model_cost(counts: Counter | dict, code: PrefixCode, bs: BlockingScheme) -> Fraction:
    """Analytical decode time for the given per-symbol occurrence counts."""
    lengths = dict(zip(code.symbols, code.lengths))
    return sum((cnt * block_of_depth(bs, lengths[s])[1] for s, cnt in counts.items()), Fraction(0))


@dataclass(frozen=True)
class EncodedContainer:
    symbol_count: int
    alphabet: tuple[tuple[int, int], ...]  # (symbol id, code length), canonical order
    payload_bits: int
    payload: bytes
    version: int = VERSION

    def code(self) -> PrefixCode:
        return PrefixCode.from_lengths([s for s, _ in self.alphabet], [l for _, l in self.alphabet])

    def to_bytes(self) -> bytes:
        out = bytearray(MAGIC)
        out.append(self.version)
        out += struct.pack(">QI", self.symbol_count, len(self.alphabet))
        for sym, length in self.alphabet:
            if not isinstance(sym, int) or not 0 <= sym < 1 << 16:
                raise ValueError(f"container symbols must be integers in [0, 65535], got {sym!r}")
            out += struct.pack(">HB", sym, length)
        out += struct.pack(">Q", self.payload_bits)
        out += self.payload
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> EncodedContainer:
        if len(data) < 17 or data[:4] != MAGIC:
            raise CorruptContainer("missing DPFX magic")
        version = data[4]
        if version != VERSION:
            raise CorruptContainer(f"unsupported container version {version}")
        count, size = struct.unpack_from(">QI", data, 5)
        pos = 17
        if len(data) < pos + 3 * size + 8:
            raise CorruptContainer("truncated alphabet")
        alphabet = tuple(struct.unpack_from(">HB", data, pos + 3 * k) for k in range(size))
        pos += 3 * size
        (bits,) = struct.unpack_from(">Q", data, pos)
        payload = data[pos + 8 :]
        if len(payload) != (bits + 7) // 8:
            raise CorruptContainer(f"payload holds {len(payload)} bytes, header says {bits} bits")
        if any(l < 1 for _, l in alphabet):
            raise CorruptContainer("zero code length in alphabet")
        return cls(count, alphabet, bits, bytes(payload), version)


class _BitWriter:
    def __init__(self):
        self.buf = bytearray()
        self.acc = 0
        self.nbits = 0
        self.total = 0

    def write(self, code: int, length: int) -> None:
        self.acc = (self.acc << length) | code
        self.nbits += length
        self.total += length
        while self.nbits >= 8:
            self.nbits -= 8
            self.buf.append((self.acc >> self.nbits) & 0xFF)
        self.acc &= (1 << self.nbits) - 1

    def getvalue(self) -> bytes:
        if self.nbits:
            return bytes(self.buf) + bytes([(self.acc << (8 - self.nbits)) & 0xFF])
        return bytes(self.buf)


def encode_stream(symbols: Iterable, code: PrefixCode) -> EncodedContainer:
    table = code.as_dict()
    writer = _BitWriter()
    count = 0
    for sym in symbols:
        try:
            c, l = table[sym]
        except KeyError:
            raise UnknownSymbol(f"symbol {sym!r} is not in the code") from None
        writer.write(c, l)
        count += 1
    alphabet = code_signature(code)
    return EncodedContainer(count, alphabet, writer.total, writer.getvalue())


def decode_stream(container: EncodedContainer, tables: TableSet) -> tuple[list, AccessMeter]:
    """Decode ``symbol_count`` symbols; padding bits are never interpreted."""
    if tables.signature != container.alphabet:
        raise TableMismatch("lookup tables were compiled for a different code")
    data = container.payload
    total = container.payload_bits
    meter = AccessMeter()
    out = []
    pos = 0
    for _ in range(container.symbol_count):
        t = 0
        while True:
            tab = tables.tables[t]
            meter.hit(tab.block_level)
            idx = _peek(data, pos, tab.width)
            entry = tab.entries[idx]
            if entry is None:
                raise CorruptContainer(f"invalid codeword at bit {pos}")
            if isinstance(entry, Decoded):
                pos += entry.bits
                out.append(entry.symbol)
                break
            pos += tab.width
            t = entry.table
        if pos > total:
            raise CorruptContainer("payload ended inside a codeword")
    return out, meter


def _peek(data: bytes, pos: int, width: int) -> int:
    start = pos >> 3
    span = ((pos & 7) + width + 7) >> 3
    chunk = int.from_bytes(data[start : start + span].ljust(span, b"\0"), "big")
    return (chunk >> (span * 8 - (pos & 7) - width)) & ((1 << width) - 1)


def stream_counts(symbols: Sequence) -> Counter:
    return Counter(symbols)
