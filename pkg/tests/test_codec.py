import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import SIX, random_code_lengths, random_scheme
from dpfx.codec import (
    AccessMeter,
    Decoded,
    Descend,
    EncodedContainer,
    compile_tables,
    decode_stream,
    encode_stream,
    measured_cost,
    model_cost,
)
from dpfx.errors import CorruptContainer, SchemeTooShort, TableMismatch, UnknownSymbol
from dpfx.model import BlockingScheme, PrefixCode, block_of_depth

BS = BlockingScheme(((2, 1), (3, 5)))
SYMS = list(range(6))
TREE_A = PrefixCode.from_lengths(SYMS, [1, 2, 3, 4, 5, 5])
TREE_B = PrefixCode.from_lengths(SYMS, [2, 2, 2, 3, 4, 4])


def six_stream(seed=0):
    out = [s for s, f in zip(SYMS, SIX) for _ in range(f)]
    random.Random(seed).shuffle(out)
    return out


def boundary_nodes(code, bs):
    """Internal nodes sitting exactly on a block boundary, counted from the codewords."""
    bounds, depth, j = [], 0, 1
    while depth < code.height:
        depth += bs.block(j)[0]
        j += 1
        if depth < code.height:
            bounds.append(depth)
    prefixes = set()
    for c, l in zip(code.codes, code.lengths):
        for d in bounds:
            if l > d:
                prefixes.add((d, c >> (l - d)))
    return 1 + len(prefixes)


def test_tables_for_huffman_tree():
    ts = compile_tables(TREE_A, BS)
    root = ts.root
    assert len(ts.tables) == 2
    assert len(root.entries) == 4 and len(ts.tables[1].entries) == 8
    decoded = [e for e in root.entries if isinstance(e, Decoded)]
    assert Counter(decoded) == {Decoded(0, 1): 2, Decoded(1, 2): 1}
    assert sum(isinstance(e, Descend) for e in root.entries) == 1
    assert all(e is not None for t in ts.tables for e in t.entries)


def test_depth_one_code_fills_half_each():
    ts = compile_tables(PrefixCode.from_lengths(["a", "b"], [1, 1]), BlockingScheme(((2, 1),)))
    assert len(ts.tables) == 1
    assert Counter(ts.root.entries) == {Decoded("a", 1): 2, Decoded("b", 1): 2}


def test_scheme_too_short():
    with pytest.raises(SchemeTooShort):
        compile_tables(TREE_A, BlockingScheme(((2, 1), (2, 5))))


@pytest.mark.parametrize("code, expected", [(TREE_A, 106), (TREE_B, 76)])
def test_measured_cost_of_six_symbol_stream(code, expected):
    stream = six_stream()
    container = encode_stream(stream, code)
    out, meter = decode_stream(container, compile_tables(code, BS))
    assert out == stream
    assert measured_cost(meter, BS) == expected


def test_empty_stream():
    container = encode_stream([], TREE_A)
    assert (container.symbol_count, container.payload_bits, container.payload) == (0, 0, b"")
    out, meter = decode_stream(EncodedContainer.from_bytes(container.to_bytes()), compile_tables(TREE_A, BS))
    assert out == [] and measured_cost(meter, BS) == 0


def test_payload_bits():
    code = PrefixCode.from_lengths(["a", "b"], [1, 2])
    assert encode_stream("aab", code).payload_bits == 4


def test_single_symbol_alphabet():
    code = PrefixCode.from_lengths([65], [1])
    bs = BlockingScheme(((3, 2),))
    container = encode_stream([65] * 5, code)
    out, meter = decode_stream(container, compile_tables(code, bs))
    assert out == [65] * 5
    assert meter.accesses == [5]
    assert measured_cost(meter, bs) == 10


def test_container_layout():
    code = PrefixCode.from_lengths([7, 300], [1, 1])
    blob = encode_stream([300, 7, 300], code).to_bytes()
    assert blob[:5] == b"DPFX\x01"
    assert blob[5:13] == (3).to_bytes(8, "big")
    assert blob[13:17] == (2).to_bytes(4, "big")
    assert blob[17:23] == bytes([0, 7, 1, 0x01, 0x2C, 1])
    assert blob[23:31] == (3).to_bytes(8, "big")
    assert blob[31:] == bytes([0b10100000])


def test_errors():
    with pytest.raises(UnknownSymbol):
        encode_stream([0, 9], TREE_A)
    container = encode_stream(six_stream(), TREE_A)
    with pytest.raises(TableMismatch):
        decode_stream(container, compile_tables(TREE_B, BS))
    blob = container.to_bytes()
    with pytest.raises(CorruptContainer):
        EncodedContainer.from_bytes(b"XXXX" + blob[4:])
    with pytest.raises(CorruptContainer):
        EncodedContainer.from_bytes(blob[:-1])
    with pytest.raises(CorruptContainer):
        EncodedContainer.from_bytes(blob[:4] + b"\x02" + blob[5:])
    # claim one more symbol than was written
    short = EncodedContainer(container.symbol_count + 1, container.alphabet, container.payload_bits, container.payload)
    with pytest.raises(CorruptContainer):
        decode_stream(short, compile_tables(TREE_A, BS))


def test_meter_counts_levels():
    m = AccessMeter()
    m.hit(2)
    m.hit(1)
    assert m.accesses == [1, 1]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 16), st.integers(0, 400), st.randoms())
def test_round_trip_and_cost_agreement(n, length, rnd):
    lengths = random_code_lengths(rnd, n)
    code = PrefixCode.from_lengths(list(range(n)), lengths)
    bs = random_scheme(rnd, extend=True)
    stream = [rnd.randrange(n) for _ in range(length)]
    ts = compile_tables(code, bs)
    assert len(ts.tables) == boundary_nodes(code, bs)
    container = encode_stream(stream, code)
    assert container.payload_bits == sum(lengths[s] for s in stream)
    blob = container.to_bytes()
    again = EncodedContainer.from_bytes(blob)
    assert again.to_bytes() == blob
    out, meter = decode_stream(again, ts)
    assert out == stream
    counts = Counter(stream)
    expected = sum((c * block_of_depth(bs, lengths[s])[1] for s, c in counts.items()), Fraction(0))
    assert measured_cost(meter, bs) == expected == model_cost(counts, code, bs)
    # each symbol walks exactly as many tables as its block index
    walks = sum(c * block_of_depth(bs, lengths[s])[0] for s, c in counts.items())
    assert sum(meter.accesses) == walks
