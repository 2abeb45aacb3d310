"""Frequency ingestion, run configuration and codebook files."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import EmptyInput, MalformedTable
from .huffman import huffman_dp
from .model import FrequencyTable, PrefixCode, as_fraction, parse_blocking_scheme  # noqa: F401

ALGORITHMS = ("exact", "fixed", "approx", "const-k")
FORMATS = ("table", "csv", "json")


def _from_counter(counts) -> FrequencyTable:
    if not any(c > 0 for _, c in counts):
        raise EmptyInput("no symbol has a positive count")
    return FrequencyTable.from_counts(counts)


def histogram(data: bytes) -> FrequencyTable:
    """Byte-value histogram; symbols are the integers 0..255."""
    return _from_counter(sorted(Counter(data).items()))


def _parse_count(text, where: str) -> int:
    try:
        value = int(str(text).strip())
    except ValueError:
        raise MalformedTable(f"{where}: count {text!r} is not an integer") from None
    if value < 0:
        raise MalformedTable(f"{where}: negative count {value}")
    return value


def parse_csv_table(text: str) -> FrequencyTable:
    pairs = []
    seen = set()
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise MalformedTable(f"line {lineno}: expected 'symbol,count', got {len(row)} fields")
        sym = row[0].strip()
        if lineno == 1 and not row[1].strip().lstrip("-").isdigit():
            continue  # header
        if sym in seen:
            raise MalformedTable(f"line {lineno}: duplicate symbol {sym!r}")
        seen.add(sym)
        pairs.append((sym, _parse_count(row[1], f"line {lineno}")))
    return _from_counter(pairs)


def parse_json_table(text: str) -> FrequencyTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTable(f"invalid JSON: {exc}") from None
    if isinstance(doc, dict):
        items = list(doc.items())
    elif isinstance(doc, list) and all(isinstance(p, list) and len(p) == 2 for p in doc):
        items = [tuple(p) for p in doc]
    else:
        raise MalformedTable("JSON table must be an object or a list of [symbol, count] pairs")
    syms = [s for s, _ in items]
    if len(set(map(str, syms))) != len(syms):
        raise MalformedTable("duplicate symbol in JSON table")
    return _from_counter([(s, _parse_count(c, f"symbol {s!r}")) for s, c in items])


def ingest_frequencies(source, kind: str | None = None) -> FrequencyTable:
    """Build a table from raw bytes, or from a CSV/JSON file of (symbol, count).

    ``kind`` is one of "bytes", "csv", "json"; when omitted it is taken from
    the file extension and raw bytes are assumed otherwise.
    """
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
        kind = kind or "bytes"
    else:
        path = Path(source)
        data = path.read_bytes()
        if kind is None:
            kind = {".csv": "csv", ".json": "json"}.get(path.suffix.lower(), "bytes")
    if kind == "bytes":
        if not data:
            raise EmptyInput("input is empty")
        return histogram(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedTable(f"{kind} table is not valid UTF-8") from None
    if kind == "csv":
        return parse_csv_table(text)
    if kind == "json":
        return parse_json_table(text)
    raise ValueError(f"unknown input kind {kind!r}")


@dataclass
class RunConfig:
    inputs: list = field(default_factory=list)
    scheme: str = "(4,1),(4,10),..."
    budget: int | None = None
    budget_factor: Fraction | None = None
    algo: str = "exact"
    epsilon: Fraction = Fraction(1, 20)
    delta: Fraction = Fraction(1, 4)
    height: int | str | None = None
    fmt: str = "table"
    work_limit: int | None = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose from {', '.join(ALGORITHMS)}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.budget is not None and self.budget_factor is not None:
            raise ValueError("give either an absolute budget or a budget factor, not both")
        if self.budget_factor is not None:
            self.budget_factor = as_fraction(self.budget_factor)
            if self.budget_factor < 1:
                raise ValueError(f"budget factor must be >= 1, got {self.budget_factor}")
        self.epsilon = as_fraction(self.epsilon)
        self.delta = as_fraction(self.delta)


def resolve_budget(ft: FrequencyTable, budget: int | None = None, factor=None) -> int:
    """Absolute budget, or ``floor(factor * Huffman length)``; plain Huffman when neither is given."""
    if budget is not None:
        return int(budget)
    huff, _ = huffman_dp(ft)
    if factor is None:
        return huff
    return math.floor(as_fraction(factor) * huff)


# codebook files: canonical (symbol, length) list plus the scheme it was optimized for


def write_codebook(path, code: PrefixCode, scheme: str = "", meta: dict | None = None) -> None:
    order = code.canonical_order()
    doc = {
        "format": "dpfx-codebook",
        "version": 1,
        "scheme": scheme,
        "symbols": [{"symbol": code.symbols[k], "length": code.lengths[k]} for k in order],
    }
    if meta:
        doc["meta"] = meta
    Path(path).write_text(json.dumps(doc, indent=2, default=str) + "\n")


def read_codebook(path) -> tuple[PrefixCode, str]:
    try:
        doc = json.loads(Path(path).read_text())
        entries = doc["symbols"]
        syms = [e["symbol"] for e in entries]
        lengths = [int(e["length"]) for e in entries]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedTable(f"bad codebook {path}: {exc}") from None
    if not syms:
        raise MalformedTable(f"codebook {path} is empty")
    try:
        code = PrefixCode.from_lengths(syms, lengths)
    except ValueError as exc:
        raise MalformedTable(f"bad codebook {path}: {exc}") from None
    return code, doc.get("scheme", "")
