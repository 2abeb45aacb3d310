"""dpfx command line: analyze, optimize, encode, decode, simulate, bench.

Exit status: 0 ok, 2 infeasible, 3 parse error, 4 work limit exceeded,
1 any other error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .codec import EncodedContainer, compile_tables, decode_stream, encode_stream, measured_cost, model_cost
from .errors import (
    DpfxError,
    EmptyInput,
    Infeasible,
    MalformedTable,
    ParseError,
    SchemeTooShort,
    WorkLimitExceeded,
)
from .harness import bench, huffman_report, optimize, simulate
from .ingest import ALGORITHMS, FORMATS, RunConfig, ingest_frequencies, read_codebook, resolve_budget, write_codebook
from .model import as_fraction, parse_blocking_scheme

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_PARSE, EXIT_WORK = 0, 1, 2, 3, 4
DEFAULT_SCHEME = "(4,1),(4,10),..."


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ output


def _cell(value, fmt: str):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return str(value) if fmt != "table" else f"{value} (~{float(value):.4f})"
    if isinstance(value, float):
        return round(value, 6) if fmt == "json" else f"{value:.6f}"
    if isinstance(value, (tuple, list)) and fmt != "json":
        return " ".join(str(v) for v in value)
    if value is None:
        return "" if fmt != "json" else None
    return value


def emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if not rows:
        return
    keys = list(rows[0])
    cells = [{k: _cell(r.get(k), fmt) for k in keys} for r in rows]
    if fmt == "json":
        json.dump(cells, out, indent=2, default=str)
        out.write("\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(cells)
        out.write(buf.getvalue())
    else:
        widths = {k: max(len(k), *(len(str(c[k])) for c in cells)) for k in keys}
        out.write("  ".join(k.ljust(widths[k]) for k in keys).rstrip() + "\n")
        for c in cells:
            out.write("  ".join(str(c[k]).ljust(widths[k]) for k in keys).rstrip() + "\n")


def _ratio(x: Fraction | None):
    return None if x is None else float(x)


# ------------------------------------------------------------------ commands


def _config(args) -> RunConfig:
    return RunConfig(
        inputs=[args.input],
        scheme=args.scheme,
        budget=getattr(args, "budget", None),
        budget_factor=getattr(args, "budget_factor", None),
        algo=getattr(args, "algo", "exact"),
        epsilon=getattr(args, "epsilon", Fraction(1, 20)),
        delta=getattr(args, "delta", Fraction(1, 4)),
        height=getattr(args, "height", None),
        fmt=args.format,
        work_limit=getattr(args, "work_limit", None),
    )


def _solver_kw(cfg: RunConfig) -> dict:
    return dict(epsilon=cfg.epsilon, delta=cfg.delta, height=cfg.height, work_limit=cfg.work_limit)


def cmd_analyze(args) -> int:
    ft = ingest_frequencies(args.input, args.kind)
    bs = parse_blocking_scheme(args.scheme)
    base, huff_len = huffman_report(ft, bs)
    row = {
        "symbols": ft.n,
        "total": ft.total,
        "huffman_length": huff_len,
        "huffman_height": base.height if base else None,
        "huffman_decode": base.decode_time if base else None,
        "per_block": base.per_block_counts if base else None,
        "scheme": str(bs),
    }
    emit([row], args.format)
    return EXIT_OK


def _outcome_rows(out, budget: int) -> list[dict]:
    rows = []
    if out.huffman is not None:
        h = out.huffman
        rows.append(
            {
                "method": "huffman",
                "budget": None,
                "length": h.code_length,
                "decode": h.decode_time,
                "height": h.height,
                "per_block": h.per_block_counts,
                "relaxation": 0.0,
                "speedup": 1.0,
            }
        )
    o = out.optimized
    rows.append(
        {
            "method": o.method,
            "budget": budget,
            "length": o.code_length,
            "decode": o.decode_time,
            "height": o.height,
            "per_block": o.per_block_counts,
            "relaxation": float(out.relaxation),
            "speedup": _ratio(out.speedup),
        }
    )
    return rows


def cmd_optimize(args) -> int:
    cfg = _config(args)
    ft = ingest_frequencies(args.input, args.kind)
    bs = parse_blocking_scheme(cfg.scheme)
    budget = resolve_budget(ft, cfg.budget, cfg.budget_factor)
    out = optimize(ft, bs, budget, cfg.algo, **_solver_kw(cfg))
    emit(_outcome_rows(out, budget), cfg.fmt)
    if args.codebook:
        meta = {"algo": cfg.algo, "budget": budget, "decode": str(out.optimized.decode_time)}
        write_codebook(args.codebook, out.code, str(bs), meta)
    return EXIT_OK


def cmd_encode(args) -> int:
    code, _ = read_codebook(args.codebook)
    data = Path(args.input).read_bytes()
    container = encode_stream(data, code)
    Path(args.output).write_bytes(container.to_bytes())
    print(f"{container.symbol_count} symbols, {container.payload_bits} payload bits -> {args.output}", file=sys.stderr)
    return EXIT_OK


def cmd_decode(args) -> int:
    code, scheme = read_codebook(args.codebook)
    bs = parse_blocking_scheme(args.scheme or scheme or DEFAULT_SCHEME)
    container = EncodedContainer.from_bytes(Path(args.input).read_bytes())
    symbols, meter = decode_stream(container, compile_tables(code, bs))
    Path(args.output).write_bytes(bytes(symbols))
    counts: dict = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    measured = measured_cost(meter, bs)
    model = model_cost(counts, code, bs)
    emit(
        [
            {
                "symbols": len(symbols),
                "measured_decode": measured,
                "model_decode": model,
                "agree": measured == model,
                "accesses": tuple(meter.accesses),
            }
        ],
        args.format,
    )
    return EXIT_OK if measured == model else EXIT_ERROR


def _split(text: str) -> list:
    return [as_fraction(t.strip()) for t in text.split(",") if t.strip()]


def cmd_simulate(args) -> int:
    ft = ingest_frequencies(args.input, args.kind)
    templates = args.scheme_template or ["(4,1),(4,x),..."]
    kw = dict(delta=as_fraction(args.delta), work_limit=args.work_limit)
    if args.height is not None:
        kw["height"] = args.height
    rows = simulate(ft, templates, _split(args.latency), _split(args.relax), args.algo, **kw)
    table = []
    for r in rows:
        line = {"x": r["x"]}
        for (tpl, t), out in ((k, v) for k, v in r.items() if k != "x"):
            line[f"{tpl} +{float(t) * 100:g}%"] = _ratio(out.speedup)
        table.append(line)
    emit(table, args.format)
    if args.figure:
        from .plotting import plot_speedups

        plot_speedups(rows, args.figure)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _config(args)
    data = Path(args.input).read_bytes()
    if not data:
        raise EmptyInput("input is empty")
    ft = ingest_frequencies(data)
    bs = parse_blocking_scheme(cfg.scheme)
    budget = resolve_budget(ft, cfg.budget, cfg.budget_factor)
    rows = bench(data, ft, bs, budget, cfg.algo, **_solver_kw(cfg))
    emit(
        [
            {
                "code": r.label,
                "payload_bits": r.code_length,
                "model_decode": r.model_decode,
                "measured_decode": r.measured_decode,
                "agree": r.model_decode == r.measured_decode,
                "roundtrip": r.roundtrip,
                "encode_s": r.encode_seconds if args.timings else None,
                "decode_s": r.decode_seconds if args.timings else None,
                "accesses": r.accesses,
            }
            for r in rows
        ],
        cfg.fmt,
    )
    if args.figure:
        from .plotting import plot_bench

        plot_bench(rows, args.figure)
    return EXIT_OK if all(r.roundtrip and r.model_decode == r.measured_decode for r in rows) else EXIT_ERROR


# ------------------------------------------------------------------ parser


def _int_or_auto(text: str):
    return text if text == "auto" else int(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dpfx", description="Decode-time-optimal prefix codes under a code-length budget.")
    p.add_argument("--version", action="version", version=f"dpfx {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, scheme=True):
        sp.add_argument("input", help="input file")
        if scheme:
            sp.add_argument("--scheme", default=DEFAULT_SCHEME, help="blocking scheme, e.g. '(4,1),(4,20),...'")
        sp.add_argument("--format", choices=FORMATS, default="table")
        sp.add_argument("--kind", choices=("bytes", "csv", "json"), help="input kind (default: by extension)")

    def solver(sp, figure=False):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--budget", type=int, help="absolute code-length budget")
        g.add_argument("--budget-factor", type=as_fraction, help="budget as a multiple of the Huffman length")
        sp.add_argument("--algo", choices=ALGORITHMS, default="exact")
        sp.add_argument("--epsilon", type=as_fraction, default=Fraction(1, 20))
        sp.add_argument("--delta", type=as_fraction, default=Fraction(1, 4))
        sp.add_argument("--height", type=_int_or_auto, help="height bound (integer or 'auto')")
        sp.add_argument("--work-limit", type=int, help="maximum DP cells")
        if figure:
            sp.add_argument("--figure", help="write a PNG/PDF figure to this path")

    sp = sub.add_parser("analyze", help="table statistics and Huffman baseline")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("optimize", help="solve for the decode-optimal code")
    common(sp)
    solver(sp)
    sp.add_argument("--codebook", help="write the canonical codebook here")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("encode", help="encode a file with a codebook")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--codebook", required=True)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode a container and meter table accesses")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--codebook", required=True)
    sp.add_argument("--scheme", help="defaults to the scheme stored in the codebook")
    sp.add_argument("--format", choices=FORMATS, default="table")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("simulate", help="model speedups over a latency sweep")
    common(sp, scheme=False)
    sp.add_argument("--scheme-template", action="append", help="scheme with 'x' for the latency factor (repeatable)")
    sp.add_argument("--latency", default="1,10,100", help="comma-separated latency factors")
    sp.add_argument("--relax", default="0.02", help="comma-separated total relaxations over Huffman")
    sp.add_argument("--algo", choices=ALGORITHMS, default="approx")
    sp.add_argument("--delta", default="1/4")
    sp.add_argument("--height", type=_int_or_auto)
    sp.add_argument("--work-limit", type=int)
    sp.add_argument("--figure", help="write a speedup plot to this path")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="real encode/decode with metered table accesses")
    sp.add_argument("input")
    sp.add_argument("--scheme", default=DEFAULT_SCHEME)
    sp.add_argument("--format", choices=FORMATS, default="table")
    sp.add_argument("--timings", action="store_true", help="include wall-clock columns (not deterministic)")
    solver(sp, figure=True)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, MalformedTable, EmptyInput) as exc:
        print(f"dpfx: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Infeasible, SchemeTooShort) as exc:
        print(f"dpfx: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except WorkLimitExceeded as exc:
        print(f"dpfx: {exc}; try --algo approx or a larger --work-limit", file=sys.stderr)
        return EXIT_WORK
    except (DpfxError, ValueError, OSError) as exc:
        print(f"dpfx: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
