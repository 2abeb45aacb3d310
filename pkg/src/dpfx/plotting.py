"""Figures for the simulate and bench reports (written to files, never shown)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_speedups(rows: list[dict], path) -> None:
    """Speedup against latency factor, one line per (scheme, relaxation) column."""
    xs = [float(r["x"]) for r in rows]
    columns = [k for k in rows[0] if k != "x"]
    fig, ax = plt.subplots(figsize=(6, 4))
    for col in columns:
        ys = [float(r[col].speedup) if r[col].speedup is not None else float("nan") for r in rows]
        tpl, relax = col
        ax.plot(xs, ys, marker="o", label=f"{tpl}  +{float(relax) * 100:g}%")
    if len(xs) > 1 and min(xs) > 0:
        ax.set_xscale("log")
    ax.axhline(1.0, color="grey", lw=0.8, ls="--")
    ax.set_xlabel("latency factor x")
    ax.set_ylabel("speedup over Huffman")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_bench(rows, path) -> None:
    """Table accesses per block level, one bar group per code."""
    levels = max(len(r.accesses) for r in rows)
    width = 0.8 / len(rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    for k, r in enumerate(rows):
        counts = list(r.accesses) + [0] * (levels - len(r.accesses))
        ax.bar([j + 1 + (k - (len(rows) - 1) / 2) * width for j in range(levels)], counts, width, label=r.label)
    ax.set_xticks(range(1, levels + 1))
    ax.set_xlabel("block level")
    ax.set_ylabel("table accesses")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    _save(fig, path)
