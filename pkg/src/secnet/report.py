"""Figures and delimited output for CLI reports."""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from typing import Iterable, Sequence


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def fmt(v) -> str:
    """Render a value so it round-trips: p/q for rationals, 12 significant digits for floats."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def to_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    rows = [[fmt(v) for v in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()  # noqa: E731
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows]) + "\n"


def plot_leakage(ds: Sequence[int], measured: dict[tuple[int, int], Sequence[float]],
                 closed: dict[tuple[int, int], Sequence[float]], path: str) -> None:
    """I(M; Y_i Y_j) against d for the systematic constructions.

    Args:
        ds: Alphabet sizes.
        measured: (i, j) -> exhaustive values, one per d.
        closed: (i, j) -> closed-form values, one per d.
        path: Output image file.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for (i, j), vals in sorted(measured.items()):
        ax.plot(ds, vals, "o", label=f"I(M;Y{i}Y{j})")
    for (i, j), vals in sorted(closed.items()):
        ax.plot(ds, vals, "-", lw=0.8, color="gray")
    ax.plot(ds, [0.5 * math.log2(d) for d in ds], "k--", lw=1, label="(1/2) log2 d")
    ax.set_xlabel("d")
    ax.set_ylabel("bits")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_failures(successes: Sequence[bool], bound: float, path: str) -> None:
    """Running decoding failure rate with the union bound for reference."""
    fails = 0
    rate = []
    for k, ok in enumerate(successes, start=1):
        fails += not ok
        rate.append(fails / k)
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(1, len(rate) + 1), rate, label="empirical failure rate")
    ax.axhline(bound, color="r", ls="--", label=f"bound {bound:.4g}")
    ax.set_xscale("log")
    ax.set_xlabel("trials")
    ax.set_ylabel("failure rate")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
