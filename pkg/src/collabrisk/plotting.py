"""Bar-chart figures for results.

Figures are built on a bare :class:`matplotlib.figure.Figure` (no pyplot
state) and written with a fixed SVG hash salt and no date metadata, so the
same results always produce the same bytes.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib
from matplotlib.figure import Figure

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "svg.hashsalt": "collabrisk",
    "svg.fonttype": "none",
}
LOWER_COLOR = "#4c72b0"
UPPER_COLOR = "#dd8452"
PRETTY = {
    "safe": "Safe",
    "near_miss": "Near miss",
    "mishap": "Mishap",
    "incident": "Incident",
    "accident": "Accident",
}


def _size(scale: float = 1.0):
    width = 6.0 * scale
    return (width, width * 0.6)


def figure_to_bytes(fig: Figure, fmt: str = "svg") -> bytes:
    buf = io.BytesIO()
    with matplotlib.rc_context(STYLE):
        metadata = {"Date": None} if fmt == "svg" else None
        fig.savefig(buf, format=fmt, metadata=metadata, bbox_inches="tight")
    return buf.getvalue()


def grouped_bars(
    labels: Sequence[str],
    lower: Sequence[float],
    upper: Sequence[float],
    title: str = "",
    log_scale: bool = False,
    series=("Best (all lower)", "Worst (all upper)"),
    ylabel: str = "Probability",
) -> Figure:
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=_size())
        ax = fig.add_subplot(1, 1, 1)
        x = range(len(labels))
        w = 0.38
        ax.bar([i - w / 2 for i in x], lower, w, label=series[0], color=LOWER_COLOR)
        ax.bar([i + w / 2 for i in x], upper, w, label=series[1], color=UPPER_COLOR)
        ax.set_xticks(list(x))
        ax.set_xticklabels([PRETTY.get(s, s) for s in labels])
        if log_scale:
            ax.set_yscale("log")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        for side in ("top", "right"):
            ax.spines[side].set_visible(False)
    return fig


def results_bar_svg(results, log_scale: bool = False) -> str:
    """One panel per query, one bar pair (lower/upper) per state."""
    queries = [q for q in results.results if q.rows]
    with matplotlib.rc_context(STYLE):
        w, h = _size()
        fig = Figure(figsize=(w, h * len(queries)))
        for k, q in enumerate(queries, start=1):
            ax = fig.add_subplot(len(queries), 1, k)
            states = [r.state for r in q.rows]
            x = range(len(states))
            bw = 0.38
            ax.bar([i - bw / 2 for i in x], [r.lower for r in q.rows], bw, label="lower", color=LOWER_COLOR)
            ax.bar([i + bw / 2 for i in x], [r.upper for r in q.rows], bw, label="upper", color=UPPER_COLOR)
            ax.set_xticks(list(x))
            ax.set_xticklabels([PRETTY.get(s, s) for s in states])
            if log_scale:
                ax.set_yscale("log")
            ax.set_title(f"{q.query} ({q.method})")
            ax.set_ylabel("Probability")
            ax.legend(frameon=False)
    return figure_to_bytes(fig, "svg").decode("utf-8")


def unsafe_comparison(bounds) -> Figure:
    """Unsafe consequence states at the best and worst corners."""
    states = ["near_miss", "mishap", "incident", "accident"]
    return grouped_bars(
        states,
        [bounds[s].best for s in states],
        [bounds[s].worst for s in states],
        title="Unsafe conditions",
        log_scale=True,
    )


def accident_comparison(values: dict) -> Figure:
    """Accident probability of several methods, e.g. fault tree / LOPA / BN corners."""
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=_size())
        ax = fig.add_subplot(1, 1, 1)
        names = list(values)
        ax.bar(range(len(names)), [values[n] for n in names], 0.6, color=LOWER_COLOR)
        ax.set_xticks(list(range(len(names))))
        ax.set_xticklabels(names)
        ax.set_yscale("log")
        ax.set_ylabel("Accident probability")
        ax.set_title("Accident probability comparison")
        for side in ("top", "right"):
            ax.spines[side].set_visible(False)
    return fig
