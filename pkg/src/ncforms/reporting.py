"""Deterministic report rendering: tab-separated tables, structured JSON,
and optional matplotlib figures saved next to the delimited output."""

from __future__ import annotations

import json
import os


def render_table(header, rows) -> str:
    """One-line header, then tab-separated rows; trailing newline."""
    lines = ["\t".join(str(h) for h in header)]
    for row in rows:
        lines.append("\t".join(str(cell) for cell in row))
    return "\n".join(lines) + "\n"


def render_structured(payload: dict) -> str:
    """The same data as JSON with sorted keys; byte-stable across runs."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit(mode: str, header, rows, payload: dict, footer=None, out=None) -> str:
    """Render one report in the requested mode and write it to `out`."""
    if mode == "structured":
        text = render_structured(payload)
    else:
        text = render_table(header, rows)
        if footer:
            text += footer + "\n"
    if out is not None:
        out.write(text)
    return text


def save_bar_figure(directory: str, stem: str, title: str, labels, values) -> str:
    """Render a labelled bar chart of exact integer data to `directory`."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{stem}.png")
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = range(len(labels))
    ax.bar(list(xs), [int(v) for v in values], color="#4878a8")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([str(l) for l in labels])
    ax.set_title(title)
    ax.set_ylabel("dimension")
    ax.yaxis.get_major_locator().set_params(integer=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
