"""Side-by-side variant simulation report.

For one query, writes a tab-separated table of the top results per engine
variant (five files) plus a figure charting how each variant orders its
scores, so the presentation differences are visible at a glance.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .engine import DEFAULT_LIMIT, SearchEngine
from .scoring import EngineVariant

FIGURE_NAME = "scores_by_rank.png"

_COLUMNS = ["rank", "nct_id", "title", "score", "explanations"]


def write_variant_report(
    engine: SearchEngine, query: str, out_dir: str | Path, limit: int = DEFAULT_LIMIT
) -> dict[str, Path]:
    """Run the query under every variant; emit one TSV each plus the figure.

    Returns the written paths keyed by variant value (and "figure")."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    series: dict[str, list[float]] = {}

    for variant in EngineVariant:
        outcome = engine.search(query, variant, limit)
        path = out / f"variant_{variant.value}.tsv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
            writer.writerow(_COLUMNS)
            for rank, st in enumerate(outcome.results, start=1):
                writer.writerow(
                    [
                        rank,
                        st.nct_id,
                        st.title,
                        f"{st.e_ct:.3f}",
                        " | ".join(s.text for s in st.explanations),
                    ]
                )
        written[variant.value] = path
        series[variant.value] = [st.e_ct for st in outcome.results]

    figure_path = out / FIGURE_NAME
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, scores in series.items():
        ax.plot(range(1, len(scores) + 1), scores, marker="o", label=name)
    ax.set_xlabel("rank position")
    ax.set_ylabel("explainability score")
    ax.set_title(f"Score by displayed rank for {query!r}")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(figure_path, dpi=120)
    plt.close(fig)
    written["figure"] = figure_path
    return written
