"""Rendering of report figures to image files (headless backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .quality import HISTOGRAM_BIN_WIDTH, DiversityReport


def save_max_rouge_histogram(report: DiversityReport, path) -> None:
    """Bar chart of the max-ROUGE distribution of generated samples vs seed."""
    edges = [i * HISTOGRAM_BIN_WIDTH for i in range(len(report.histogram))]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(
        edges,
        report.histogram,
        width=HISTOGRAM_BIN_WIDTH,
        align="edge",
        edgecolor="white",
        color="#4c72b0",
    )
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("max ROUGE-L F against the seed set")
    ax.set_ylabel("generated samples")
    ax.set_title(
        f"Seed overlap of generated samples "
        f"(mean {report.mean:.3f}, median {report.median:.3f})"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_domain_breakdown(report: DiversityReport, path) -> None:
    """Horizontal bar chart of sample counts per retrieved domain tag."""
    items = sorted(report.domain_tally.items(), key=lambda kv: (-kv[1], kv[0]))
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if items:
        labels = [name for name, _ in items]
        counts = [count for _, count in items]
        positions = range(len(items))
        ax.barh(positions, counts, color="#55a868")
        ax.set_yticks(positions)
        ax.set_yticklabels(labels)
        ax.invert_yaxis()
    else:
        ax.text(0.5, 0.5, "no domain tags", ha="center", va="center",
                transform=ax.transAxes)
    ax.set_xlabel("generated samples")
    ax.set_title("Samples per source domain")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
