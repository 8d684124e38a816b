"""Report figures rendered next to the delimited outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .cleaning import REASON_COLLAPSED, REMOVAL_REASONS, CleaningReport
from .model import DatasetRecord


def plot_batch_size_histogram(record: DatasetRecord, path: str | Path) -> None:
    """Bar chart of the batch-size distribution over the dynamic range
    [split_num // 2, split_num + split_num // 2]."""
    half = record.split_num // 2
    sizes = list(range(half, record.split_num + half + 1))
    extra = sorted(set(record.split_size_histogram) - set(sizes))
    sizes = extra + sizes if extra else sizes
    counts = [record.split_size_histogram.get(s, 0) for s in sizes]

    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(range(len(sizes)), counts, color="#4878a8")
    ax.set_xticks(range(len(sizes)))
    ax.set_xticklabels([str(s) for s in sizes])
    ax.set_xlabel("schemas per instruction")
    ax.set_ylabel("instructions")
    ax.set_title(f"{record.dataset_name}: split count distribution (split_num={record.split_num})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_cleaning_report(report: CleaningReport, dataset_name: str, path: str | Path) -> None:
    """Bar chart of removal counts per cleaning reason."""
    reasons = [*REMOVAL_REASONS, REASON_COLLAPSED]
    counts = [report.counts.get(r, 0) for r in reasons]

    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.bar(range(len(reasons)), counts, color="#a85454")
    ax.set_xticks(range(len(reasons)))
    ax.set_xticklabels([r.replace("_", "\n") for r in reasons], fontsize=7)
    ax.set_ylabel("samples")
    ax.set_title(f"{dataset_name}: cleaning removals")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_score_summary(report: dict, path: str | Path) -> None:
    """Grouped bars of per-dataset F1 by facet, with the Avg block appended."""
    labels: list[str] = []
    values: list[float] = []
    for name, entry in report["datasets"].items():
        for facet, score in entry["facets"].items():
            labels.append(f"{name}\n{facet}")
            values.append(score.f1 if hasattr(score, "f1") else score["f1"])
    for key, value in sorted(report.get("avg", {}).items()):
        labels.append(f"Avg\n{key}")
        values.append(value)

    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(labels)), 3.4))
    ax.bar(range(len(labels)), values, color="#588868")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("micro-F1")
    ax.set_title(report.get("benchmark", "scores"))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
