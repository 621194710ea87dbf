"""Report emission: delimited text artifacts plus rendered figures.

Every writer produces deterministic bytes (fixed field order, fixed float
formatting, LF endings) so that reruns of a seeded experiment can be
compared with a plain file hash.  Figures are rendered with the Agg
backend next to the delimited files they illustrate; the delimited files
remain the canonical record.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .errors import ConfigError
from .experiment import (
    METRIC_NAMES,
    METRIC_TITLES,
    AggregateReport,
    ComparisonResult,
)
from .metrics import EvalReport
from .sampler import EpochPlan
from .synth import SampleRecord, write_manifest


def write_aggregate_text(report: AggregateReport, path: str | Path) -> None:
    """Aggregate report as ``key = value`` lines."""
    cfg = report.config
    lines = [
        f"strategy = {report.strategy}",
        f"evaluations = {len(report.evaluations)}",
        f"train_repeats = {cfg.train_repeats}",
        f"test_repeats = {cfg.test_repeats}",
        f"test_negatives = {cfg.test_negatives}",
        f"full_test = {cfg.full_test}",
        f"total_epochs = {cfg.total_epochs}",
        f"transition_epoch = {cfg.transition_epoch}",
        f"architecture = {cfg.model.architecture}",
        f"master_seed = {cfg.master_seed}",
        f"std_convention = {report.std_convention}",
    ]
    for name in METRIC_NAMES:
        lines.append(f"{name}_mean = {report.metric_means[name]:.6f}")
        lines.append(f"{name}_std = {report.metric_stds[name]:.6f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_eval_text(report: EvalReport, path: str | Path) -> None:
    """Single-evaluation metrics as ``key = value`` lines."""
    lines = [
        f"n_pos = {report.n_pos}",
        f"n_neg = {report.n_neg}",
        f"accuracy = {report.accuracy:.6f}",
        f"auc = {report.auc:.6f}",
        f"average_precision = {report.average_precision:.6f}",
        f"f1 = {report.f1:.6f}",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_manifest_pair(
    train: Sequence[SampleRecord], test: Sequence[SampleRecord], out_dir: str | Path
) -> tuple[Path, Path]:
    """Write train.csv and test.csv manifests under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    train_path = out / "train.csv"
    test_path = out / "test.csv"
    write_manifest(train, train_path)
    write_manifest(test, test_path)
    return train_path, test_path


def write_runs_csv(reports: Sequence[AggregateReport], path: str | Path) -> None:
    """Raw per-(run, subsample) metric rows, full precision, for audits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("strategy,run,subsample,accuracy,auc,average_precision,f1\n")
        for report in reports:
            for ev in report.evaluations:
                sub = "full" if ev.subsample is None else str(ev.subsample)
                fh.write(
                    f"{report.strategy},{ev.run},{sub},"
                    f"{ev.accuracy!r},{ev.auc!r},{ev.average_precision!r},{ev.f1!r}\n"
                )


def write_comparison_csv(result: ComparisonResult, path: str | Path) -> None:
    """Machine-readable comparison: one row per strategy, full precision."""
    cols = [f"{name}_{stat}" for name in METRIC_NAMES for stat in ("mean", "std")]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("strategy," + ",".join(cols) + "\n")
        for report in result.reports:
            values = []
            for name in METRIC_NAMES:
                values.append(repr(report.metric_means[name]))
                values.append(repr(report.metric_stds[name]))
            fh.write(report.strategy + "," + ",".join(values) + "\n")


def write_comparison_table(result: ComparisonResult, path: str | Path) -> None:
    """Human-readable comparison table with mean +/- std cells."""
    titles = [METRIC_TITLES[name] for name in METRIC_NAMES]
    width = max(len(r.strategy) for r in result.reports)
    width = max(width, len("strategy"))
    header = " | ".join(["strategy".ljust(width)] + [t.center(19) for t in titles])
    rule = "-" * len(header)
    lines = [header, rule]
    for report in result.reports:
        cells = [
            f"{report.metric_means[n]:.3f} +/- {report.metric_stds[n]:.3f}".center(19)
            for n in METRIC_NAMES
        ]
        lines.append(" | ".join([report.strategy.ljust(width)] + cells))
    lines.append(rule)
    lines.append(f"std: {result.reports[0].std_convention}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_roc_csv(points: np.ndarray, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fpr,tpr\n")
        for fpr, tpr in points:
            fh.write(f"{float(fpr)!r},{float(tpr)!r}\n")


def write_plans_csv(
    plans: Sequence[EpochPlan], ids: Sequence[str], path: str | Path
) -> None:
    """Plan export: one record per (epoch, position, sample_id)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,position,sample_id\n")
        for plan in plans:
            for position, idx in enumerate(plan.order):
                fh.write(f"{plan.epoch},{position},{ids[idx]}\n")


def write_probabilities_csv(
    prob_by_epoch: Sequence[np.ndarray], ids: Sequence[str], path: str | Path
) -> None:
    """Raw per-sample schedule values, one row per (epoch, sample)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,sample_id,prob\n")
        for epoch, probs in enumerate(prob_by_epoch, start=1):
            for idx, p in enumerate(probs):
                fh.write(f"{epoch},{ids[idx]},{float(p)!r}\n")


def write_trainlog_csv(
    epoch_losses: Sequence[float], fingerprints: Sequence[str], path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,loss,order_fingerprint\n")
        for epoch, (loss, fp) in enumerate(zip(epoch_losses, fingerprints), start=1):
            fh.write(f"{epoch},{loss!r},{fp}\n")


def write_predictions_csv(
    ids: Sequence[str], labels, scores, path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,label,score\n")
        for rec_id, label, score in zip(ids, labels, scores):
            fh.write(f"{rec_id},{int(label)},{float(score)!r}\n")


def load_predictions(path: str | Path) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Parse ``id,label,score`` rows back into aligned arrays."""
    ids: list[str] = []
    labels: list[int] = []
    scores: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "id,label,score":
            raise ConfigError(f"{path}: expected header 'id,label,score', got {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ConfigError(f"{path}:{lineno}: expected 'id,label,score'")
            if parts[1] not in ("0", "1"):
                raise ConfigError(f"{path}:{lineno}: label must be 0 or 1")
            try:
                score = float(parts[2])
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: score must be a number") from None
            ids.append(parts[0])
            labels.append(int(parts[1]))
            scores.append(score)
    if not ids:
        raise ConfigError(f"{path}: no predictions found")
    return ids, np.array(labels, dtype=np.int64), np.array(scores, dtype=np.float64)


# ---------------------------------------------------------------------------
# Figures


def render_roc_figure(
    curves: Mapping[str, tuple[np.ndarray, float]], path: str | Path, title: str = "ROC"
) -> None:
    """Overlay ROC polylines; ``curves`` maps name -> (points, auc)."""
    fig, ax = plt.subplots(figsize=(5.5, 5))
    for name, (points, auc) in curves.items():
        ax.plot(points[:, 0], points[:, 1], label=f"{name} (AUC={auc:.3f})", linewidth=1.6)
    ax.plot([0, 1], [0, 1], linestyle="--", color="grey", linewidth=0.8)
    ax.set_xlabel("False positive rate")
    ax.set_ylabel("True positive rate")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    ax.grid(alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_schedule_figure(
    prob_by_epoch: Sequence[np.ndarray],
    fine_labels: Sequence[str],
    path: str | Path,
) -> None:
    """Per-class mean sampling probability across epochs, log scale."""
    labels = list(dict.fromkeys(fine_labels))
    arr = np.asarray(fine_labels)
    epochs = np.arange(1, len(prob_by_epoch) + 1)
    fig, ax = plt.subplots(figsize=(6.5, 4))
    for label in labels:
        mask = arr == label
        trajectory = [float(p[mask].mean()) for p in prob_by_epoch]
        ax.plot(epochs, trajectory, label=label, linewidth=1.4)
    n = len(fine_labels)
    ax.axhline(1.0 / n, color="grey", linestyle="--", linewidth=0.8, label="uniform 1/N")
    ax.set_xlabel("Epoch")
    ax.set_ylabel("Sampling probability")
    ax.set_yscale("log")
    ax.set_title("Per-class schedule")
    ax.legend(fontsize=8, ncol=2)
    ax.grid(alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


# ---------------------------------------------------------------------------
# Artifact bundles used by the CLI


def write_run_artifacts(report: AggregateReport, out_dir: str | Path) -> list[Path]:
    """aggregate.txt, runs.csv, roc_<strategy>.csv and roc.png under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    agg = out / "aggregate.txt"
    write_aggregate_text(report, agg)
    paths.append(agg)
    runs = out / "runs.csv"
    write_runs_csv([report], runs)
    paths.append(runs)
    roc_csv = out / f"roc_{report.strategy}.csv"
    write_roc_csv(report.roc, roc_csv)
    paths.append(roc_csv)
    fig = out / "roc.png"
    render_roc_figure(
        {report.strategy: (report.roc, report.metric_means["auc"])},
        fig,
        title="ROC (run 0, full test set)",
    )
    paths.append(fig)
    return paths


def write_comparison_artifacts(result: ComparisonResult, out_dir: str | Path) -> list[Path]:
    """Comparison table (csv + txt), per-strategy artifacts, ROC overlay figure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    csv_path = out / "comparison.csv"
    write_comparison_csv(result, csv_path)
    paths.append(csv_path)
    table_path = out / "comparison.txt"
    write_comparison_table(result, table_path)
    paths.append(table_path)
    runs = out / "runs.csv"
    write_runs_csv(result.reports, runs)
    paths.append(runs)
    curves = {}
    for report in result.reports:
        agg = out / f"aggregate_{report.strategy}.txt"
        write_aggregate_text(report, agg)
        paths.append(agg)
        roc_csv = out / f"roc_{report.strategy}.csv"
        write_roc_csv(report.roc, roc_csv)
        paths.append(roc_csv)
        curves[report.strategy] = (report.roc, report.metric_means["auc"])
    fig = out / "roc_curves.png"
    render_roc_figure(curves, fig, title="ROC by strategy (run 0, full test set)")
    paths.append(fig)
    return paths
