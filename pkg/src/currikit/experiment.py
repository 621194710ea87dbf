"""Experiment harness: strategy comparison with repeats and balanced test subsets.

One experiment = R independent training runs of a single ordering
strategy, each evaluated on K balanced test subsets (all positives plus a
fixed-size random draw of negatives), aggregated as mean and standard
deviation per metric.  ``compare`` runs several strategies against the
*same* dataset, model initializations and test subsets so that epoch
ordering is the only varying factor.

Seed derivation (all streams hang off the master seed, see `currikit.rng`):

* dataset generation:   ("dataset", "train" | "test") -> ("synth", label)
* training run r:       ("run", r, "perm", epoch) and ("run", r, "model-init")
* test subsample k:     ("subsample", k)

Run and subsample paths never mention the strategy, which is what makes
comparisons fair; subsample paths do not mention the run either, so the
same K test subsets are reused by every run and every strategy.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, UnfairComparisonError
from .metrics import EvalReport, evaluate, roc_points
from .rng import SeedSpec
from .sampler import plan_training
from .schedule import (
    DEFAULT_SCORES,
    ScheduleParams,
    ScheduleState,
    ScoreTable,
    from_external_probabilities,
    init_probabilities,
    make_schedule,
    reverse_scores,
    uniform_probabilities,
)
from .synth import (
    ClassProfile,
    SampleRecord,
    default_test_profile,
    default_train_profile,
    fine_labels,
    generate,
    labels_vector,
    read_manifest,
)
from .trainer import ModelParams, TrainLog, predict_scores, train

STRATEGIES = ("uniform", "curriculum", "anti", "external")
METRIC_NAMES = ("accuracy", "auc", "average_precision", "f1")

#: Display names for comparison tables.
METRIC_TITLES = {
    "accuracy": "Accuracy",
    "auc": "AUC",
    "average_precision": "Average Precision",
    "f1": "F1 score",
}

STD_CONVENTION = "sample standard deviation (ddof=1); 0 when a single evaluation"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment needs; value object, safe to compare.

    ``transition_epoch=None`` resolves to ``total_epochs // 2`` (at least 1).
    Dataset source: explicit manifests if given, otherwise synthetic data
    from the profiles (defaults mirror the standard imbalanced profile).
    """

    strategy: str = "curriculum"
    scores: ScoreTable = DEFAULT_SCORES
    total_epochs: int = 60
    transition_epoch: int | None = None
    model: ModelParams = field(default_factory=ModelParams)
    train_manifest: str | None = None
    test_manifest: str | None = None
    train_profile: ClassProfile | None = None
    test_profile: ClassProfile | None = None
    train_repeats: int = 5
    test_repeats: int = 5
    test_negatives: int = 100
    full_test: bool = False
    master_seed: int = 0
    external_probs: Mapping[str, float] | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.total_epochs < 1:
            raise ConfigError("total_epochs must be >= 1")
        if self.transition_epoch is None:
            object.__setattr__(self, "transition_epoch", max(1, self.total_epochs // 2))
        if not 1 <= self.transition_epoch <= self.total_epochs:
            raise ConfigError("transition_epoch must satisfy 1 <= L <= total_epochs")
        if self.train_repeats < 1 or self.test_repeats < 1:
            raise ConfigError("train_repeats and test_repeats must be >= 1")
        if self.test_negatives < 1:
            raise ConfigError("test_negatives must be >= 1")
        if self.strategy == "external" and not self.external_probs:
            raise ConfigError("external strategy needs an external probability assignment")
        if self.external_probs is not None:
            object.__setattr__(self, "external_probs", dict(self.external_probs))

    @property
    def schedule_params(self) -> ScheduleParams:
        return ScheduleParams(self.total_epochs, self.transition_epoch)


@dataclass(frozen=True)
class RunEvaluation:
    """Metrics of one (training run, test subsample) cell.

    ``subsample`` is None when the full test set was evaluated.
    """

    run: int
    subsample: int | None
    accuracy: float
    auc: float
    average_precision: float
    f1: float

    @classmethod
    def from_report(cls, run: int, subsample: int | None, report: EvalReport):
        return cls(
            run=run,
            subsample=subsample,
            accuracy=report.accuracy,
            auc=report.auc,
            average_precision=report.average_precision,
            f1=report.f1,
        )


@dataclass(eq=False)
class AggregateReport:
    """Mean/std of each metric plus the raw per-cell evaluations."""

    strategy: str
    config: ExperimentConfig
    metric_means: dict[str, float]
    metric_stds: dict[str, float]
    evaluations: list[RunEvaluation]
    roc: np.ndarray
    train_logs: list[TrainLog]
    std_convention: str = STD_CONVENTION


@dataclass(eq=False)
class ComparisonResult:
    """Aggregate reports for several strategies over one shared dataset."""

    reports: list[AggregateReport]


def load_dataset(
    config: ExperimentConfig, seed: SeedSpec
) -> tuple[list[SampleRecord], list[SampleRecord]]:
    """Resolve the configured dataset source into (train, test) records."""
    if config.train_manifest is not None:
        train = read_manifest(config.train_manifest, known_labels=config.scores.labels())
    else:
        profile = config.train_profile or default_train_profile(scores=config.scores)
        train = generate(profile, seed.child("dataset", "train"))
    if config.test_manifest is not None:
        test = read_manifest(config.test_manifest, known_labels=config.scores.labels())
    elif config.train_manifest is not None:
        raise ConfigError("a train manifest requires a test manifest")
    else:
        profile = config.test_profile or default_test_profile(scores=config.scores)
        test = generate(profile, seed.child("dataset", "test"))
    return train, test


def strategy_probabilities(
    config: ExperimentConfig, train_records: Sequence[SampleRecord]
) -> np.ndarray:
    """Initial probability vector for the configured strategy."""
    labels = fine_labels(train_records)
    if config.strategy == "curriculum":
        return init_probabilities(labels, config.scores)
    if config.strategy == "anti":
        return init_probabilities(labels, reverse_scores(config.scores))
    if config.strategy == "uniform":
        return uniform_probabilities(len(train_records))
    return _external_vector(config.external_probs, train_records)


def _external_vector(
    mapping: Mapping[str, float], records: Sequence[SampleRecord]
) -> np.ndarray:
    ids = {r.id for r in records}
    missing = sorted(ids - set(mapping))
    extra = sorted(set(mapping) - ids)
    if missing or extra:
        raise ConfigError(
            "external probabilities must cover the dataset exactly "
            f"({len(missing)} ids missing, {len(extra)} unknown)"
        )
    return np.array([mapping[r.id] for r in records], dtype=np.float64)


def build_schedule(
    config: ExperimentConfig, train_records: Sequence[SampleRecord]
) -> ScheduleState:
    params = config.schedule_params
    if config.strategy == "curriculum":
        return make_schedule(fine_labels(train_records), config.scores, params)
    if config.strategy == "anti":
        return make_schedule(
            fine_labels(train_records), reverse_scores(config.scores), params
        )
    return from_external_probabilities(strategy_probabilities(config, train_records), params)


def subsample_indices(
    y_test: np.ndarray, n_negatives: int, rng: np.random.Generator
) -> np.ndarray:
    """All positive indices plus ``n_negatives`` distinct negatives."""
    pos = np.flatnonzero(y_test == 1)
    neg = np.flatnonzero(y_test == 0)
    if n_negatives > neg.shape[0]:
        raise ConfigError(
            f"subsample wants {n_negatives} negatives, test set has {neg.shape[0]}"
        )
    chosen = rng.choice(neg, size=n_negatives, replace=False)
    return np.concatenate([pos, chosen])


def _aggregate(evaluations: Sequence[RunEvaluation]) -> tuple[dict, dict]:
    means, stds = {}, {}
    for name in METRIC_NAMES:
        values = np.array([getattr(ev, name) for ev in evaluations])
        means[name] = float(values.mean())
        stds[name] = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return means, stds


def run(
    config: ExperimentConfig,
    dataset: tuple[list[SampleRecord], list[SampleRecord]] | None = None,
) -> AggregateReport:
    """Execute one full experiment for a single strategy.

    ``dataset`` lets `compare` reuse identical records across strategies;
    when omitted it is resolved from the config.  The returned report
    contains every raw evaluation (R x K cells, or R cells with
    ``full_test``), the aggregate mean/std per metric, and the ROC
    polyline of the first run's model on the full test set.
    """
    seed = SeedSpec(config.master_seed)
    if dataset is None:
        dataset = load_dataset(config, seed)
    train_records, test_records = dataset
    y_test = labels_vector(test_records)
    state0 = build_schedule(config, train_records)
    params = config.schedule_params

    evaluations: list[RunEvaluation] = []
    train_logs: list[TrainLog] = []
    roc = None
    for r in range(config.train_repeats):
        run_seed = seed.child("run", r)
        plans = plan_training(state0, params, run_seed)
        model, tlog = train(train_records, plans, config.model, run_seed)
        train_logs.append(tlog)
        scores = predict_scores(model, test_records)
        if r == 0:
            roc = roc_points(scores, y_test)
        if config.full_test:
            evaluations.append(
                RunEvaluation.from_report(r, None, evaluate(scores, y_test))
            )
        else:
            for k in range(config.test_repeats):
                idx = subsample_indices(
                    y_test, config.test_negatives, seed.stream("subsample", k)
                )
                evaluations.append(
                    RunEvaluation.from_report(r, k, evaluate(scores[idx], y_test[idx]))
                )
    means, stds = _aggregate(evaluations)
    return AggregateReport(
        strategy=config.strategy,
        config=config,
        metric_means=means,
        metric_stds=stds,
        evaluations=evaluations,
        roc=roc,
        train_logs=train_logs,
    )


def _comparison_key(config: ExperimentConfig) -> ExperimentConfig:
    # Everything that must match across compared configs: all fields except
    # the strategy itself and its external probability payload.
    return dataclasses.replace(config, strategy="uniform", external_probs=None)


def compare(configs: Sequence[ExperimentConfig]) -> ComparisonResult:
    """Run several strategies over one shared dataset and seed.

    All configs must be identical apart from ``strategy`` (and, for the
    external strategy, its probability assignment); anything else raises
    :class:`UnfairComparisonError`.  The dataset is materialized once and
    shared, and because run/subsample seed paths never include the
    strategy, per-run weight initializations and test subsets are
    identical across strategies.
    """
    if len(configs) == 0:
        raise ConfigError("nothing to compare")
    reference = _comparison_key(configs[0])
    for cfg in configs[1:]:
        if _comparison_key(cfg) != reference:
            raise UnfairComparisonError(
                "compared configs must differ only in strategy; "
                "dataset, seeds, schedule and model settings must match"
            )
    dataset = load_dataset(configs[0], SeedSpec(configs[0].master_seed))
    return ComparisonResult(reports=[run(cfg, dataset) for cfg in configs])


# ---------------------------------------------------------------------------
# Flat text formats owned by the harness


def load_score_table(path: str | Path) -> ScoreTable:
    """Parse a score table file: one ``label = score`` pair per line.

    Blank lines and ``#`` comments are ignored.  Scores must be integers
    in [1, 100]; malformed lines raise :class:`ConfigError` with the line
    number.
    """
    entries: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'label = score', got {raw.strip()!r}")
            label, _, value = line.partition("=")
            label = label.strip()
            try:
                score = int(value.strip())
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: score must be an integer") from None
            if not label:
                raise ConfigError(f"{path}:{lineno}: empty label")
            if label in entries:
                raise ConfigError(f"{path}:{lineno}: duplicate label {label!r}")
            entries[label] = score
    try:
        return ScoreTable(entries)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def write_score_table(scores: ScoreTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for label, score in scores.entries.items():
            fh.write(f"{label} = {score}\n")


def load_external_probabilities(path: str | Path) -> dict[str, float]:
    """Parse an external probability file: CSV with header ``id,prob``."""
    mapping: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "id,prob":
            raise ConfigError(f"{path}: expected header 'id,prob', got {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 'id,prob'")
            rec_id, value = parts
            if rec_id in mapping:
                raise ConfigError(f"{path}:{lineno}: duplicate id {rec_id!r}")
            try:
                prob = float(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: probability must be a number") from None
            if not np.isfinite(prob) or prob <= 0.0:
                raise ConfigError(f"{path}:{lineno}: probability must be finite and > 0")
            mapping[rec_id] = prob
    if not mapping:
        raise ConfigError(f"{path}: no probabilities found")
    return mapping


def write_external_probabilities(mapping: Mapping[str, float], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,prob\n")
        for rec_id, prob in mapping.items():
            fh.write(f"{rec_id},{float(prob)!r}\n")
