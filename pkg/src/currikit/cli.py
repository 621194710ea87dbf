"""Command-line interface.

Subcommands:

* ``synth``    generate the synthetic dataset and write train/test manifests
* ``plan``     emit per-epoch probabilities and permutations for inspection
* ``train``    one training run: trainlog, predictions, metrics, ROC
* ``run``      full experiment for one strategy (repeats + test subsets)
* ``compare``  several strategies over one shared dataset and seed
* ``metrics``  evaluate a predictions file

Every subcommand exits 0 on success; failures print one JSON record
``{"error": <class>, "message": <text>}`` to stderr and exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, CurrikitError
from .experiment import (
    STRATEGIES,
    ExperimentConfig,
    build_schedule,
    compare,
    load_dataset,
    load_external_probabilities,
    load_score_table,
    run,
)
from .metrics import evaluate
from .report import (
    load_predictions,
    render_roc_figure,
    render_schedule_figure,
    write_comparison_artifacts,
    write_eval_text,
    write_manifest_pair,
    write_plans_csv,
    write_predictions_csv,
    write_probabilities_csv,
    write_roc_csv,
    write_run_artifacts,
    write_trainlog_csv,
)
from .rng import SeedSpec
from .sampler import plan_training
from .schedule import DEFAULT_SCORES, ScoreTable, probability_trajectory
from .synth import fine_labels, generate, labels_vector
from .trainer import ModelParams, predict_scores, train


def _add_data_options(p: argparse.ArgumentParser, test_manifest: bool = True):
    g = p.add_argument_group("dataset")
    g.add_argument("--manifest", type=Path, help="training manifest CSV (default: synthetic)")
    if test_manifest:
        g.add_argument("--test-manifest", type=Path, help="test manifest CSV")
    g.add_argument("--dim", type=int, default=16, help="synthetic feature dimension")
    g.add_argument("--noise", type=float, default=1.0, help="synthetic noise sigma")
    g.add_argument("--max-margin", type=float, default=2.0,
                   help="margin of a hypothetical score-100 class")
    g.add_argument("--normal-margin", type=float, default=1.0,
                   help="offset of the normal class mean")


def _add_schedule_options(p: argparse.ArgumentParser, with_strategy: bool = True):
    g = p.add_argument_group("schedule")
    if with_strategy:
        g.add_argument("--strategy", choices=STRATEGIES, default="curriculum")
    g.add_argument("--scores", type=Path, help="score table file (label = score lines)")
    g.add_argument("--epochs", type=int, default=60, help="total epochs E")
    g.add_argument("--transition-epoch", type=int, default=None,
                   help="epoch L after which sampling is uniform (default E//2)")
    g.add_argument("--external-probs", type=Path,
                   help="id,prob CSV for the external strategy")


def _add_model_options(p: argparse.ArgumentParser):
    g = p.add_argument_group("model")
    g.add_argument("--arch", choices=("linear", "mlp"), default="mlp")
    g.add_argument("--hidden-width", type=int, default=32)
    g.add_argument("--learning-rate", type=float, default=0.05)
    g.add_argument("--batch-size", type=int, default=32)
    g.add_argument("--momentum", type=float, default=0.0)


def _add_repeat_options(p: argparse.ArgumentParser):
    g = p.add_argument_group("evaluation")
    g.add_argument("--repeats", type=int, default=5, help="independent training runs R")
    g.add_argument("--test-repeats", type=int, default=5, help="balanced test subsets K")
    g.add_argument("--test-negatives", type=int, default=100,
                   help="negatives per balanced test subset")
    g.add_argument("--full-test", action="store_true",
                   help="evaluate on the entire test set instead of subsets")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="currikit",
        description="Score-guided curriculum scheduling and its experiment harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic train/test manifests")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    g = p.add_argument_group("dataset")
    g.add_argument("--scores", type=Path, help="score table file (sets margins)")
    g.add_argument("--dim", type=int, default=16)
    g.add_argument("--noise", type=float, default=1.0)
    g.add_argument("--max-margin", type=float, default=2.0)
    g.add_argument("--normal-margin", type=float, default=1.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("plan", help="emit per-epoch probabilities and permutations")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_schedule_options(p)
    _add_data_options(p, test_manifest=False)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("train", help="single training run")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_schedule_options(p)
    _add_data_options(p)
    _add_model_options(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("run", help="full experiment for one strategy")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_schedule_options(p)
    _add_data_options(p)
    _add_model_options(p)
    _add_repeat_options(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="compare strategies on one dataset")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategies", default="uniform,curriculum,anti",
                   help="comma-separated strategies to compare")
    _add_schedule_options(p, with_strategy=False)
    _add_data_options(p)
    _add_model_options(p)
    _add_repeat_options(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("metrics", help="evaluate a predictions file")
    p.add_argument("--predictions", type=Path, required=True,
                   help="id,label,score CSV")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_metrics)

    return parser


def _scores_from(args) -> ScoreTable:
    if getattr(args, "scores", None) is not None:
        return load_score_table(args.scores)
    return DEFAULT_SCORES


def _profiles_from(args, scores):
    from .synth import default_test_profile, default_train_profile

    kwargs = dict(
        scores=scores,
        dim=args.dim,
        noise=args.noise,
        max_margin=args.max_margin,
        normal_margin=args.normal_margin,
    )
    return default_train_profile(**kwargs), default_test_profile(**kwargs)


def _config_from_args(args, strategy: str | None = None) -> ExperimentConfig:
    scores = _scores_from(args)
    strategy = strategy or args.strategy
    external = None
    if strategy == "external":
        if args.external_probs is None:
            raise ConfigError("--external-probs is required for the external strategy")
        external = load_external_probabilities(args.external_probs)
    train_profile = test_profile = None
    if args.manifest is None:
        train_profile, test_profile = _profiles_from(args, scores)
    model = ModelParams(
        architecture=args.arch,
        hidden_width=args.hidden_width,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        momentum=args.momentum,
    )
    repeats = getattr(args, "repeats", 1)
    test_repeats = getattr(args, "test_repeats", 1)
    return ExperimentConfig(
        strategy=strategy,
        scores=scores,
        total_epochs=args.epochs,
        transition_epoch=args.transition_epoch,
        model=model,
        train_manifest=None if args.manifest is None else str(args.manifest),
        test_manifest=(
            None if getattr(args, "test_manifest", None) is None else str(args.test_manifest)
        ),
        train_profile=train_profile,
        test_profile=test_profile,
        train_repeats=repeats,
        test_repeats=test_repeats,
        test_negatives=getattr(args, "test_negatives", 100),
        full_test=getattr(args, "full_test", False),
        master_seed=args.seed,
        external_probs=external,
    )


def cmd_synth(args) -> int:
    scores = _scores_from(args)
    train_profile, test_profile = _profiles_from(args, scores)
    seed = SeedSpec(args.seed)
    train = generate(train_profile, seed.child("dataset", "train"))
    test = generate(test_profile, seed.child("dataset", "test"))
    train_path, test_path = write_manifest_pair(train, test, args.out)
    n_pos = int(labels_vector(train).sum())
    print(f"wrote {train_path} ({len(train)} records, {n_pos} positive) and "
          f"{test_path} ({len(test)} records)")
    return 0


def cmd_plan(args) -> int:
    args.test_manifest = None
    config = _config_from_args(args)
    seed = SeedSpec(config.master_seed)
    train_records, _ = load_dataset(config, seed)
    ids = [r.id for r in train_records]
    state = build_schedule(config, train_records)
    params = config.schedule_params
    trajectory = probability_trajectory(state, params)
    # Streams match what run's first repeat would consume.
    plans = plan_training(state, params, seed.child("run", 0))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_probabilities_csv(trajectory, ids, out / "probs.csv")
    write_plans_csv(plans, ids, out / "plans.csv")
    render_schedule_figure(trajectory, fine_labels(train_records), out / "schedule.png")
    print(f"wrote {out / 'probs.csv'}, {out / 'plans.csv'}, {out / 'schedule.png'}")
    return 0


def cmd_train(args) -> int:
    config = _config_from_args(args)
    seed = SeedSpec(config.master_seed)
    train_records, test_records = load_dataset(config, seed)
    state = build_schedule(config, train_records)
    run_seed = seed.child("run", 0)
    plans = plan_training(state, config.schedule_params, run_seed)
    model, tlog = train(train_records, plans, config.model, run_seed)
    scores = predict_scores(model, test_records)
    y_test = labels_vector(test_records)
    report = evaluate(scores, y_test)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trainlog_csv(tlog.epoch_losses, tlog.order_fingerprints, out / "trainlog.csv")
    write_predictions_csv(
        [r.id for r in test_records], y_test, scores, out / "predictions.csv"
    )
    write_eval_text(report, out / "report.txt")
    write_roc_csv(report.roc_points, out / "roc.csv")
    render_roc_figure(
        {config.strategy: (report.roc_points, report.auc)},
        out / "roc.png",
        title="ROC (full test set)",
    )
    print(f"auc={report.auc:.4f} accuracy={report.accuracy:.4f} -> {out}")
    return 0


def cmd_run(args) -> int:
    config = _config_from_args(args)
    report = run(config)
    paths = write_run_artifacts(report, args.out)
    means = report.metric_means
    print(f"{config.strategy}: auc={means['auc']:.4f} accuracy={means['accuracy']:.4f} "
          f"({len(report.evaluations)} evaluations) -> {args.out}")
    return 0 if paths else 1


def cmd_compare(args) -> int:
    names = [s.strip() for s in args.strategies.split(",") if s.strip()]
    if not names:
        raise ConfigError("no strategies given")
    configs = [_config_from_args(args, strategy=name) for name in names]
    result = compare(configs)
    write_comparison_artifacts(result, args.out)
    for report in result.reports:
        means = report.metric_means
        print(f"{report.strategy}: auc={means['auc']:.4f} "
              f"accuracy={means['accuracy']:.4f}")
    print(f"-> {args.out}")
    return 0


def cmd_metrics(args) -> int:
    _, labels, scores = load_predictions(args.predictions)
    report = evaluate(scores, labels, threshold=args.threshold)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_eval_text(report, out / "report.txt")
    write_roc_csv(report.roc_points, out / "roc.csv")
    render_roc_figure(
        {"predictions": (report.roc_points, report.auc)}, out / "roc.png"
    )
    print(f"auc={report.auc:.4f} accuracy={report.accuracy:.4f} "
          f"ap={report.average_precision:.4f} f1={report.f1:.4f} -> {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CurrikitError, ValueError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
