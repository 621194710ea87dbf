"""currikit: score-guided curriculum scheduling for training-data ordering.

The library turns per-class difficulty scores into per-epoch sampling
probabilities, draws one weighted permutation without replacement per
epoch, and ships a desk-scale harness (synthetic data, native SGD
classifiers, from-scratch metrics) for comparing ordering strategies
under identical seeds.
"""

from .errors import (
    ConfigError,
    CurrikitError,
    DegenerateLabelsError,
    EmptyDatasetError,
    InvalidProbabilityError,
    InvalidWeightError,
    ManifestParseError,
    NumericalDivergenceError,
    PlanMismatchError,
    ProfileError,
    ReversalOutOfRangeError,
    ScheduleExhaustedError,
    ShapeError,
    UnfairComparisonError,
    UnknownFineLabelError,
)
from .experiment import (
    AggregateReport,
    ComparisonResult,
    ExperimentConfig,
    RunEvaluation,
    compare,
    load_score_table,
    run,
)
from .metrics import EvalReport, evaluate, export_roc
from .rng import SeedSpec
from .sampler import EpochPlan, plan_training, sample_permutation
from .schedule import (
    DEFAULT_FINE_LABELS,
    DEFAULT_SCORES,
    ScheduleParams,
    ScheduleState,
    ScoreTable,
    advance_epoch,
    compute_lambda,
    from_external_probabilities,
    init_probabilities,
    make_schedule,
    reverse_scores,
)
from .synth import (
    ClassProfile,
    SampleRecord,
    generate,
    read_manifest,
    write_manifest,
)
from .trainer import ModelParams, TrainLog, predict_scores, train

__version__ = "0.1.0"

__all__ = [
    "AggregateReport",
    "ClassProfile",
    "ComparisonResult",
    "ConfigError",
    "CurrikitError",
    "DEFAULT_FINE_LABELS",
    "DEFAULT_SCORES",
    "DegenerateLabelsError",
    "EmptyDatasetError",
    "EpochPlan",
    "EvalReport",
    "ExperimentConfig",
    "InvalidProbabilityError",
    "InvalidWeightError",
    "ManifestParseError",
    "ModelParams",
    "NumericalDivergenceError",
    "PlanMismatchError",
    "ProfileError",
    "ReversalOutOfRangeError",
    "RunEvaluation",
    "SampleRecord",
    "ScheduleExhaustedError",
    "ScheduleParams",
    "ScheduleState",
    "ScoreTable",
    "SeedSpec",
    "ShapeError",
    "TrainLog",
    "UnfairComparisonError",
    "UnknownFineLabelError",
    "advance_epoch",
    "compare",
    "compute_lambda",
    "evaluate",
    "export_roc",
    "from_external_probabilities",
    "generate",
    "init_probabilities",
    "load_score_table",
    "make_schedule",
    "plan_training",
    "predict_scores",
    "read_manifest",
    "reverse_scores",
    "run",
    "sample_permutation",
    "train",
    "write_manifest",
]
