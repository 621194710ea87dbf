"""Synthetic difficulty-graded binary classification data.

Samples live in R^d with isotropic Gaussian noise.  Normal (negative)
samples center at -m0 * e1; each fracture subtype f centers at +m_f * e1
where the margin m_f = (score_f / 100) * max_margin.  Higher-scored
(easier) subtypes therefore sit farther from the class boundary, which is
the modeling analogy that carries per-class difficulty into feature
space: it is a design choice of this toolkit, not a measured property.

Default class counts mirror a realistic imbalanced screening dataset
(one negative class, six positive subtypes of very different sizes).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ManifestParseError, ProfileError, UnknownFineLabelError
from .rng import SeedSpec
from .schedule import DEFAULT_FINE_LABELS, DEFAULT_SCORES, ScoreTable

NORMAL_LABEL = "normal"

#: Default per-class sample counts for the synthetic training profile.
DEFAULT_TRAIN_COUNTS = {
    "normal": 800, "a": 88, "b": 340, "c": 84, "d": 11, "e": 42, "f": 27,
}
#: Default per-class sample counts for the synthetic test profile.
DEFAULT_TEST_COUNTS = {
    "normal": 400, "a": 10, "b": 44, "c": 9, "d": 2, "e": 4, "f": 4,
}

DEFAULT_DIM = 16
DEFAULT_NOISE = 1.0
DEFAULT_MAX_MARGIN = 2.0
DEFAULT_NORMAL_MARGIN = 1.0


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """One sample: identifier, binary label, fine-grained label, features.

    The binary label is 0 exactly when the fine label is ``normal``; this
    invariant is enforced at construction and again when manifests load.
    """

    id: str
    label: int
    fine_label: str
    features: np.ndarray

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"binary label must be 0 or 1, got {self.label!r}")
        if (self.label == 0) != (self.fine_label == NORMAL_LABEL):
            raise ValueError(
                f"label {self.label} inconsistent with fine label {self.fine_label!r}"
            )

    def __eq__(self, other):
        return (
            isinstance(other, SampleRecord)
            and self.id == other.id
            and self.label == other.label
            and self.fine_label == other.fine_label
            and np.array_equal(self.features, other.features)
        )


@dataclass(frozen=True)
class ClassProfile:
    """Counts, margins and noise defining one synthetic dataset.

    ``margins`` holds the distance of each class mean from the origin
    along the first axis: normal samples sit at -margins["normal"],
    fracture samples at +margins[f].
    """

    counts: Mapping[str, int]
    margins: Mapping[str, float]
    noise: float = DEFAULT_NOISE
    dim: int = DEFAULT_DIM

    def __post_init__(self):
        if self.dim < 2:
            raise ProfileError("feature dimension must be >= 2")
        if not self.noise > 0:
            raise ProfileError("noise sigma must be > 0")
        if NORMAL_LABEL not in self.counts:
            raise ProfileError("profile must include the normal class")
        for label, count in self.counts.items():
            if count < 0:
                raise ProfileError(f"negative count for {label!r}")
            if label not in self.margins:
                raise ProfileError(f"no margin configured for {label!r}")
            if not np.isfinite(self.margins[label]):
                raise ProfileError(f"margin for {label!r} must be finite")
        if self.counts[NORMAL_LABEL] < 1:
            raise ProfileError("profile needs at least one normal sample")
        if sum(c for l, c in self.counts.items() if l != NORMAL_LABEL) < 1:
            raise ProfileError("profile needs at least one non-normal sample")

    @classmethod
    def from_scores(
        cls,
        counts: Mapping[str, int],
        scores: ScoreTable = DEFAULT_SCORES,
        dim: int = DEFAULT_DIM,
        noise: float = DEFAULT_NOISE,
        max_margin: float = DEFAULT_MAX_MARGIN,
        normal_margin: float = DEFAULT_NORMAL_MARGIN,
    ) -> "ClassProfile":
        """Derive margins from difficulty scores: m_f = (score_f / 100) * max_margin."""
        margins = {}
        for label in counts:
            if label == NORMAL_LABEL:
                margins[label] = float(normal_margin)
            else:
                margins[label] = scores.score(label) / 100.0 * max_margin
        return cls(counts=dict(counts), margins=margins, noise=noise, dim=dim)


def default_train_profile(**overrides) -> ClassProfile:
    return ClassProfile.from_scores(DEFAULT_TRAIN_COUNTS, **overrides)


def default_test_profile(**overrides) -> ClassProfile:
    return ClassProfile.from_scores(DEFAULT_TEST_COUNTS, **overrides)


def generate(profile: ClassProfile, seed: SeedSpec) -> list[SampleRecord]:
    """Generate the dataset described by ``profile``, deterministically per seed.

    Each class draws from its own derived stream, so per-class generation
    is order-independent and could run in parallel without changing the
    output.  Records come back grouped by class in profile order.
    """
    records = []
    for label, count in profile.counts.items():
        if count == 0:
            continue
        rng = seed.stream("synth", label)
        sign = -1.0 if label == NORMAL_LABEL else 1.0
        mean = np.zeros(profile.dim)
        mean[0] = sign * profile.margins[label]
        features = mean + profile.noise * rng.standard_normal((count, profile.dim))
        y = 0 if label == NORMAL_LABEL else 1
        for i in range(count):
            records.append(
                SampleRecord(
                    id=f"{label}-{i:04d}",
                    label=y,
                    fine_label=label,
                    features=features[i],
                )
            )
    return records


def features_matrix(records: Sequence[SampleRecord]) -> np.ndarray:
    return np.stack([r.features for r in records])


def labels_vector(records: Sequence[SampleRecord]) -> np.ndarray:
    return np.array([r.label for r in records], dtype=np.int64)


def fine_labels(records: Sequence[SampleRecord]) -> list[str]:
    return [r.fine_label for r in records]


def write_manifest(records: Sequence[SampleRecord], path: str | Path) -> None:
    """Write records as CSV: header ``id,y,f,x0..x{d-1}``, UTF-8, LF endings.

    Features are written with repr precision so the round trip through
    text is lossless.
    """
    if len(records) == 0:
        raise ManifestParseError(0, "refusing to write an empty manifest")
    dim = records[0].features.shape[0]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        cols = ",".join(f"x{i}" for i in range(dim))
        fh.write(f"id,y,f,{cols}\n")
        for rec in records:
            if rec.features.shape[0] != dim:
                raise ManifestParseError(0, f"record {rec.id!r} has inconsistent dimension")
            feats = ",".join(repr(float(v)) for v in rec.features)
            fh.write(f"{rec.id},{rec.label},{rec.fine_label},{feats}\n")


def read_manifest(
    path: str | Path, known_labels: Iterable[str] | None = DEFAULT_FINE_LABELS
) -> list[SampleRecord]:
    """Load a manifest, validating every row.

    Raises :class:`ManifestParseError` with the offending line number for
    structural problems (wrong column count, non-numeric or non-finite
    features, label/fine-label inconsistency) and
    :class:`UnknownFineLabelError` for fine labels outside
    ``known_labels``.  Pass ``known_labels=None`` to accept any fine label.
    """
    allowed = None if known_labels is None else set(known_labels)
    records = []
    ids = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline()
        if not header:
            raise ManifestParseError(1, "empty manifest")
        head_cols = header.rstrip("\n").rstrip("\r").split(",")
        if head_cols[:3] != ["id", "y", "f"]:
            raise ManifestParseError(1, f"unexpected header {header.strip()!r}")
        dim = len(head_cols) - 3
        if dim < 1:
            raise ManifestParseError(1, "manifest has no feature columns")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cols = line.split(",")
            if len(cols) != dim + 3:
                raise ManifestParseError(
                    lineno, f"expected {dim + 3} columns, got {len(cols)}"
                )
            rec_id, y_str, fine = cols[0], cols[1], cols[2]
            if rec_id in ids:
                raise ManifestParseError(lineno, f"duplicate id {rec_id!r}")
            ids.add(rec_id)
            if y_str not in ("0", "1"):
                raise ManifestParseError(lineno, f"binary label must be 0 or 1, got {y_str!r}")
            y = int(y_str)
            if allowed is not None and fine not in allowed:
                raise UnknownFineLabelError(fine)
            if (y == 0) != (fine == NORMAL_LABEL):
                raise ManifestParseError(
                    lineno, f"label {y} inconsistent with fine label {fine!r}"
                )
            try:
                features = np.array([float(v) for v in cols[3:]], dtype=np.float64)
            except ValueError:
                raise ManifestParseError(lineno, "non-numeric feature value") from None
            if not np.all(np.isfinite(features)):
                raise ManifestParseError(lineno, "features must be finite")
            records.append(
                SampleRecord(id=rec_id, label=y, fine_label=fine, features=features)
            )
    if not records:
        raise ManifestParseError(1, "manifest contains no records")
    return records
