"""Curriculum schedule: difficulty scores to per-epoch sampling probabilities.

The schedule starts each sample at a probability proportional to its
class difficulty score (higher score = easier = sampled earlier), then
decays every sample's probability geometrically toward the uniform rate
1/N.  Each sample i gets its own decay factor

    lambda_i = ((1/N) / p_i(1)) ** (1/L)

so that after the transition epoch L the whole vector is pinned at 1/N
for the remainder of training:

    p_i(e) = p_i(e-1) * lambda_i    for 2 <= e <= L
    p_i(e) = 1/N                    for L <  e <= E   (assigned directly)

Two things are deliberate and worth knowing about:

* Applying the multiplicative branch literally performs L-1 multiplications
  by an L-th root, so p_i(L) = p_init**(1/L) * (1/N)**((L-1)/L), which is
  not yet 1/N; the assignment at epoch L+1 closes the residual gap of
  ((1/N)/p_init)**(1/L) in one step.  The gap shrinks as L grows.
* Probability vectors for epochs >= 2 do not generally sum to 1 (each
  sample decays at its own rate).  The raw values are stored untouched;
  the sampler renormalizes at the point of use, which is all that
  weighted sampling without replacement requires.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    EmptyDatasetError,
    InvalidProbabilityError,
    ReversalOutOfRangeError,
    ScheduleExhaustedError,
    UnknownFineLabelError,
)

#: The fine-grained label set used by the default score table and profiles.
DEFAULT_FINE_LABELS = ("normal", "a", "b", "c", "d", "e", "f")

MIN_SCORE = 1
MAX_SCORE = 100


@dataclass(frozen=True)
class ScoreTable:
    """Map from fine-grained class label to an integer difficulty score.

    Scores range from 1 (hardest) to 100 (easiest).  Lookups for labels
    absent from the table raise :class:`UnknownFineLabelError`; there are
    no default scores.
    """

    entries: Mapping[str, int]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("score table must not be empty")
        clean = {}
        for label, score in self.entries.items():
            if not isinstance(score, (int, np.integer)) or isinstance(score, bool):
                raise ValueError(f"score for {label!r} must be an integer, got {score!r}")
            if not MIN_SCORE <= score <= MAX_SCORE:
                raise ValueError(
                    f"score for {label!r} must be in [{MIN_SCORE}, {MAX_SCORE}], got {score}"
                )
            clean[str(label)] = int(score)
        object.__setattr__(self, "entries", clean)

    def score(self, label: str) -> int:
        try:
            return self.entries[label]
        except KeyError:
            raise UnknownFineLabelError(label) from None

    def labels(self) -> tuple[str, ...]:
        return tuple(self.entries)

    def __contains__(self, label: str) -> bool:
        return label in self.entries


#: Default per-class difficulty scores (1 = hardest, 100 = easiest).
DEFAULT_SCORES = ScoreTable(
    {"normal": 30, "a": 30, "b": 30, "c": 70, "d": 40, "e": 90, "f": 10}
)


def reverse_scores(scores: ScoreTable) -> ScoreTable:
    """Flip a score table for the anti-curriculum: each score s becomes 100 - s.

    Requires every score <= 99 so the result stays positive; a score of
    100 would map to 0 and raises :class:`ReversalOutOfRangeError`.
    Applying the reversal twice returns the original table.
    """
    for label, score in scores.entries.items():
        if score >= MAX_SCORE:
            raise ReversalOutOfRangeError(
                f"cannot reverse score {score} for {label!r}: result would be 0"
            )
    return ScoreTable({label: MAX_SCORE - s for label, s in scores.entries.items()})


@dataclass(frozen=True)
class ScheduleParams:
    """Epoch bounds for a schedule: total epochs E and transition epoch L."""

    total_epochs: int
    transition_epoch: int

    def __post_init__(self):
        if self.total_epochs < 1:
            raise ValueError("total_epochs must be >= 1")
        if not 1 <= self.transition_epoch <= self.total_epochs:
            raise ValueError("transition_epoch must satisfy 1 <= L <= total_epochs")


def init_probabilities(labels: Sequence[str], scores: ScoreTable) -> np.ndarray:
    """Score-proportional initial probabilities: p_i = s_i / sum_j s_j.

    The result is aligned with ``labels``, strictly positive, and sums to
    1 up to rounding.  Samples of equal score get equal probability;
    higher score means higher probability.
    """
    if len(labels) == 0:
        raise EmptyDatasetError("cannot build probabilities for an empty label sequence")
    s = np.array([scores.score(label) for label in labels], dtype=np.float64)
    return s / s.sum()


def compute_lambda(p_init, n_samples: int, transition_epoch: int):
    """Per-sample decay factor lambda = ((1/N) / p_init) ** (1/L).

    Accepts a scalar or an array of initial probabilities.  The factor is
    > 1 for samples starting below the uniform rate 1/N (their probability
    grows), < 1 for samples starting above it, and exactly 1 at 1/N.
    """
    if n_samples < 1:
        raise EmptyDatasetError("n_samples must be >= 1")
    if transition_epoch < 1:
        raise ValueError("transition_epoch must be >= 1")
    p = np.asarray(p_init, dtype=np.float64)
    if np.any(p <= 0.0) or np.any(p > 1.0):
        raise InvalidProbabilityError("initial probabilities must lie in (0, 1]")
    out = ((1.0 / n_samples) / p) ** (1.0 / transition_epoch)
    return out if p.ndim else float(out)


@dataclass(frozen=True)
class ScheduleState:
    """Probabilities for the current epoch plus the machinery to update them.

    ``current_probs`` holds the raw per-sample values for ``current_epoch``
    (epoch numbering starts at 1).  States are immutable; `advance_epoch`
    returns the successor.
    """

    initial_probs: np.ndarray
    lambdas: np.ndarray
    current_epoch: int
    current_probs: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.initial_probs.shape[0]


def _make_state(probs: np.ndarray, params: ScheduleParams) -> ScheduleState:
    n = probs.shape[0]
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise InvalidProbabilityError(f"initial probabilities sum to {total!r}, expected 1")
    lambdas = compute_lambda(probs, n, params.transition_epoch)
    return ScheduleState(
        initial_probs=probs.copy(),
        lambdas=np.asarray(lambdas, dtype=np.float64),
        current_epoch=1,
        current_probs=probs.copy(),
    )


def make_schedule(
    labels: Sequence[str], scores: ScoreTable, params: ScheduleParams
) -> ScheduleState:
    """Build the epoch-1 state from fine labels and a score table."""
    return _make_state(init_probabilities(labels, scores), params)


def from_external_probabilities(probs, params: ScheduleParams) -> ScheduleState:
    """Build a schedule from an externally supplied probability assignment.

    Any positive vector works: it is normalized to sum to 1 and then
    treated exactly like a score-derived initialization, so the decay
    machinery applies unchanged to probabilities produced by other
    curriculum methods.
    """
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise InvalidProbabilityError("external probabilities must be a 1-D vector")
    if p.shape[0] == 0:
        raise EmptyDatasetError("external probability vector is empty")
    if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
        raise InvalidProbabilityError("external probabilities must be finite and > 0")
    return _make_state(p / p.sum(), params)


def uniform_probabilities(n_samples: int) -> np.ndarray:
    """The degenerate assignment 1/N for every sample."""
    if n_samples < 1:
        raise EmptyDatasetError("n_samples must be >= 1")
    return np.full(n_samples, 1.0 / n_samples)


def probability_trajectory(
    state: ScheduleState, params: ScheduleParams
) -> list[np.ndarray]:
    """Raw probability vectors for every epoch 1..E, starting from ``state``."""
    if state.current_epoch != 1:
        raise ValueError("probability_trajectory expects a schedule at epoch 1")
    out = [state.current_probs]
    for _ in range(params.total_epochs - 1):
        state = advance_epoch(state, params)
        out.append(state.current_probs)
    return out


def advance_epoch(state: ScheduleState, params: ScheduleParams) -> ScheduleState:
    """Return the state for the next epoch.

    Epochs 2..L multiply each probability by its decay factor; epochs
    L+1..E are assigned exactly 1/N (no accumulation, so the uniform
    phase is bit-exact).  Advancing past ``params.total_epochs`` raises
    :class:`ScheduleExhaustedError`.
    """
    e = state.current_epoch + 1
    if e > params.total_epochs:
        raise ScheduleExhaustedError(
            f"schedule has only {params.total_epochs} epochs, cannot advance to epoch {e}"
        )
    if e <= params.transition_epoch:
        probs = state.current_probs * state.lambdas
    else:
        probs = np.full(state.n_samples, 1.0 / state.n_samples)
    return ScheduleState(
        initial_probs=state.initial_probs,
        lambdas=state.lambdas,
        current_epoch=e,
        current_probs=probs,
    )
