"""Weighted sampling without replacement: one full permutation per epoch.

A permutation is drawn with the order-statistics key method: give item i
the key u_i ** (1/w_i) with u_i uniform on (0, 1) and sort the keys in
descending order.  The resulting order is distributed exactly like
sequential weighted draws without replacement (first position picked with
probability w_i / sum(w), each later position from the remaining items in
proportion to their weights), but costs one sort instead of N draws and
is trivially deterministic under a fixed stream.

Keys are compared in log space, log(1 - u_i) / w_i, which avoids underflow
for large weight ranges and is order-equivalent; ties between equal keys
(a probability-zero event for continuous draws, but floats can collide)
break by ascending item index so the output is fully deterministic.
Because scaling every weight by c > 0 scales every log-key by 1/c, the
permutation is invariant under weight rescaling, so callers may pass
unnormalized weight vectors.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError, InvalidWeightError
from .rng import SeedSpec
from .schedule import ScheduleParams, ScheduleState, advance_epoch


@dataclass(frozen=True)
class EpochPlan:
    """A 1-based epoch index plus the sample order for that epoch."""

    epoch: int
    order: np.ndarray

    def fingerprint(self) -> str:
        """Short stable hash of the order, for logs and audits."""
        return hashlib.sha256(self.order.astype("<u8").tobytes()).hexdigest()[:16]


def sample_permutation(weights, rng: np.random.Generator) -> np.ndarray:
    """Draw one weighted permutation without replacement.

    ``weights`` must be strictly positive and finite; they need not sum
    to 1.  Returns an index array where position 0 is the first draw.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise InvalidWeightError("weights must be a 1-D vector")
    if w.shape[0] == 0:
        raise EmptyDatasetError("cannot sample a permutation of zero items")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise InvalidWeightError("all weights must be finite and > 0")
    u = rng.random(w.shape[0])
    keys = np.log1p(-u) / w
    # Descending keys; stable sort so equal keys resolve by ascending index.
    return np.argsort(-keys, kind="stable")


def plan_training(
    state: ScheduleState, params: ScheduleParams, seed: SeedSpec
) -> list[EpochPlan]:
    """Draw the full curriculum: one permutation per epoch, advancing the schedule.

    For each epoch e = 1..E the current probability vector is used as the
    weight vector (unnormalized; the key method is scale-invariant), one
    permutation is drawn from the stream ``seed.stream("perm", e)``, and
    the schedule advances.  The same SeedSpec therefore reproduces the
    same plan sequence bit for bit.
    """
    if state.current_epoch != 1:
        raise ValueError("plan_training expects a schedule positioned at epoch 1")
    plans = []
    for epoch in range(1, params.total_epochs + 1):
        order = sample_permutation(state.current_probs, seed.stream("perm", epoch))
        plans.append(EpochPlan(epoch=epoch, order=order))
        if epoch < params.total_epochs:
            state = advance_epoch(state, params)
    return plans
