"""Small natively-implemented classifiers trained by minibatch SGD.

The trainer exists so that sample *order* is the only thing a curriculum
can change: each epoch consumes the samples exactly in the order given by
that epoch's plan, chunked into consecutive minibatches (the last batch
may be short), with no second shuffle.  Plain SGD, cross-entropy loss,
and deterministic weight initialization per seed keep runs bit-for-bit
reproducible; momentum is available but off by default so the ordering
effect stays unconfounded.

Two architectures: a linear (logistic-regression) model and a one-hidden-
layer tanh MLP.  Gradients are hand-derived and checked against finite
differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalDivergenceError, PlanMismatchError, ShapeError
from .rng import SeedSpec
from .sampler import EpochPlan
from .synth import SampleRecord, features_matrix, labels_vector

ARCHITECTURES = ("linear", "mlp")


@dataclass(frozen=True)
class ModelParams:
    """Architecture choice and SGD hyperparameters."""

    architecture: str = "mlp"
    hidden_width: int = 32
    learning_rate: float = 0.05
    batch_size: int = 32
    momentum: float = 0.0

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"architecture must be one of {ARCHITECTURES}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.architecture == "mlp" and self.hidden_width < 1:
            raise ValueError("hidden_width must be >= 1")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _cross_entropy(z: np.ndarray, y: np.ndarray) -> float:
    # mean of log(1 + exp(z)) - y*z, computed stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


class LinearModel:
    """Logistic regression: score = sigmoid(w . x + b)."""

    def __init__(self, w: np.ndarray, b: float):
        self.w = w
        self.b = b

    @classmethod
    def initialize(cls, dim: int, rng: np.random.Generator) -> "LinearModel":
        return cls(w=rng.normal(0.0, 0.01, size=dim), b=0.0)

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    def logits(self, X: np.ndarray) -> np.ndarray:
        if X.shape[1] != self.dim:
            raise ShapeError(f"expected {self.dim} features, got {X.shape[1]}")
        return X @ self.w + self.b

    def loss_and_grads(self, X, y):
        z = self.logits(X)
        delta = _sigmoid(z) - y  # d(loss)/d(z), per sample
        m = X.shape[0]
        grads = {"w": X.T @ delta / m, "b": float(delta.mean())}
        return _cross_entropy(z, y), grads

    def step(self, grads, lr: float, velocity=None, momentum: float = 0.0):
        if momentum > 0.0 and velocity is not None:
            velocity["w"] = momentum * velocity["w"] + grads["w"]
            velocity["b"] = momentum * velocity["b"] + grads["b"]
            grads = velocity
        self.w = self.w - lr * grads["w"]
        self.b = self.b - lr * grads["b"]

    def zero_velocity(self):
        return {"w": np.zeros_like(self.w), "b": 0.0}

    def weights_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.w)) and np.isfinite(self.b))

    # Flat views make finite-difference checks and checkpoints uniform.
    def get_flat(self) -> np.ndarray:
        return np.concatenate([self.w, [self.b]])

    def set_flat(self, theta: np.ndarray) -> None:
        self.w = theta[:-1].copy()
        self.b = float(theta[-1])

    def flat_grads(self, grads) -> np.ndarray:
        return np.concatenate([grads["w"], [grads["b"]]])


class MlpModel:
    """One hidden tanh layer: score = sigmoid(w2 . tanh(W1' x + b1) + b2)."""

    def __init__(self, W1, b1, w2, b2):
        self.W1 = W1
        self.b1 = b1
        self.w2 = w2
        self.b2 = b2

    @classmethod
    def initialize(cls, dim: int, hidden: int, rng: np.random.Generator) -> "MlpModel":
        return cls(
            W1=rng.normal(0.0, 1.0 / np.sqrt(dim), size=(dim, hidden)),
            b1=np.zeros(hidden),
            w2=rng.normal(0.0, 1.0 / np.sqrt(hidden), size=hidden),
            b2=0.0,
        )

    @property
    def dim(self) -> int:
        return self.W1.shape[0]

    def logits(self, X: np.ndarray) -> np.ndarray:
        if X.shape[1] != self.dim:
            raise ShapeError(f"expected {self.dim} features, got {X.shape[1]}")
        return np.tanh(X @ self.W1 + self.b1) @ self.w2 + self.b2

    def loss_and_grads(self, X, y):
        H = np.tanh(X @ self.W1 + self.b1)  # (m, h)
        z = H @ self.w2 + self.b2
        delta = _sigmoid(z) - y
        m = X.shape[0]
        dH = np.outer(delta, self.w2) * (1.0 - H * H)  # back through tanh
        grads = {
            "W1": X.T @ dH / m,
            "b1": dH.mean(axis=0),
            "w2": H.T @ delta / m,
            "b2": float(delta.mean()),
        }
        return _cross_entropy(z, y), grads

    def step(self, grads, lr: float, velocity=None, momentum: float = 0.0):
        if momentum > 0.0 and velocity is not None:
            for k in ("W1", "b1", "w2"):
                velocity[k] = momentum * velocity[k] + grads[k]
            velocity["b2"] = momentum * velocity["b2"] + grads["b2"]
            grads = velocity
        self.W1 = self.W1 - lr * grads["W1"]
        self.b1 = self.b1 - lr * grads["b1"]
        self.w2 = self.w2 - lr * grads["w2"]
        self.b2 = self.b2 - lr * grads["b2"]

    def zero_velocity(self):
        return {
            "W1": np.zeros_like(self.W1),
            "b1": np.zeros_like(self.b1),
            "w2": np.zeros_like(self.w2),
            "b2": 0.0,
        }

    def weights_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.W1))
            and np.all(np.isfinite(self.b1))
            and np.all(np.isfinite(self.w2))
            and np.isfinite(self.b2)
        )

    def get_flat(self) -> np.ndarray:
        return np.concatenate([self.W1.ravel(), self.b1, self.w2, [self.b2]])

    def set_flat(self, theta: np.ndarray) -> None:
        d, h = self.W1.shape
        self.W1 = theta[: d * h].reshape(d, h).copy()
        self.b1 = theta[d * h : d * h + h].copy()
        self.w2 = theta[d * h + h : d * h + 2 * h].copy()
        self.b2 = float(theta[-1])

    def flat_grads(self, grads) -> np.ndarray:
        return np.concatenate(
            [grads["W1"].ravel(), grads["b1"], grads["w2"], [grads["b2"]]]
        )


Model = LinearModel | MlpModel


def initialize_model(params: ModelParams, dim: int, rng: np.random.Generator) -> Model:
    if params.architecture == "linear":
        return LinearModel.initialize(dim, rng)
    return MlpModel.initialize(dim, params.hidden_width, rng)


@dataclass
class TrainLog:
    """Per-epoch mean training loss and the hash of the order consumed."""

    epoch_losses: list[float] = field(default_factory=list)
    order_fingerprints: list[str] = field(default_factory=list)


def train(
    data: Sequence[SampleRecord],
    plans: Sequence[EpochPlan],
    params: ModelParams,
    seed: SeedSpec,
) -> tuple[Model, TrainLog]:
    """Train on ``data`` following ``plans`` epoch by epoch.

    Weight initialization draws from ``seed.stream("model-init")``, so two
    calls with identical seed and plans produce bit-identical weights.
    Raises :class:`PlanMismatchError` when a plan does not cover the
    dataset and :class:`NumericalDivergenceError` (with the epoch in the
    message) if weights stop being finite.
    """
    if len(data) == 0:
        raise PlanMismatchError("cannot train on an empty dataset")
    X = features_matrix(data)
    y = labels_vector(data).astype(np.float64)
    n = X.shape[0]
    model = initialize_model(params, X.shape[1], seed.stream("model-init"))
    velocity = model.zero_velocity() if params.momentum > 0.0 else None
    log = TrainLog()
    for plan in plans:
        if plan.order.shape[0] != n:
            raise PlanMismatchError(
                f"epoch {plan.epoch} plan covers {plan.order.shape[0]} samples, dataset has {n}"
            )
        loss_sum = 0.0
        for start in range(0, n, params.batch_size):
            idx = plan.order[start : start + params.batch_size]
            loss, grads = model.loss_and_grads(X[idx], y[idx])
            model.step(grads, params.learning_rate, velocity, params.momentum)
            loss_sum += loss * idx.shape[0]
        if not model.weights_finite():
            raise NumericalDivergenceError(
                f"non-finite weights after epoch {plan.epoch} "
                f"(learning rate {params.learning_rate})"
            )
        log.epoch_losses.append(loss_sum / n)
        log.order_fingerprints.append(plan.fingerprint())
    return model, log


def predict_scores(model: Model, data: Sequence[SampleRecord]) -> np.ndarray:
    """Positive-class probability per record, aligned with the input order."""
    return _sigmoid(model.logits(features_matrix(data)))
