"""Independent reference implementations used to check the library.

Everything here is deliberately brute force: chain-rule enumeration for
weighted permutations, exhaustive pairwise counting for AUC, a naive
precision walk for AP, central finite differences for gradients.  None
of it shares code with the implementations under test.
"""

from __future__ import annotations

import itertools

import numpy as np

# chi-square inverse CDF at 1 - 0.001, precomputed
CHI2_CRIT_001 = {5: 20.515005652432873, 23: 49.7282324664315}


def enumerate_permutation_probs(weights) -> dict[tuple[int, ...], float]:
    """Exact probability of every permutation under sequential weighted draws."""
    weights = [float(w) for w in weights]
    n = len(weights)
    probs = {}
    for perm in itertools.permutations(range(n)):
        p = 1.0
        remaining = list(range(n))
        for idx in perm:
            total = sum(weights[j] for j in remaining)
            p *= weights[idx] / total
            remaining.remove(idx)
        probs[perm] = p
    return probs


def chi_square_stat(counts: dict, probs: dict, n_draws: int) -> float:
    stat = 0.0
    for key, p in probs.items():
        expected = p * n_draws
        observed = counts.get(key, 0)
        stat += (observed - expected) ** 2 / expected
    return stat


def pairwise_auc(scores, labels) -> float:
    """AUC by exhaustive (positive, negative) pair counting, ties at 1/2."""
    scores = list(map(float, scores))
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(pos) * len(neg))


def naive_average_precision(scores, labels) -> float:
    """AP by walking descending scores one position at a time."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    n_pos = sum(labels)
    tp = 0
    total = 0.0
    for k, i in enumerate(order, start=1):
        if labels[i] == 1:
            tp += 1
            total += tp / k
    return total / n_pos


def finite_difference_gradient(loss_fn, theta: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function at theta."""
    grad = np.zeros_like(theta)
    for i in range(theta.shape[0]):
        up = theta.copy()
        up[i] += h
        down = theta.copy()
        down[i] -= h
        grad[i] = (loss_fn(up) - loss_fn(down)) / (2.0 * h)
    return grad
