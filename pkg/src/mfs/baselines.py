"""ReliefF and information-gain feature rankings used as comparison baselines."""

from __future__ import annotations

import warnings

import numpy as np

from .dataset import NOMINAL, Dataset


def relieff_weights(
    d: Dataset, neighbors: int = 5, sample: int = 30, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Multiclass ReliefF weights (Kononenko's ReliefF-F formulation).

    For each sampled instance R, the ``neighbors`` nearest hits pull the
    weights down by ``|R_f - H_f|`` and, for every other class C, the
    nearest misses from C push them up by ``|R_f - M_f|`` weighted by
    ``P(C) / (1 - P(class(R)))``. Neighbours are found by Manhattan distance
    with ties broken by instance index; classes with fewer than ``neighbors``
    candidates contribute all they have. Instances are sampled without
    replacement.
    """
    if neighbors < 1 or sample < 1:
        raise ValueError("neighbors and sample must be >= 1")
    if rng is None:
        rng = np.random.default_rng()
    X, y = d.features, d.labels
    n, N = X.shape
    if sample > n:
        warnings.warn(f"sample={sample} exceeds {n} instances; using {n}", stacklevel=2)
        sample = n
    prior = np.bincount(y, minlength=d.n_classes) / n

    w = np.zeros(N)
    for r in rng.choice(n, size=sample, replace=False):
        diffs = np.abs(X - X[r])
        dist = diffs.sum(axis=1)
        dist[r] = np.inf
        cr = y[r]
        others = 1.0 - prior[cr]
        for c in range(d.n_classes):
            cand = np.flatnonzero(y == c)
            if c == cr:
                cand = cand[cand != r]
            if cand.size == 0:
                continue
            near = cand[np.argsort(dist[cand], kind="stable")[:neighbors]]
            contrib = diffs[near].mean(axis=0)
            if c == cr:
                w -= contrib
            elif others > 0:
                w += prior[c] / others * contrib
    return w / sample


def entropy(labels: np.ndarray) -> float:
    """Shannon entropy in bits of a label vector."""
    _, counts = np.unique(labels, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def discretize(values: np.ndarray, bins: int) -> np.ndarray:
    """Equal-width binning over the observed range; constant input gives one bin."""
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros(values.shape, dtype=np.int64)
    codes = np.floor((values - lo) / (hi - lo) * bins).astype(np.int64)
    return np.minimum(codes, bins - 1)


def conditional_entropy(labels: np.ndarray, groups: np.ndarray) -> float:
    h = 0.0
    n = labels.size
    for g in np.unique(groups):
        sel = groups == g
        h += sel.sum() / n * entropy(labels[sel])
    return h


def info_gain(d: Dataset, feature: int, bins: int = 10) -> float:
    """H(class) - H(class | feature) in bits.

    Nominal features are split on their distinct values, continuous ones on
    ``bins`` equal-width intervals.
    """
    x = d.features[:, feature]
    if d.feature_kinds[feature] == NOMINAL:
        groups = np.unique(x, return_inverse=True)[1]
    else:
        if bins < 2:
            raise ValueError("bins must be >= 2")
        groups = discretize(x, bins)
    gain = entropy(d.labels) - conditional_entropy(d.labels, groups)
    return max(0.0, gain)


def info_gain_weights(d: Dataset, bins: int = 10) -> np.ndarray:
    return np.array([info_gain(d, j, bins) for j in range(d.n_features)])


def ranking(weights) -> np.ndarray:
    """Feature indices by descending weight, lower index first on ties."""
    w = np.asarray(weights, dtype=np.float64)
    return np.lexsort((np.arange(w.size), -w))


def select_top_m(weights, m: int) -> np.ndarray:
    """Chromosome selecting the ``m`` highest-weighted features."""
    w = np.asarray(weights, dtype=np.float64)
    if not 1 <= m <= w.size:
        raise ValueError(f"m must lie in [1, {w.size}], got {m}")
    mask = np.zeros(w.size, dtype=bool)
    mask[ranking(w)[:m]] = True
    return mask
