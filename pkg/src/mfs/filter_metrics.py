"""Pearson correlations and the correlation-based subset merit.

The merit of a subset of ``k`` features is::

    k * r_cf / sqrt(k + k * (k - 1) * r_ff)

where ``r_cf`` is the mean |correlation| between the selected features and
the class code, and ``r_ff`` the mean |correlation| over distinct selected
feature pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, as_mask


def pearson(x, y) -> float:
    """Pearson correlation of two equal-length vectors.

    Returns 0.0 when either vector has zero variance.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"vectors must be 1-D of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise ValueError("need at least two observations")
    if x.max() == x.min() or y.max() == y.min():
        return 0.0
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    denom = math.sqrt(sxx * syy)
    if denom == 0.0 or math.isinf(denom):
        # the product under- or overflowed
        denom = math.sqrt(sxx) * math.sqrt(syy)
    r = float(dx @ dy) / denom
    return min(1.0, max(-1.0, r))


def _abs_corr_matrix(A: np.ndarray) -> np.ndarray:
    """|Pearson| between all column pairs of ``A``; zero-variance columns give 0."""
    D = A - A.mean(axis=0)
    ss = np.einsum("ij,ij->j", D, D)
    # A constant column can leave round-off residue after centring.
    ss[A.max(axis=0) == A.min(axis=0)] = 0.0
    C = D.T @ D
    norm = np.sqrt(np.outer(ss, ss))
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(norm > 0, np.abs(C) / norm, 0.0)
    return np.minimum(R, 1.0)


@dataclass(frozen=True, eq=False)
class CorrelationCache:
    """Precomputed |Pearson| feature-feature (``ff``) and feature-class (``fc``) values."""

    ff: np.ndarray
    fc: np.ndarray

    @property
    def n_features(self) -> int:
        return self.fc.shape[0]


def class_codes(d: Dataset) -> np.ndarray:
    """Numeric stand-in for the class variable in feature-class correlations."""
    return d.labels.astype(np.float64)


def build_cache(d: Dataset) -> CorrelationCache:
    X = d.features
    A = np.column_stack([X, class_codes(d)])
    R = _abs_corr_matrix(A)
    n = d.n_features
    ff = R[:n, :n].copy()
    # Exact symmetry and a unit diagonal for every non-constant feature.
    ff = np.triu(ff, 1)
    ff = ff + ff.T
    ff[np.diag_indices(n)] = (X.max(axis=0) > X.min(axis=0)).astype(np.float64)
    fc = R[:n, n].copy()
    ff.setflags(write=False)
    fc.setflags(write=False)
    return CorrelationCache(ff=ff, fc=fc)


def merit_of_indices(cache: CorrelationCache, idx: np.ndarray) -> float:
    k = idx.size
    if k == 0:
        raise ValueError("empty feature subset")
    r_cf = float(cache.fc[idx].mean())
    if k == 1:
        return r_cf
    sub = cache.ff[np.ix_(idx, idx)]
    r_ff = float(sub[np.triu_indices(k, 1)].mean())
    return k * r_cf / math.sqrt(k + k * (k - 1) * r_ff)


def merit(cache: CorrelationCache, subset) -> float:
    """Correlation-based merit of the features selected by ``subset``."""
    mask = as_mask(subset, cache.n_features)
    return merit_of_indices(cache, np.flatnonzero(mask))


def fe_subset(cache: CorrelationCache, subset) -> float:
    """Filter evaluation used by the memetic local search (same as :func:`merit`)."""
    return merit(cache, subset)
