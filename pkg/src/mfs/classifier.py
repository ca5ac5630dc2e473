"""1-nearest-neighbour classification and cross-validated accuracy.

Distances are squared Euclidean on the [0, 1]-scaled features. Nearest
neighbour ties go to the training instance with the lowest index.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, DatasetError, FoldAssignment, as_mask, make_folds


def sq_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances between rows of ``A`` and rows of ``B``.

    Accumulated one feature at a time, in column order, so every code path
    that sums the same per-feature terms gets bit-identical distances and
    nearest-neighbour ties resolve the same way.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    out = np.zeros((A.shape[0], B.shape[0]))
    for j in range(A.shape[1]):
        out += np.square(A[:, j, None] - B[None, :, j])
    return out


def nn1_predict(train: Dataset, query) -> int:
    """Label of the training instance nearest to ``query``."""
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (train.n_features,):
        raise DatasetError(f"query has arity {q.size}, expected {train.n_features}")
    d = sq_distances(q[None, :], train.features)[0]
    return int(train.labels[np.argmin(d)])


def _correct_in_fold(D: np.ndarray, y: np.ndarray, folds: FoldAssignment, fold_id: int) -> int:
    test = folds.test_indices(fold_id)
    train = folds.train_indices(fold_id)
    if train.size == 0:
        raise DatasetError("fold leaves no training instances")
    # train is ascending, so argmin's first-occurrence rule picks the lowest index.
    nearest = train[np.argmin(D[np.ix_(test, train)], axis=1)]
    return int(np.count_nonzero(y[nearest] == y[test]))


def _check_folds(d: Dataset, folds: FoldAssignment) -> None:
    if folds.n_instances != d.n_instances:
        raise DatasetError("fold assignment does not match dataset size")


def _selected(d: Dataset, subset) -> np.ndarray:
    return d.features[:, as_mask(subset, d.n_features)]


def fold_accuracy(d: Dataset, subset, folds: FoldAssignment, fold_id: int) -> float:
    """Accuracy on fold ``fold_id`` with the other folds as training data."""
    _check_folds(d, folds)
    if not 0 <= fold_id < folds.k:
        raise DatasetError(f"fold id {fold_id} out of range for k={folds.k}")
    X = _selected(d, subset)
    test = folds.test_indices(fold_id)
    if test.size == 0:
        raise DatasetError(f"fold {fold_id} is empty")
    D = np.full((d.n_instances, d.n_instances), np.inf)
    train = folds.train_indices(fold_id)
    D[np.ix_(test, train)] = sq_distances(X[test], X[train])
    return _correct_in_fold(D, d.labels, folds, fold_id) / test.size


def correct_count(D: np.ndarray, y: np.ndarray, folds: FoldAssignment) -> int:
    """Total correctly classified instances over all folds, given all pairwise distances."""
    return sum(_correct_in_fold(D, y, folds, f) for f in range(folds.k))


def cv_accuracy(d: Dataset, subset, folds: FoldAssignment) -> float:
    """Pooled k-fold accuracy: total correct predictions over all instances."""
    _check_folds(d, folds)
    X = _selected(d, subset)
    D = sq_distances(X, X)
    return correct_count(D, d.labels, folds) / d.n_instances


def repeated_cv(
    d: Dataset, subset, k: int, repeats: int, rng: np.random.Generator
) -> float:
    """Mean of ``cv_accuracy`` over ``repeats`` independent fold draws."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    X = _selected(d, subset)
    D = sq_distances(X, X)
    scores = []
    for _ in range(repeats):
        folds = make_folds(d.n_instances, k, rng)
        scores.append(correct_count(D, d.labels, folds) / d.n_instances)
    return float(np.mean(scores))
