import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mfs.classifier import cv_accuracy, fold_accuracy, nn1_predict, repeated_cv
from mfs.dataset import CONTINUOUS, Dataset, DatasetError, FoldAssignment, make_folds


def make(X, y, n_classes=None):
    X = np.asarray(X, float)
    y = np.asarray(y)
    return Dataset(X, y, n_classes or int(y.max()) + 1, (CONTINUOUS,) * X.shape[1])


def brute_force_cv(X, y, fold_of, subset):
    """Per-instance leave-fold-out 1NN with plain loops."""
    cols = [j for j, b in enumerate(subset) if b]
    correct = 0
    for i in range(len(y)):
        best, best_j = None, None
        for j in range(len(y)):
            if fold_of[j] == fold_of[i]:
                continue
            dist = sum((X[i][c] - X[j][c]) ** 2 for c in cols)
            if best is None or dist < best:
                best, best_j = dist, j
        correct += y[best_j] == y[i]
    return correct / len(y)


class TestNN1:
    def test_exact_match(self):
        d = make([[0.2, 0.3], [0.9, 0.1], [0.5, 0.5]], [0, 1, 2])
        assert nn1_predict(d, [0.9, 0.1]) == 1

    def test_two_point_oracle(self):
        d = make([[0, 0], [1, 1]], [0, 1])
        # 0.02 vs 1.62
        assert nn1_predict(d, [0.1, 0.1]) == 0

    def test_single_training_instance(self):
        d = make([[0.4]], [0], n_classes=2)
        for q in (0.0, 0.4, 1.0):
            assert nn1_predict(d, [q]) == 0

    def test_tie_goes_to_lowest_index(self):
        d = make([[0.0], [1.0]], [1, 0])
        assert nn1_predict(d, [0.5]) == 1

    def test_arity_mismatch(self):
        with pytest.raises(DatasetError):
            nn1_predict(make([[0, 0]], [0]), [0.0])


class TestFoldAccuracy:
    def test_duplicated_test_fold(self):
        X = np.array([[0.1, 0.2], [0.8, 0.9], [0.1, 0.2], [0.8, 0.9]])
        d = make(X, [0, 1, 0, 1])
        folds = FoldAssignment(np.array([0, 0, 1, 1]), 2)
        assert fold_accuracy(d, [1, 1], folds, 0) == 1.0

    def test_hand_traced(self):
        # x: 0.0(A) 0.3(B) 0.6(A) 1.0(B); fold 0 = {0, 3}, fold 1 = {1, 2}
        d = make([[0.0], [0.3], [0.6], [1.0]], [0, 1, 0, 1])
        folds = FoldAssignment(np.array([0, 1, 1, 0]), 2)
        # fold 0: x=0.0 -> nearest 0.3 (B) wrong; x=1.0 -> nearest 0.6 (A) wrong
        assert fold_accuracy(d, [1], folds, 0) == 0.0
        # fold 1: x=0.3 -> nearest 0.0 (A) wrong; x=0.6 -> nearest 1.0 (B) wrong
        assert fold_accuracy(d, [1], folds, 1) == 0.0
        folds2 = FoldAssignment(np.array([0, 0, 1, 1]), 2)
        # fold 0: 0.0 -> 0.6 (A) right; 0.3 -> 0.6 (A) wrong
        assert fold_accuracy(d, [1], folds2, 0) == 0.5

    def test_empty_subset(self):
        d = make([[0.0], [1.0]], [0, 1])
        with pytest.raises(DatasetError):
            fold_accuracy(d, [0], FoldAssignment(np.array([0, 1]), 2), 0)

    def test_no_training_side(self):
        d = make([[0.0], [1.0]], [0, 1])
        with pytest.raises(DatasetError):
            fold_accuracy(d, [1], FoldAssignment(np.array([0, 0]), 1), 0)


class TestCvAccuracy:
    def test_separable(self):
        rng = np.random.default_rng(0)
        y = np.repeat([0, 1], 20)
        X = np.column_stack([y * 0.8 + rng.random(40) * 0.1, rng.random(40)])
        folds = make_folds(40, 10, rng)
        assert cv_accuracy(make(X, y), [1, 0], folds) == 1.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        X = rng.random((12, 4)).round(1)  # rounding forces distance ties
        y = rng.integers(0, 3, 12)
        d = make(X, y, 3)
        folds = make_folds(12, 4, rng)
        for bits in [(1, 1, 1, 1), (1, 0, 0, 0), (0, 1, 1, 0), (1, 0, 1, 1)]:
            assert cv_accuracy(d, bits, folds) == brute_force_cv(X.tolist(), y.tolist(), folds.fold_of, bits)

    def test_pooled_not_averaged(self):
        # fold 0 = {0,1,2} trains on {3} alone: 1/3 correct; fold 1 = {3}: 1/1 correct
        d = make([[0.0], [0.5], [0.6], [0.05]], [1, 0, 0, 1])
        folds = FoldAssignment(np.array([0, 0, 0, 1]), 2)
        assert fold_accuracy(d, [1], folds, 0) == pytest.approx(1 / 3)
        assert fold_accuracy(d, [1], folds, 1) == 1.0
        assert cv_accuracy(d, [1], folds) == 0.5

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_label_permutation_and_fold_renumbering(self, seed):
        rng = np.random.default_rng(seed)
        n, N, c = 30, 4, 3
        X = rng.random((n, N)).round(1)
        y = rng.integers(0, c, n)
        folds = make_folds(n, 5, rng)
        subset = rng.random(N) < 0.6
        subset[0] = True
        base = cv_accuracy(make(X, y, c), subset, folds)
        relabel = rng.permutation(c)
        assert cv_accuracy(make(X, relabel[y], c), subset, folds) == base
        renum = rng.permutation(5)
        assert cv_accuracy(make(X, y, c), subset, FoldAssignment(renum[folds.fold_of], 5)) == base

    def test_duplicate_feature_keeps_predictions(self):
        rng = np.random.default_rng(2)
        X = rng.random((40, 3))
        y = rng.integers(0, 2, 40)
        Xd = np.column_stack([X, X[:, 0]])
        folds = make_folds(40, 10, rng)
        a = cv_accuracy(make(X, y), [1, 0, 0], folds)
        b = cv_accuracy(make(Xd, y), [1, 0, 0, 1], folds)
        assert a == b


class TestRepeatedCv:
    def setup_method(self):
        rng = np.random.default_rng(3)
        self.d = make(rng.random((50, 5)), rng.integers(0, 3, 50))
        self.subset = np.ones(5, bool)

    def test_single_repeat(self):
        folds = make_folds(50, 10, np.random.default_rng(9))
        assert repeated_cv(self.d, self.subset, 10, 1, np.random.default_rng(9)) == cv_accuracy(self.d, self.subset, folds)

    def test_mean_of_draws(self):
        rng = np.random.default_rng(4)
        expected = np.mean([cv_accuracy(self.d, self.subset, make_folds(50, 5, rng)) for _ in range(3)])
        assert repeated_cv(self.d, self.subset, 5, 3, np.random.default_rng(4)) == pytest.approx(expected, abs=1e-15)

    def test_deterministic(self):
        a = repeated_cv(self.d, self.subset, 10, 5, np.random.default_rng(7))
        b = repeated_cv(self.d, self.subset, 10, 5, np.random.default_rng(7))
        assert a == b

    def test_repeats_must_be_positive(self):
        with pytest.raises(ValueError):
            repeated_cv(self.d, self.subset, 10, 0, np.random.default_rng(0))
