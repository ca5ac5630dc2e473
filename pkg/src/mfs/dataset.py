"""Loading, preprocessing and fold assignment for tabular classification data.

Raw CSV tokens are kept as strings until :func:`finalize`, so that missing
markers survive loading and mode imputation works on the original values.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

MISSING = "?"
NOMINAL = "nominal"
CONTINUOUS = "continuous"


class DatasetError(ValueError):
    """Raised for malformed or unusable input data."""


@dataclass(frozen=True)
class RawTable:
    """Header plus token rows; the last column holds the class label."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    missing: str = MISSING

    def __post_init__(self):
        arity = len(self.header)
        if arity < 2:
            raise DatasetError("need at least one feature column and a label column")
        for i, row in enumerate(self.rows):
            if len(row) != arity:
                raise DatasetError(f"row {i + 1} has {len(row)} fields, expected {arity}")

    @property
    def arity(self) -> int:
        return len(self.header)

    def column(self, j: int) -> list[str]:
        return [row[j] for row in self.rows]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Preprocessed instance matrix with integer class labels.

    ``features`` is ``n_instances x n_features`` with every column scaled to
    [0, 1]; ``labels`` holds class indices in ``[0, n_classes)``.
    """

    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    feature_kinds: tuple[str, ...]
    feature_names: tuple[str, ...] = ()
    class_names: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
            raise DatasetError(f"feature matrix must be non-empty 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise DatasetError("labels must have one entry per instance")
        if np.isnan(X).any():
            raise DatasetError("feature matrix contains missing values")
        if y.min() < 0 or y.max() >= self.n_classes:
            raise DatasetError("labels out of range")
        if len(self.feature_kinds) != X.shape[1]:
            raise DatasetError("feature_kinds length does not match feature count")
        object.__setattr__(self, "features", _freeze(X))
        object.__setattr__(self, "labels", _freeze(y))
        if not self.feature_names:
            names = tuple(f"f{j}" for j in range(X.shape[1]))
            object.__setattr__(self, "feature_names", names)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.n_classes == other.n_classes
            and self.feature_kinds == other.feature_kinds
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """Maps each instance to a fold id in ``[0, k)``."""

    fold_of: np.ndarray
    k: int
    _members: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        fold_of = _freeze(np.asarray(self.fold_of, dtype=np.int64))
        object.__setattr__(self, "fold_of", fold_of)
        members = tuple(_freeze(np.flatnonzero(fold_of == f)) for f in range(self.k))
        object.__setattr__(self, "_members", members)

    @property
    def n_instances(self) -> int:
        return self.fold_of.shape[0]

    def test_indices(self, fold_id: int) -> np.ndarray:
        return self._members[fold_id]

    def train_indices(self, fold_id: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold_id)

    def sizes(self) -> list[int]:
        return [len(m) for m in self._members]


def load_csv(path, missing: str = MISSING) -> RawTable:
    """Read a comma-separated file with one header row.

    Tokens are stripped of surrounding whitespace and otherwise kept verbatim.
    Blank lines are ignored.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        records = [
            (lineno, [tok.strip() for tok in rec])
            for lineno, rec in enumerate(csv.reader(fh), start=1)
            if any(tok.strip() for tok in rec)
        ]
    if not records:
        raise DatasetError(f"{path}: empty file")
    _, header = records[0]
    rows = []
    for lineno, rec in records[1:]:
        if len(rec) != len(header):
            raise DatasetError(
                f"{path}: line {lineno} has {len(rec)} fields, expected {len(header)}"
            )
        rows.append(tuple(rec))
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return RawTable(tuple(header), tuple(rows), missing)


def impute_missing(t: RawTable) -> RawTable:
    """Replace every missing token with its column's most frequent value.

    Ties go to the value seen first. The label column is imputed the same way.
    """
    columns = [t.column(j) for j in range(t.arity)]
    for j, col in enumerate(columns):
        if t.missing not in col:
            continue
        counts = Counter(v for v in col if v != t.missing)
        if not counts:
            raise DatasetError(f"column {t.header[j]!r} has no observed values")
        # Counter preserves insertion order, and max() keeps the first maximum.
        mode = max(counts, key=counts.__getitem__)
        columns[j] = [mode if v == t.missing else v for v in col]
    rows = tuple(zip(*columns)) if t.rows else ()
    return RawTable(t.header, tuple(tuple(r) for r in rows), t.missing)


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def infer_kinds(t: RawTable) -> tuple[str, ...]:
    """Tag each feature column continuous if all its tokens parse as numbers."""
    kinds = []
    for j in range(t.arity - 1):
        col = [v for v in t.column(j) if v != t.missing]
        kinds.append(CONTINUOUS if col and all(map(_is_number, col)) else NOMINAL)
    return tuple(kinds)


def _first_seen_codes(col: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    index: dict[str, int] = {}
    codes = np.array([index.setdefault(v, len(index)) for v in col], dtype=np.int64)
    return codes, list(index)


def min_max_scale(v: np.ndarray) -> np.ndarray:
    """Scale to [0, 1]; a constant column maps to zeros."""
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v, dtype=np.float64)
    return (v - lo) / (hi - lo)


def _encode_labels(col: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    if all(map(_is_number, col)):
        values = sorted(set(col), key=lambda s: (float(s), s))
        index = {v: i for i, v in enumerate(values)}
        return np.array([index[v] for v in col], dtype=np.int64), values
    return _first_seen_codes(col)


def finalize(t: RawTable, kinds: Sequence[str] | None = None) -> Dataset:
    """Convert an imputed table to a numeric :class:`Dataset`.

    Nominal columns are coded by order of first appearance, then every column
    is min-max scaled. Numeric class labels are coded in ascending order,
    other labels by first appearance.
    """
    if not t.rows:
        raise DatasetError("table has no rows")
    n_feat = t.arity - 1
    kinds = tuple(kinds) if kinds is not None else infer_kinds(t)
    if len(kinds) != n_feat:
        raise DatasetError(f"expected {n_feat} feature kinds, got {len(kinds)}")

    X = np.empty((len(t.rows), n_feat), dtype=np.float64)
    for j, kind in enumerate(kinds):
        col = t.column(j)
        if t.missing in col:
            raise DatasetError(f"column {t.header[j]!r} still has missing values")
        if kind == CONTINUOUS:
            try:
                raw = np.array([float(v) for v in col])
            except ValueError as exc:
                raise DatasetError(f"column {t.header[j]!r}: {exc}") from None
            if not np.isfinite(raw).all():
                raise DatasetError(f"column {t.header[j]!r} has non-finite values")
        elif kind == NOMINAL:
            raw = _first_seen_codes(col)[0].astype(np.float64)
        else:
            raise DatasetError(f"unknown feature kind {kind!r}")
        X[:, j] = min_max_scale(raw)

    label_col = t.column(n_feat)
    if t.missing in label_col:
        raise DatasetError("label column still has missing values")
    y, class_names = _encode_labels(label_col)
    return Dataset(
        features=X,
        labels=y,
        n_classes=len(class_names),
        feature_kinds=kinds,
        feature_names=tuple(t.header[:n_feat]),
        class_names=tuple(class_names),
    )


def load_dataset(path, missing: str = MISSING, kinds: Sequence[str] | None = None) -> Dataset:
    """load_csv -> impute_missing -> finalize."""
    return finalize(impute_missing(load_csv(path, missing)), kinds)


def make_folds(n_instances: int, k: int, rng: np.random.Generator) -> FoldAssignment:
    """Deal a random permutation of the instances round-robin into ``k`` folds."""
    if k < 2 or k > n_instances:
        raise DatasetError(f"need 2 <= k <= n_instances, got k={k}, n={n_instances}")
    perm = rng.permutation(n_instances)
    fold_of = np.empty(n_instances, dtype=np.int64)
    fold_of[perm] = np.arange(n_instances) % k
    return FoldAssignment(fold_of, k)


def as_mask(subset, n_features: int) -> np.ndarray:
    """Validate a chromosome-like bit sequence and return it as a bool mask."""
    mask = np.asarray(subset, dtype=bool)
    if mask.shape != (n_features,):
        raise DatasetError(f"subset has length {mask.size}, expected {n_features}")
    if not mask.any():
        raise DatasetError("empty feature subset")
    return mask


def project(d: Dataset, subset) -> Dataset:
    """Restrict ``d`` to the columns whose bit is set."""
    mask = as_mask(subset, d.n_features)
    if mask.all():
        return d
    idx = np.flatnonzero(mask)
    return Dataset(
        features=d.features[:, idx],
        labels=d.labels,
        n_classes=d.n_classes,
        feature_kinds=tuple(d.feature_kinds[i] for i in idx),
        feature_names=tuple(d.feature_names[i] for i in idx),
        class_names=d.class_names,
    )
