"""Data generators: the six-class synthetic control chart series and small toy sets.

The control chart generator follows the published definitions of the UCI
"Synthetic Control Chart Time Series" data (Alcock & Manolopoulos, 1999):
every series is ``m + r*s`` plus a class-specific pattern, with ``m = 30``,
``s = 2`` and ``r`` uniform in [-3, 3] at every time step.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .dataset import CONTINUOUS, Dataset, min_max_scale

CONTROL_CLASSES = ("normal", "cyclic", "increasing", "decreasing", "upward", "downward")


def control_chart_series(
    n_per_class: int = 100, length: int = 60, rng: np.random.Generator | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Raw series ``(n_per_class * 6, length)`` and class ids 0..5 in blocks."""
    if rng is None:
        rng = np.random.default_rng()
    t = np.arange(1, length + 1, dtype=np.float64)
    rows, labels = [], []
    for c in range(len(CONTROL_CLASSES)):
        for _ in range(n_per_class):
            y = 30.0 + 2.0 * rng.uniform(-3.0, 3.0, size=length)
            if c == 1:
                a = rng.uniform(10.0, 15.0)
                period = rng.uniform(10.0, 15.0)
                y += a * np.sin(2.0 * np.pi * t / period)
            elif c in (2, 3):
                g = rng.uniform(0.2, 0.5)
                y += g * t if c == 2 else -g * t
            elif c in (4, 5):
                x = rng.uniform(7.5, 20.0)
                t3 = rng.integers(length // 3, 2 * length // 3 + 1)
                step = (t >= t3) * x
                y += step if c == 4 else -step
            rows.append(y)
            labels.append(c)
    return np.array(rows), np.array(labels, dtype=np.int64)


def synthetic_control(
    n_per_class: int = 100, length: int = 60, rng: np.random.Generator | None = None
) -> Dataset:
    """Control chart data as a scaled :class:`Dataset` (600 x 60, 6 classes by default)."""
    X, y = control_chart_series(n_per_class, length, rng)
    X = np.column_stack([min_max_scale(X[:, j]) for j in range(X.shape[1])])
    return Dataset(
        features=X,
        labels=y,
        n_classes=len(CONTROL_CLASSES),
        feature_kinds=(CONTINUOUS,) * length,
        feature_names=tuple(f"t{j + 1}" for j in range(length)),
        class_names=CONTROL_CLASSES,
    )


def write_control_chart_csv(path, n_per_class: int = 100, length: int = 60, seed: int = 0) -> Path:
    """Write the raw (unscaled) control chart series as a loader-compatible CSV."""
    X, y = control_chart_series(n_per_class, length, np.random.default_rng(seed))
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"t{j + 1}" for j in range(length)] + ["class"])
        for row, label in zip(X, y):
            w.writerow([f"{v:.4f}" for v in row] + [label + 1])
    return path


def relevant_noise_dataset(
    n_instances: int,
    n_relevant: int,
    n_noise: int,
    n_classes: int = 2,
    noise: float = 0.3,
    rng: np.random.Generator | None = None,
) -> Dataset:
    """Toy data: relevant features are noisy copies of the class code, the rest uniform noise.

    Relevant columns come first.
    """
    if rng is None:
        rng = np.random.default_rng()
    y = rng.integers(n_classes, size=n_instances)
    # Guarantee every class occurs so labels stay in range after coding.
    y[:n_classes] = np.arange(n_classes)
    cols = [y / max(1, n_classes - 1) + rng.normal(0.0, noise, n_instances) for _ in range(n_relevant)]
    cols += [rng.random(n_instances) for _ in range(n_noise)]
    X = np.column_stack([min_max_scale(c) for c in cols])
    return Dataset(
        features=X,
        labels=y,
        n_classes=n_classes,
        feature_kinds=(CONTINUOUS,) * X.shape[1],
    )
