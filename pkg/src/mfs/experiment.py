"""Multi-run experiment driver and report writer."""

from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .baselines import info_gain_weights, relieff_weights, select_top_m
from .classifier import repeated_cv
from .dataset import MISSING, Dataset, load_dataset
from .memetic import GAConfig, run_mfs

log = logging.getLogger(__name__)

RELIEFF_NEIGHBORS = 5
RELIEFF_SAMPLE = 30


@dataclass
class ExperimentConfig:
    """Resolved run settings; keys match the CLI flags in snake_case."""

    data: str = ""
    out: str = ""
    seed: int = 0
    runs: int = 5
    generations: int = 200
    pop: int = 30
    pc: float = 0.6
    pm: float = 0.1
    elite: int = 5
    ls_passes: int = 3
    elite_replacement: str = "if_not_worse"
    folds: int = 10
    cv_repeats: int = 10
    baselines: bool = False
    missing_token: str = MISSING

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.cv_repeats < 1:
            raise ValueError("cv_repeats must be >= 1")
        self.ga(0)

    @classmethod
    def from_dict(cls, values: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)

    def to_dict(self) -> dict:
        return asdict(self)

    def ga(self, seed: int) -> GAConfig:
        return GAConfig(
            population_size=self.pop,
            generations=self.generations,
            crossover_rate=self.pc,
            mutation_rate=self.pm,
            elite_size=self.elite,
            ls_passes=self.ls_passes,
            elite_replacement=self.elite_replacement,
            cv_folds=self.folds,
            seed=seed,
        )


@dataclass
class RunRecord:
    run: int
    seed: int
    subset: str
    cardinality: int
    fitness: float
    accuracy: float
    seconds: float
    relieff_accuracy: float | None = None
    ig_accuracy: float | None = None


@dataclass
class Summary:
    dataset: str
    n_instances: int
    n_features: int
    n_classes: int
    unselected: float
    best: float
    average: float
    mean_cardinality: float
    relieff: float | None = None
    ig: float | None = None


def run_seed(master: int, run: int) -> int:
    return master + run


def score_rng(seed: int) -> np.random.Generator:
    """Stream for the final repeated CV, distinct from the search stream of the same seed."""
    return np.random.default_rng([seed, 1])


def run_experiment(cfg: ExperimentConfig, d: Dataset | None = None) -> tuple[list[RunRecord], Summary]:
    """Run MFS ``cfg.runs`` times and score every winner with repeated CV."""
    if d is None:
        d = load_dataset(cfg.data, cfg.missing_token)
    score = lambda subset, seed: repeated_cv(d, subset, cfg.folds, cfg.cv_repeats, score_rng(seed))

    unselected = score(np.ones(d.n_features, dtype=bool), cfg.seed)
    log.info("unselected accuracy %.2f%%", 100 * unselected)

    rank_weights = {}
    if cfg.baselines:
        rank_weights["relieff"] = relieff_weights(
            d, RELIEFF_NEIGHBORS, RELIEFF_SAMPLE, np.random.default_rng([cfg.seed, 2])
        )
        rank_weights["ig"] = info_gain_weights(d)

    records = []
    for r in range(1, cfg.runs + 1):
        seed = run_seed(cfg.seed, r)
        t0 = time.perf_counter()
        res = run_mfs(d, cfg.ga(seed))
        acc = score(res.best, seed)
        rec = RunRecord(
            run=r,
            seed=seed,
            subset="".join("1" if b else "0" for b in res.best),
            cardinality=res.fitness.cardinality,
            fitness=res.fitness.accuracy,
            accuracy=acc,
            seconds=0.0,
        )
        for name, w in rank_weights.items():
            acc_b = score(select_top_m(w, rec.cardinality), seed)
            setattr(rec, f"{name}_accuracy", acc_b)
        rec.seconds = time.perf_counter() - t0
        log.info("run %d: %d features, accuracy %.2f%%", r, rec.cardinality, 100 * acc)
        records.append(rec)

    accs = [rec.accuracy for rec in records]
    summary = Summary(
        dataset=Path(cfg.data).name if cfg.data else "",
        n_instances=d.n_instances,
        n_features=d.n_features,
        n_classes=d.n_classes,
        unselected=unselected,
        best=max(accs),
        average=float(np.mean(accs)),
        mean_cardinality=float(np.mean([rec.cardinality for rec in records])),
    )
    if cfg.baselines:
        summary.relieff = float(np.mean([rec.relieff_accuracy for rec in records]))
        summary.ig = float(np.mean([rec.ig_accuracy for rec in records]))
    return records, summary


def pct(x: float | None, digits: int = 2) -> str:
    return "" if x is None else f"{100 * x:.{digits}f}"


RUN_COLUMNS = ("run", "seed", "subset", "cardinality", "fitness", "accuracy", "relieff_accuracy", "ig_accuracy")


def _write_runs(path: Path, records: list[RunRecord]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RUN_COLUMNS)
        for rec in records:
            w.writerow([
                rec.run,
                rec.seed,
                rec.subset,
                rec.cardinality,
                pct(rec.fitness, 4),
                pct(rec.accuracy, 4),
                pct(rec.relieff_accuracy, 4),
                pct(rec.ig_accuracy, 4),
            ])


def _write_summary(path: Path, s: Summary) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["dataset", "n_instances", "n_features", "n_classes", "unselected", "best", "average",
                    "mean_cardinality", "relieff", "ig"])
        w.writerow([s.dataset, s.n_instances, s.n_features, s.n_classes, pct(s.unselected), pct(s.best),
                    pct(s.average), f"{s.mean_cardinality:.1f}", pct(s.relieff), pct(s.ig)])


def _write_timings(path: Path, records: list[RunRecord]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run", "seconds"])
        for rec in records:
            w.writerow([rec.run, f"{rec.seconds:.3f}"])


def write_report(records: list[RunRecord], summary: Summary, out_dir, cfg: ExperimentConfig) -> list[Path]:
    """Write runs.csv, summary.csv, config.json and timings.csv into ``out_dir``.

    Wall-clock times go to timings.csv so the other three files are
    reproducible byte for byte. On any failure the files written so far are
    removed.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    targets = {
        "runs.csv": lambda p: _write_runs(p, records),
        "summary.csv": lambda p: _write_summary(p, summary),
        "config.json": lambda p: p.write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"),
        "timings.csv": lambda p: _write_timings(p, records),
    }
    written = []
    try:
        for name, write in targets.items():
            path = out / name
            written.append(path)
            write(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written
