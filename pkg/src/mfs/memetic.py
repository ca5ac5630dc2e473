"""Memetic feature selection: a genetic wrapper search whose elites are
refined by a filter-merit local search.

Chromosomes are boolean numpy arrays of length N. Wrapper fitness is the
1NN cross-validated accuracy on one fold assignment fixed for the whole run;
local search only consults the correlation merit.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .classifier import correct_count, sq_distances
from .dataset import Dataset, DatasetError, FoldAssignment, as_mask, make_folds
from .filter_metrics import CorrelationCache, build_cache, merit_of_indices

log = logging.getLogger(__name__)


# "always": a refined elite replaces its original unconditionally.
# "if_not_worse": only when its wrapper fitness is at least as good.
ELITE_REPLACEMENT = ("if_not_worse", "always")


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 30
    generations: int = 200
    crossover_rate: float = 0.6
    mutation_rate: float = 0.1
    elite_size: int = 5
    ls_passes: int = 3
    cv_folds: int = 10
    seed: int = 0
    elite_replacement: str = "if_not_worse"

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("crossover_rate", "mutation_rate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 1 <= self.elite_size <= self.population_size:
            raise ValueError("elite_size must lie in [1, population_size]")
        if self.ls_passes < 0:
            raise ValueError("ls_passes must be >= 0")
        if self.cv_folds < 2:
            raise ValueError("cv_folds must be >= 2")
        if self.elite_replacement not in ELITE_REPLACEMENT:
            raise ValueError(f"elite_replacement must be one of {ELITE_REPLACEMENT}")

    def to_dict(self) -> dict:
        return asdict(self)


@functools.total_ordering
@dataclass(frozen=True)
class FitnessValue:
    """Accuracy with cardinality as tie-breaker: fewer features wins an exact tie."""

    accuracy: float
    cardinality: int

    @property
    def key(self) -> tuple[float, int]:
        return (self.accuracy, -self.cardinality)

    def __lt__(self, other):
        if not isinstance(other, FitnessValue):
            return NotImplemented
        return self.key < other.key

    def __eq__(self, other):
        if not isinstance(other, FitnessValue):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)


@dataclass
class Member:
    chromosome: np.ndarray
    fitness: FitnessValue | None = None


def _repair(c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if not c.any():
        c[rng.integers(c.size)] = True
    return c


def init_population(cfg: GAConfig, n_features: int, rng: np.random.Generator) -> list[Member]:
    """Random bitstrings, each bit set with probability 1/2; empty draws get one random bit."""
    if n_features < 1:
        raise ValueError("need at least one feature")
    pop = []
    for _ in range(cfg.population_size):
        c = rng.random(n_features) < 0.5
        pop.append(Member(_repair(c, rng)))
    return pop


class FitnessEvaluator:
    """Wrapper fitness over a fixed fold assignment, memoised by bit pattern.

    Per-feature squared-difference matrices are precomputed when they fit in
    ``memory_limit`` bytes, so a subset's distance matrix is a sum of slices.
    """

    def __init__(self, d: Dataset, folds: FoldAssignment, memory_limit: int = 256 << 20):
        if folds.n_instances != d.n_instances:
            raise DatasetError("fold assignment does not match dataset size")
        self.d = d
        self.folds = folds
        self.memo: dict[bytes, FitnessValue] = {}
        self.evaluations = 0
        n, N = d.n_instances, d.n_features
        self._per_feature = None
        if n * n * N * 8 <= memory_limit:
            X = d.features
            self._per_feature = np.stack(
                [np.square(X[:, j, None] - X[None, :, j]) for j in range(N)]
            )

    def _distances(self, mask: np.ndarray) -> np.ndarray:
        if self._per_feature is not None:
            D = np.zeros(self._per_feature.shape[1:])
            for j in np.flatnonzero(mask):
                D += self._per_feature[j]
            return D
        X = self.d.features[:, mask]
        return sq_distances(X, X)

    def __call__(self, chromosome) -> FitnessValue:
        mask = as_mask(chromosome, self.d.n_features)
        key = np.packbits(mask).tobytes()
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.evaluations += 1
        correct = correct_count(self._distances(mask), self.d.labels, self.folds)
        fit = FitnessValue(correct / self.d.n_instances, int(mask.sum()))
        self.memo[key] = fit
        return fit


def evaluate_fitness(chromosome, d: Dataset, folds: FoldAssignment, cache: FitnessEvaluator | None = None) -> FitnessValue:
    """Wrapper fitness of one chromosome; pass a :class:`FitnessEvaluator` to share its memo."""
    if cache is None:
        cache = FitnessEvaluator(d, folds, memory_limit=0)
    elif cache.d is not d or cache.folds is not folds:
        raise ValueError("evaluator was built for a different dataset or fold assignment")
    return cache(chromosome)


def rank_order(pop: list[Member]) -> list[int]:
    """Indices of ``pop`` from best to worst; equal fitness keeps population order."""
    for m in pop:
        if m.fitness is None:
            raise ValueError("population contains unevaluated members")
    return sorted(range(len(pop)), key=lambda i: pop[i].fitness, reverse=True)


def rank_probabilities(m: int) -> np.ndarray:
    """Linear ranking: rank i (1 = best) is chosen with probability 2(m-i+1)/(m(m+1))."""
    ranks = np.arange(1, m + 1)
    return 2.0 * (m - ranks + 1) / (m * (m + 1))


def select_parents(pop: list[Member], rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two independent rank-based roulette spins; the same member may be drawn twice."""
    order = rank_order(pop)
    p = rank_probabilities(len(pop))
    a, b = rng.choice(len(pop), size=2, p=p)
    return pop[order[a]].chromosome, pop[order[b]].chromosome


def crossover(p1, p2, pc: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """One-point crossover with cut point uniform in [1, N-1], applied with probability ``pc``."""
    p1 = np.asarray(p1, dtype=bool)
    p2 = np.asarray(p2, dtype=bool)
    if p1.shape != p2.shape:
        raise ValueError("parents differ in length")
    o1, o2 = p1.copy(), p2.copy()
    n = p1.size
    if n < 2 or rng.random() >= pc:
        return o1, o2
    cut = int(rng.integers(1, n))
    o1[cut:], o2[cut:] = p2[cut:], p1[cut:]
    return o1, o2


def mutate(c, pm: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit with probability ``pm``; an emptied chromosome gets one random bit back."""
    c = np.asarray(c, dtype=bool)
    flips = rng.random(c.size) < pm
    return _repair(c ^ flips, rng)


def local_search(c, cache: CorrelationCache, passes: int, rng: np.random.Generator) -> np.ndarray:
    """Filter-guided bit-flip hill climbing.

    Each pass visits every position in a fresh random order and flips it
    (adding or deleting that feature). The flip is kept only if the merit
    strictly improves. Deleting the last selected feature is never tried.
    """
    best = np.array(c, dtype=bool)
    if not best.any():
        raise ValueError("empty feature subset")
    best_merit = merit_of_indices(cache, np.flatnonzero(best))
    for _ in range(passes):
        for j in rng.permutation(best.size):
            if best[j] and best.sum() == 1:
                continue
            best[j] = not best[j]
            m = merit_of_indices(cache, np.flatnonzero(best))
            if m > best_merit:
                best_merit = m
            else:
                best[j] = not best[j]
    return best


@dataclass
class MFSResult:
    best: np.ndarray
    fitness: FitnessValue
    history: list[FitnessValue] = field(default_factory=list)
    evaluations: int = 0
    folds: FoldAssignment | None = None


def run_mfs(d: Dataset, cfg: GAConfig, rng: np.random.Generator | None = None) -> MFSResult:
    """Run the memetic search and return the best chromosome found.

    All random draws (fold assignment, initial population, local search,
    operators) come from one stream seeded by ``cfg.seed`` unless ``rng``
    is given.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    folds = make_folds(d.n_instances, cfg.cv_folds, rng)
    evaluate = FitnessEvaluator(d, folds)
    merit_cache = build_cache(d)

    pop = init_population(cfg, d.n_features, rng)
    best: Member | None = None
    history: list[FitnessValue] = []

    def consider(m: Member):
        nonlocal best
        if best is None or m.fitness > best.fitness:
            best = Member(m.chromosome.copy(), m.fitness)

    for gen in range(cfg.generations):
        for m in pop:
            if m.fitness is None:
                m.fitness = evaluate(m.chromosome)
            consider(m)

        order = rank_order(pop)
        for i in order[: cfg.elite_size]:
            refined = local_search(pop[i].chromosome, merit_cache, cfg.ls_passes, rng)
            candidate = Member(refined, evaluate(refined))
            if cfg.elite_replacement == "always" or candidate.fitness >= pop[i].fitness:
                pop[i] = candidate
            consider(pop[i])
        history.append(best.fitness)
        log.debug("generation %d best %s", gen, best.fitness)

        if gen == cfg.generations - 1:
            break
        nxt = [Member(pop[i].chromosome.copy(), pop[i].fitness) for i in order[: cfg.elite_size]]
        while len(nxt) < cfg.population_size:
            p1, p2 = select_parents(pop, rng)
            for child in crossover(p1, p2, cfg.crossover_rate, rng):
                if len(nxt) < cfg.population_size:
                    nxt.append(Member(mutate(child, cfg.mutation_rate, rng)))
        pop = nxt

    return MFSResult(best.chromosome, best.fitness, history, evaluate.evaluations, folds)
