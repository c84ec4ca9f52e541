from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple
import logging

import numpy as np
from tqdm import tqdm

from ..config import DEFAULT_BUDGET
from ..core.bounds import lemma_fd_bound, q2_bound, slope_catalog
from ..core.errors import (
    BudgetExceededError, EmptySearchSpaceError, InvalidParameterError, TheoremViolation
)
from ..core.lattice import coset_partition
from ..core.pointset import (
    Point, PointSet, bareiss_rank, canonical_points, count_sum_of_dilates,
    require_dilation_factor
)
from ..generator.constructions import construct_AN

# random mode draws samples in fixed blocks so results do not depend on the worker count
SAMPLE_BLOCK = 1024

Candidate = Tuple[Point, ...]


class SearchMode(Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"
    CONSTRUCTION = "construction"


@dataclass(frozen=True)
class SearchTask:
    """One search for the minimum of |A + q·A| over rank-d n-subsets of {0..grid}^d."""
    d: int
    q: int
    n: int
    grid: int
    mode: SearchMode = SearchMode.EXHAUSTIVE
    samples: Optional[int] = None
    seed: Optional[int] = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        require_dilation_factor(self.q)
        if self.d < 1:
            raise InvalidParameterError(f"d must be positive, got {self.d}")
        if self.n < 1:
            raise InvalidParameterError(f"n must be positive, got {self.n}")
        if self.grid < 1:
            raise InvalidParameterError(f"grid bound must be positive, got {self.grid}")
        if self.budget < 1:
            raise InvalidParameterError(f"budget must be positive, got {self.budget}")
        if self.mode == SearchMode.RANDOM:
            if self.samples is None or self.samples < 1:
                raise InvalidParameterError("random search needs a positive sample count")
            if self.seed is None or self.seed < 0:
                raise InvalidParameterError("random search needs an explicit nonnegative seed")
        elif self.mode != SearchMode.EXHAUSTIVE:
            raise InvalidParameterError(f"cannot search in {self.mode.value} mode")

    @property
    def grid_size(self) -> int:
        return (self.grid + 1) ** self.d

    def candidate_count(self) -> int:
        if self.mode == SearchMode.RANDOM:
            return self.samples
        return comb(self.grid_size, self.n)

    def check_budget(self) -> None:
        needed = self.candidate_count()
        if needed > self.budget:
            raise BudgetExceededError(required=needed, budget=self.budget)


@dataclass(frozen=True)
class SlackRow:
    name: str
    slope: int
    slack: int


@dataclass(frozen=True)
class ExtremalRecord:
    n: int
    d: int
    q: int
    mode: SearchMode
    min_value: int
    witness: PointSet
    floor: int
    classes_examined: int
    slack: Tuple[SlackRow, ...] = ()
    rank_deficient: int = 0
    grid: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    construction_value: Optional[int] = None


@dataclass(frozen=True)
class ConstantFit:
    constant: int
    at_n: int


@dataclass(frozen=True)
class ChunkResult:
    """Partial search state. merge() is associative and commutative."""
    best_value: Optional[int] = None
    best: Optional[Candidate] = None
    classes: int = 0
    rank_deficient: int = 0
    seen: FrozenSet[Candidate] = field(default_factory=frozenset)
    deficient: FrozenSet[Candidate] = field(default_factory=frozenset)

    def offer(self, value: int, candidate: Candidate) -> "ChunkResult":
        if self.best_value is None or (value, candidate) < (self.best_value, self.best):
            return replace(self, best_value=value, best=candidate)
        return self

    def merge(self, other: "ChunkResult") -> "ChunkResult":
        merged = self
        if other.best_value is not None:
            merged = merged.offer(other.best_value, other.best)
        return replace(
            merged,
            classes=self.classes + other.classes,
            rank_deficient=self.rank_deficient + other.rank_deficient,
            seen=self.seen | other.seen,
            deficient=self.deficient | other.deficient,
        )


@lru_cache(maxsize=None)
def grid_points(d: int, grid: int) -> Tuple[Point, ...]:
    """All points of {0..grid}^d in lexicographic order."""
    return tuple(product(range(grid + 1), repeat=d))


def _rank(candidate: Candidate) -> int:
    base = candidate[0]
    return bareiss_rank([[x - y for x, y in zip(p, base)] for p in candidate[1:]])


def _touches_every_floor(candidate: Candidate, d: int) -> bool:
    return all(any(p[i] == 0 for p in candidate) for i in range(d))


def _canonical_candidates(d: int, n: int, grid: int, first: int) -> Iterator[Candidate]:
    """Canonical n-subsets of the grid whose lexicographically first point is grid[first]."""
    points = grid_points(d, grid)
    head = points[first]
    for tail in combinations(points[first + 1:], n - 1):
        candidate = (head,) + tail
        if not _touches_every_floor(candidate, d):
            continue
        if canonical_points(candidate, d) == candidate:
            yield candidate


def _prefixes(d: int, n: int, grid: int) -> List[int]:
    # a canonical set has first coordinate 0 at its least point
    points = grid_points(d, grid)
    return [i for i, p in enumerate(points) if p[0] == 0 and i + n <= len(points)]


class CanonicalEnumerator:
    """Iterates one representative per canonical class of rank-d n-subsets of the grid.

    Rank-deficient classes are skipped and counted in rank_deficient.
    """

    def __init__(self, d: int, n: int, grid: int, budget: int = DEFAULT_BUDGET):
        self.task = SearchTask(d=d, q=2, n=n, grid=grid, budget=budget)
        self.task.check_budget()
        self.rank_deficient = 0

    def __iter__(self) -> Iterator[PointSet]:
        d, n, grid = self.task.d, self.task.n, self.task.grid
        for first in _prefixes(d, n, grid):
            for candidate in _canonical_candidates(d, n, grid, first):
                if _rank(candidate) < d:
                    self.rank_deficient += 1
                    continue
                yield PointSet.trusted(d, candidate)


def enumerate_canonical(d: int, n: int, grid: int, budget: int = DEFAULT_BUDGET) -> Iterator[PointSet]:
    return iter(CanonicalEnumerator(d, n, grid, budget))


def scan_prefix(job: Tuple[int, int, int, int, int]) -> ChunkResult:
    """Exhaustive chunk: every canonical candidate sharing one first point."""
    d, n, q, grid, first = job
    result = ChunkResult()
    classes = deficient = 0
    for candidate in _canonical_candidates(d, n, grid, first):
        if _rank(candidate) < d:
            deficient += 1
            continue
        classes += 1
        result = result.offer(count_sum_of_dilates(candidate, q), candidate)
    return replace(result, classes=classes, rank_deficient=deficient)


def scan_block(job: Tuple[int, int, int, int, int, int, int]) -> ChunkResult:
    """Random chunk: count samples drawn with the generator seeded by [seed, block]."""
    d, n, q, grid, seed, block, count = job
    points = grid_points(d, grid)
    rng = np.random.default_rng([seed, block])
    # every sampled class travels back to the parent for cross-block dedup,
    # so memory grows with the sample count
    seen, deficient = set(), set()
    result = ChunkResult()
    for _ in range(count):
        picks = rng.choice(len(points), size=n, replace=False)
        candidate = canonical_points(sorted(points[int(i)] for i in picks), d)
        if candidate in seen or candidate in deficient:
            continue
        if _rank(candidate) < d:
            deficient.add(candidate)
            continue
        seen.add(candidate)
        result = result.offer(count_sum_of_dilates(candidate, q), candidate)
    return replace(result, seen=frozenset(seen), deficient=frozenset(deficient))


def _construction_candidate(d: int, n: int) -> Optional[Candidate]:
    N = n - d + 2
    if d < 2 or N < 3:
        return None
    A = construct_AN(d, N)
    return canonical_points(A.points, d)


class SearchEngine:
    def __init__(self, task: SearchTask, workers: int = 1, progress: bool = False):
        if workers < 1:
            raise InvalidParameterError(f"workers must be positive, got {workers}")
        self.task = task
        self.workers = workers
        self.progress = progress

    def _jobs(self) -> list:
        t = self.task
        if t.mode == SearchMode.EXHAUSTIVE:
            return [(t.d, t.n, t.q, t.grid, first) for first in _prefixes(t.d, t.n, t.grid)]
        if t.n > t.grid_size:
            return []
        jobs = []
        for block, start in enumerate(range(0, t.samples, SAMPLE_BLOCK)):
            jobs.append((t.d, t.n, t.q, t.grid, t.seed, block, min(SAMPLE_BLOCK, t.samples - start)))
        return jobs

    def _execute(self, jobs: list) -> Iterator[ChunkResult]:
        worker = scan_prefix if self.task.mode == SearchMode.EXHAUSTIVE else scan_block
        label = f"{self.task.mode.value} d={self.task.d} n={self.task.n}"
        if self.workers == 1 or len(jobs) <= 1:
            yield from tqdm(map(worker, jobs), total=len(jobs), disable=not self.progress, desc=label)
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            yield from tqdm(pool.map(worker, jobs), total=len(jobs), disable=not self.progress, desc=label)

    def run(self) -> ExtremalRecord:
        """Search for the minimum and return a reproducible record."""
        t = self.task
        t.check_budget()
        jobs = self._jobs()
        logging.info(f"search d={t.d} q={t.q} n={t.n} grid={t.grid}: {len(jobs)} chunks, {self.workers} workers")
        merged = ChunkResult()
        for chunk in self._execute(jobs):
            merged = merged.merge(chunk)

        construction = _construction_candidate(t.d, t.n)
        construction_value = None
        if construction is not None:
            construction_value = count_sum_of_dilates(construction, t.q)
            if all(c <= t.grid for p in construction for c in p):
                merged = merged.offer(construction_value, construction)

        if merged.best_value is None:
            raise EmptySearchSpaceError(f"no rank-{t.d} subset of size {t.n} in {{0..{t.grid}}}^{t.d}")

        if t.mode == SearchMode.RANDOM:
            classes, deficient = len(merged.seen), len(merged.deficient)
        else:
            classes, deficient = merged.classes, merged.rank_deficient
        witness = PointSet.trusted(t.d, merged.best)
        record = ExtremalRecord(
            n=t.n, d=t.d, q=t.q, mode=t.mode,
            min_value=merged.best_value,
            witness=witness,
            floor=q2_bound(t.n, t.d),
            classes_examined=classes,
            slack=tuple(SlackRow(s.name, s.slope, merged.best_value - s.slope * t.n)
                        for s in slope_catalog(t.q, t.d)),
            rank_deficient=deficient,
            grid=t.grid,
            samples=t.samples,
            seed=t.seed,
            construction_value=construction_value,
        )
        check_floors(record)
        return record


def check_floors(record: ExtremalRecord) -> None:
    """Raise TheoremViolation if a reported minimum undercuts a proven lower bound."""
    r = coset_partition(record.witness, record.q).r
    fd_floor = lemma_fd_bound(record.n, r, record.d)
    for name, floor in (("q2", record.floor), ("lemma_fd", fd_floor)):
        if record.min_value < floor:
            logging.error(f"search minimum {record.min_value} undercuts {name} floor {floor}: "
                          f"{record.witness.to_lists()} (q={record.q})")
            raise TheoremViolation(f"minimum {record.min_value} < {name} floor {floor}",
                                   witness=record.witness, q=record.q)


def search_min(task: SearchTask, workers: int = 1, progress: bool = False) -> ExtremalRecord:
    return SearchEngine(task, workers=workers, progress=progress).run()


def construction_record(d: int, N: int, q: int) -> ExtremalRecord:
    """An ExtremalRecord whose only candidate is A_N."""
    q = require_dilation_factor(q)
    A = construct_AN(d, N)
    candidate = canonical_points(A.points, d)
    value = count_sum_of_dilates(candidate, q)
    n = len(A)
    return ExtremalRecord(
        n=n, d=d, q=q, mode=SearchMode.CONSTRUCTION,
        min_value=value,
        witness=PointSet.trusted(d, candidate),
        floor=q2_bound(n, d) if n >= d + 1 else value,
        classes_examined=1,
        slack=tuple(SlackRow(s.name, s.slope, value - s.slope * n) for s in slope_catalog(q, d)),
        construction_value=value,
    )


def fit_additive_constant(records: Sequence[ExtremalRecord], slope: int) -> ConstantFit:
    """Smallest C with min_value >= slope·n - C on every record, and the n attaining it."""
    if not records:
        raise InvalidParameterError("no records to fit")
    shapes = {(r.d, r.q) for r in records}
    if len(shapes) > 1:
        raise InvalidParameterError(f"records mix (d, q) settings: {sorted(shapes)}")
    constant, at_n = max((slope * r.n - r.min_value, -r.n) for r in records)
    return ConstantFit(constant=constant, at_n=-at_n)
