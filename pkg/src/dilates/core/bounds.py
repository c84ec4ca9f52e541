from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional
import logging

from .errors import HypothesisError, InvalidParameterError
from .lattice import coset_partition
from .pointset import (
    PointSet, affine_rank, dilate, require_dilation_factor, sumset_size
)
from .structure import line_cover_number, min_hyperplane_cover


class BoundKind(Enum):
    """Explicit bounds can fail; slope-only bounds only report slack."""
    EXPLICIT = "explicit"
    SLOPE = "slope"


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SLACK = "SLACK"
    NOT_APPLICABLE = "N/A"


@dataclass(frozen=True)
class BoundSpec:
    name: str
    kind: BoundKind
    slope: int
    constant: Optional[int]
    hypothesis: str


@dataclass(frozen=True)
class BoundRow:
    name: str
    kind: BoundKind
    slope: int
    verdict: Verdict
    computed: Optional[int] = None
    required: Optional[int] = None
    slack: Optional[int] = None
    hypothesis: str = ""


@dataclass(frozen=True)
class SetSummary:
    size: int
    dim: int
    rank: int
    cosets: int
    q: int
    line_cover: Optional[int] = None
    hyperplane_cover: Optional[int] = None


@dataclass(frozen=True)
class BoundReport:
    summary: SetSummary
    computed: int
    rows: List[BoundRow] = field(default_factory=list)

    def failures(self) -> List[BoundRow]:
        return [row for row in self.rows if row.verdict == Verdict.FAIL]

    def row(self, name: str) -> BoundRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)


def _triangular(d: int) -> int:
    num = d * (d + 1)
    assert num % 2 == 0
    return num // 2


def _check_cardinality(value: int, what: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InvalidParameterError(f"{what} must be a positive integer, got {value!r}")


def ruzsa_bound(nA: int, nB: int, d: int) -> int:
    """|A| + d|B| - d(d+1)/2, valid when |A| >= |B| and A + B has rank d."""
    _check_cardinality(nA, "|A|")
    _check_cardinality(nB, "|B|")
    _check_cardinality(d, "d")
    if nA < nB:
        raise HypothesisError(f"the sumset bound needs |A| >= |B|, got {nA} < {nB}")
    return nA + d * nB - _triangular(d)


def freiman_doubling_bound(n: int, d: int) -> int:
    """(d+1)|A| - d(d+1)/2 for |A + A|."""
    return ruzsa_bound(n, n, d)


def lemma_fd_bound(n: int, r: int, d: int) -> int:
    """(d+r)|A| - r·d(d+1)/2 for a set meeting r cosets of q·Z^d."""
    _check_cardinality(n, "|A|")
    _check_cardinality(r, "r")
    _check_cardinality(d, "d")
    if r > n:
        raise InvalidParameterError(f"a set of {n} points cannot meet {r} cosets")
    return (d + r) * n - r * _triangular(d)


def q2_bound(n: int, d: int) -> int:
    """(2d+1)|A| - d(d+1)^2/2 for every rank-d A and |q| > 1."""
    _check_cardinality(d, "d")
    if n < d + 1:
        raise InvalidParameterError(f"a rank-{d} set has at least {d + 1} points, got {n}")
    num = d * (d + 1) ** 2
    assert num % 2 == 0
    return (2 * d + 1) * n - num // 2


def slope_catalog(q: int, d: int) -> List[BoundSpec]:
    """Slope-only lower bounds whose additive constants are left unspecified."""
    q = require_dilation_factor(q)
    _check_cardinality(d, "d")
    k = abs(q)
    specs = [BoundSpec("baseline", BoundKind.SLOPE, k + 1, None, "finite A, any rank")]
    if d >= 2:
        specs.append(BoundSpec("main", BoundKind.SLOPE, k + d + 1, None, "rank d >= 2"))
    if d == 3:
        specs.append(BoundSpec("d3", BoundKind.SLOPE, k + 5, None, "rank 3 in Z^3"))
    specs.append(BoundSpec("conjecture", BoundKind.SLOPE, k + 2 * d - 1, None, "rank d"))
    return specs


def conditional_catalog(q: int, d: int) -> List[BoundSpec]:
    """Slope-only bounds whose hypothesis is a structural cover of A."""
    q = require_dilation_factor(q)
    _check_cardinality(d, "d")
    k = abs(q)
    specs = []
    if d >= 2:
        specs.append(BoundSpec("special_lines", BoundKind.SLOPE, k + 2 * d - 1, None,
                               f"rank d, on at most {d} parallel lines"))
    if d == 3:
        specs.append(BoundSpec("two_hyperplanes", BoundKind.SLOPE, k + 5, None,
                               "rank 3, on two parallel planes"))
        specs.append(BoundSpec("four_lines", BoundKind.SLOPE, k + 5, None,
                               "rank 3, on at most four parallel lines"))
    return specs


def _explicit_row(name: str, computed: int, required: Optional[int], hypothesis: str) -> BoundRow:
    if required is None:
        return BoundRow(name, BoundKind.EXPLICIT, 0, Verdict.NOT_APPLICABLE, hypothesis=hypothesis)
    verdict = Verdict.PASS if computed >= required else Verdict.FAIL
    return BoundRow(name, BoundKind.EXPLICIT, 0, verdict, computed=computed, required=required,
                    slack=computed - required, hypothesis=hypothesis)


def _slope_row(spec: BoundSpec, computed: int, n: int, applies: bool) -> BoundRow:
    if not applies:
        return BoundRow(spec.name, spec.kind, spec.slope, Verdict.NOT_APPLICABLE, hypothesis=spec.hypothesis)
    return BoundRow(spec.name, spec.kind, spec.slope, Verdict.SLACK, computed=computed,
                    required=spec.slope * n, slack=computed - spec.slope * n, hypothesis=spec.hypothesis)


def evaluate_bounds(A: PointSet, q: int) -> BoundReport:
    """Evaluate every bound in the catalog against one concrete set."""
    q = require_dilation_factor(q)
    if not A.points:
        raise InvalidParameterError("cannot evaluate bounds on an empty set")
    n, d = len(A), A.dim
    rank = affine_rank(A)
    full = rank == d
    r = coset_partition(A, q).r
    computed = sumset_size(A, dilate(A, q))

    lines = line_cover_number(A).count if n >= 2 else None
    planes = min_hyperplane_cover(A).count if full and d >= 2 else None
    summary = SetSummary(size=n, dim=d, rank=rank, cosets=r, q=q, line_cover=lines, hyperplane_cover=planes)

    rows = [
        # B = q·A has |B| = |A| and A + q·A has the rank of A
        _explicit_row("ruzsa", computed, ruzsa_bound(n, n, d) if full else None,
                      "|A| >= |B| = |qA|, rank(A + qA) = d"),
        _explicit_row("lemma_fd", computed, lemma_fd_bound(n, r, d) if full else None,
                      f"rank d, meets r = {r} cosets"),
        _explicit_row("q2", computed, q2_bound(n, d) if full else None, "rank d, |q| > 1"),
    ]
    doubling = sumset_size(A, A) if full else 0
    rows.append(_explicit_row("freiman_doubling", doubling,
                              freiman_doubling_bound(n, d) if full else None, "rank d, B = A"))

    for spec in slope_catalog(q, d):
        applies = spec.name == "baseline" or full
        rows.append(_slope_row(spec, computed, n, applies))
    for spec in conditional_catalog(q, d):
        if spec.name == "special_lines":
            applies = full and lines is not None and lines <= d
        elif spec.name == "two_hyperplanes":
            applies = full and planes is not None and planes <= 2
        else:
            applies = full and lines is not None and lines <= 4
        rows.append(_slope_row(spec, computed, n, applies))

    report = BoundReport(summary=summary, computed=computed, rows=rows)
    for row in report.failures():
        logging.error(f"bound {row.name} failed: {row.computed} < {row.required} on {A.to_lists()} (q={q})")
    return report
