from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import gcd
from operator import index
from typing import Dict, List, Sequence, Tuple, Union
import logging

from .errors import HypothesisError, InvalidParameterError, TheoremViolation
from .pointset import (
    Matrix, Point, PointSet, affine_rank, dilate, integer_determinant,
    mat_vec, require_dilation_factor, sumset_size
)

# Smallest |A' + q·A'| for four points of rank 2 in the plane
FOUR_LINES_QUOTIENT_FLOOR = 14


@dataclass(frozen=True, order=True)
class Direction:
    """Primitive integer vector with first nonzero coordinate positive."""
    v: Point

    @classmethod
    def from_vector(cls, vector: Sequence[int]) -> "Direction":
        v = [index(x) for x in vector]
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 0:
            raise InvalidParameterError("zero vector has no direction")
        v = [x // g for x in v]
        if next(x for x in v if x) < 0:
            v = [-x for x in v]
        return cls(tuple(v))

    @property
    def dim(self) -> int:
        return len(self.v)


class CoverKind(Enum):
    LINES = "lines"
    HYPERPLANES = "hyperplanes"


@dataclass(frozen=True)
class CoverReport:
    kind: CoverKind
    count: int
    witness: Direction
    classes: Tuple[PointSet, ...]


def _as_direction(direction: Union[Direction, Sequence[int]]) -> Direction:
    if isinstance(direction, Direction):
        return direction
    return Direction.from_vector(direction)


def _line_key(p: Point, v: Point, pivot: int) -> Tuple[int, ...]:
    # p, p' share a line parallel to v iff all minors v_k p_i - v_i p_k agree
    return tuple(v[pivot] * p[i] - v[i] * p[pivot] for i in range(len(v)) if i != pivot)


def _group(points: Sequence[Point], key) -> Dict[Tuple[int, ...], List[Point]]:
    groups: Dict[Tuple[int, ...], List[Point]] = {}
    for p in points:
        groups.setdefault(key(p), []).append(p)
    return groups


def line_classes(A: PointSet, direction: Union[Direction, Sequence[int]]) -> Tuple[PointSet, ...]:
    """Intersections of A with the lines parallel to direction, ordered by line."""
    v = _as_direction(direction).v
    if len(v) != A.dim:
        raise InvalidParameterError(f"direction has dimension {len(v)}, set has {A.dim}")
    pivot = next(i for i, x in enumerate(v) if x)
    groups = _group(A.points, lambda p: _line_key(p, v, pivot))
    return tuple(PointSet.trusted(A.dim, tuple(groups[k])) for k in sorted(groups))


def _difference_directions(A: PointSet) -> List[Direction]:
    return sorted({
        Direction.from_vector([x - y for x, y in zip(b, a)])
        for a, b in combinations(A.points, 2)
    })


def line_cover_number(A: PointSet) -> CoverReport:
    """Fewest parallel lines covering A, minimised over all pairwise-difference directions."""
    if len(A) < 2:
        raise InvalidParameterError("line cover needs at least two points")
    best = None
    for direction in _difference_directions(A):
        v = direction.v
        pivot = next(i for i, x in enumerate(v) if x)
        count = len({_line_key(p, v, pivot) for p in A.points})
        # candidates come sorted, so strict < keeps the lexicographically least witness
        if best is None or count < best[0]:
            best = (count, direction)
            if count == 1:
                break
    count, direction = best
    # every point on its own line is never better than a pair sharing one
    assert count <= len(A) - 1
    return CoverReport(
        kind=CoverKind.LINES,
        count=count,
        witness=direction,
        classes=line_classes(A, direction),
    )


def hyperplane_cover_count(A: PointSet, normal: Union[Direction, Sequence[int]]) -> int:
    """Number of parallel hyperplanes with the given normal needed to cover A."""
    if A.dim < 2:
        raise InvalidParameterError("hyperplane covers need d >= 2")
    n = _as_direction(normal).v
    if len(n) != A.dim:
        raise InvalidParameterError(f"normal has dimension {len(n)}, set has {A.dim}")
    return len({sum(a * b for a, b in zip(n, p)) for p in A.points})


def generalized_cross(vectors: Sequence[Sequence[int]]) -> Point:
    """Integer vector orthogonal to d-1 vectors in Z^d (cofactor expansion)."""
    dim = len(vectors) + 1
    out = []
    for i in range(dim):
        minor = [[row[j] for j in range(dim) if j != i] for row in vectors]
        sign = -1 if i % 2 else 1
        out.append(sign * integer_determinant(minor))
    return tuple(out)


def min_hyperplane_cover(A: PointSet) -> CoverReport:
    """Fewest parallel hyperplanes covering A.

    Candidate normals are those of hyperplanes spanned by d-1 independent
    pairwise differences of A.
    """
    if A.dim < 2:
        raise InvalidParameterError("hyperplane covers need d >= 2")
    rank = affine_rank(A)
    if rank < A.dim:
        raise HypothesisError(f"rank < d: affine rank {rank}, dimension {A.dim}")
    directions = [d.v for d in _difference_directions(A)]
    normals = set()
    for combo in combinations(directions, A.dim - 1):
        cross = generalized_cross(combo)
        if any(cross):
            normals.add(Direction.from_vector(cross))
    best = None
    for normal in sorted(normals):
        count = hyperplane_cover_count(A, normal)
        if best is None or count < best[0]:
            best = (count, normal)
            if count == 2:
                break
    count, normal = best
    groups = _group(A.points, lambda p: (sum(a * b for a, b in zip(normal.v, p)),))
    classes = tuple(PointSet.trusted(A.dim, tuple(groups[k])) for k in sorted(groups))
    return CoverReport(kind=CoverKind.HYPERPLANES, count=count, witness=normal, classes=classes)


def unimodular_completion(direction: Union[Direction, Sequence[int]]) -> Matrix:
    """Unimodular U with U·v = e_1 for a primitive v, built from integer row operations."""
    v = _as_direction(direction).v
    dim = len(v)
    w = list(v)
    U = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    while sum(1 for x in w if x) > 1:
        p = min((i for i in range(dim) if w[i]), key=lambda i: (abs(w[i]), i))
        for k in range(dim):
            if k != p and w[k]:
                f = w[k] // w[p]
                w[k] -= f * w[p]
                U[k] = [a - f * b for a, b in zip(U[k], U[p])]
    p = next(i for i in range(dim) if w[i])
    w[0], w[p] = w[p], w[0]
    U[0], U[p] = U[p], U[0]
    if w[0] < 0:
        w[0] = -w[0]
        U[0] = [-a for a in U[0]]
    assert w[0] == 1, "direction must be primitive"
    return tuple(tuple(row) for row in U)


def project_along(A: PointSet, direction: Union[Direction, Sequence[int]]) -> PointSet:
    """Image of A in Z^d / Z·v, identified with Z^(d-1)."""
    if A.dim < 2:
        raise InvalidParameterError("projection along a line needs d >= 2")
    U = unimodular_completion(direction)
    if len(U) != A.dim:
        raise InvalidParameterError(f"direction has dimension {len(U)}, set has {A.dim}")
    return PointSet(A.dim - 1, tuple(mat_vec(U, p)[1:] for p in A.points))


@dataclass(frozen=True)
class BlockSum:
    """Σ_{i,j} |C_i + q·C_j| over the classes of a cover, against |A + q·A|."""
    total: int
    actual: int

    @property
    def disjoint(self) -> bool:
        return self.total == self.actual


def block_decomposition(A: PointSet, q: int, cover: CoverReport) -> BlockSum:
    q = require_dilation_factor(q)
    dilated = [dilate(c, q) for c in cover.classes]
    total = sum(sumset_size(c, d) for c in cover.classes for d in dilated)
    return BlockSum(total=total, actual=sumset_size(A, dilate(A, q)))


def check_four_lines_quotient(A: PointSet, q: int, direction: Union[Direction, Sequence[int], None] = None) -> int:
    """|A' + q·A'| for the four-point quotient of a rank-3 set on four parallel lines.

    Raises TheoremViolation when the value drops below 14.
    """
    q = require_dilation_factor(q)
    if A.dim != 3 or affine_rank(A) != 3:
        raise HypothesisError("the four-lines quotient needs a rank-3 set in Z^3")
    if direction is None:
        direction = line_cover_number(A).witness
    quotient = project_along(A, direction)
    if len(quotient) != 4:
        raise HypothesisError(f"A meets {len(quotient)} lines in that direction, not 4")
    value = sumset_size(quotient, dilate(quotient, q))
    if value < FOUR_LINES_QUOTIENT_FLOOR:
        logging.error(f"four-lines quotient {quotient.to_lists()} gives {value} < 14 for q={q}")
        raise TheoremViolation(
            f"|A'+qA'| = {value} < {FOUR_LINES_QUOTIENT_FLOOR} on quotient {quotient.to_lists()}",
            witness=A, q=q,
        )
    return value
