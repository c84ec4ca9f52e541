from dataclasses import dataclass
from functools import lru_cache
from heapq import merge
from itertools import permutations, product
from operator import index
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ArithmeticOverflowError, DimensionMismatchError, EmptySetError,
    InvalidParameterError
)

Point = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

# numpy keys must stay clear of int64 overflow after one addition
_KEY_LIMIT = 1 << 62


def check_int64(value: int) -> int:
    """Return value unchanged, or raise if it does not fit a signed 64-bit integer."""
    if value < INT64_MIN or value > INT64_MAX:
        raise ArithmeticOverflowError(f"coordinate {value} outside the signed 64-bit range")
    return value


def make_point(coords: Iterable[int], dim: Optional[int] = None) -> Point:
    """Validate coordinates (exact integers in int64 range) and return them as a tuple."""
    try:
        point = tuple(check_int64(index(c)) for c in coords)
    except TypeError:
        raise InvalidParameterError(f"point coordinates must be integers, got {coords!r}")
    if not point:
        raise InvalidParameterError("a point needs at least one coordinate")
    if dim is not None and len(point) != dim:
        raise DimensionMismatchError(f"point {point} has dimension {len(point)}, expected {dim}")
    return point


@dataclass(frozen=True)
class PointSet:
    """A finite subset of Z^d. Points are deduplicated and kept in lexicographic order."""
    dim: int
    points: Tuple[Point, ...] = ()

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise InvalidParameterError(f"ambient dimension must be a positive integer, got {self.dim!r}")
        normalized = tuple(sorted({make_point(p, self.dim) for p in self.points}))
        object.__setattr__(self, "points", normalized)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], dim: Optional[int] = None) -> "PointSet":
        points = [tuple(p) for p in points]
        if dim is None:
            if not points:
                raise EmptySetError("cannot infer the dimension of an empty point set")
            dim = len(points[0])
        return cls(dim, tuple(points))

    @classmethod
    def trusted(cls, dim: int, points: Tuple[Point, ...]) -> "PointSet":
        """Wrap points already known to be sorted, distinct, validated and of dimension dim."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "points", points)
        return obj

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, point) -> bool:
        return tuple(point) in set(self.points)

    def to_lists(self) -> List[List[int]]:
        return [list(p) for p in self.points]

    def __repr__(self) -> str:
        return f"PointSet(dim={self.dim}, points={list(self.points)})"


def _require_nonempty(A: PointSet, what: str = "operation") -> None:
    if not A.points:
        raise EmptySetError(f"{what} requires a nonempty point set")


def _require_same_dim(A: PointSet, B: PointSet) -> None:
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dimension mismatch: {A.dim} vs {B.dim}")


def require_dilation_factor(q: int) -> int:
    """Validate the dilation factor of a sum of dilates: an integer with |q| > 1."""
    try:
        q = index(q)
    except TypeError:
        raise InvalidParameterError(f"q must be an integer, got {q!r}")
    if abs(q) <= 1:
        raise InvalidParameterError(f"q = {q} rejected: sums of dilates require |q| > 1")
    return q


def _axis_ranges(points: Sequence[Point], dim: int) -> List[Tuple[int, int]]:
    return [(min(p[i] for p in points), max(p[i] for p in points)) for i in range(dim)]


def _check_sum_range(A: PointSet, B: PointSet) -> None:
    # extremes of a + b per axis are attained, so checking them is exact
    for (lo_a, hi_a), (lo_b, hi_b) in zip(_axis_ranges(A.points, A.dim), _axis_ranges(B.points, B.dim)):
        check_int64(lo_a + lo_b)
        check_int64(hi_a + hi_b)


def translate(A: PointSet, x: Sequence[int]) -> PointSet:
    """Return x + A."""
    x = make_point(x)
    if len(x) != A.dim:
        raise DimensionMismatchError(f"translation vector has dimension {len(x)}, set has {A.dim}")
    shifted = tuple(tuple(check_int64(a + b) for a, b in zip(p, x)) for p in A.points)
    # translation preserves lexicographic order
    return PointSet.trusted(A.dim, shifted)


def dilate(A: PointSet, q: int) -> PointSet:
    """Return q·A for a nonzero integer q."""
    q = index(q)
    if q == 0:
        raise InvalidParameterError("dilation by 0 is not injective")
    scaled = [tuple(check_int64(q * c) for c in p) for p in A.points]
    if q < 0:
        scaled.reverse()
    return PointSet.trusted(A.dim, tuple(scaled))


def sumset(A: PointSet, B: PointSet) -> PointSet:
    """A + B by deduplicated accumulation over all |A|·|B| pairs."""
    _require_same_dim(A, B)
    _require_nonempty(A, "sumset")
    _require_nonempty(B, "sumset")
    _check_sum_range(A, B)
    acc = {tuple(x + y for x, y in zip(a, b)) for a in A.points for b in B.points}
    return PointSet.trusted(A.dim, tuple(sorted(acc)))


def sumset_sorted_merge(A: PointSet, B: PointSet) -> PointSet:
    """A + B as a k-way merge of the sorted translates a + B. Kept as an oracle for sumset."""
    _require_same_dim(A, B)
    _require_nonempty(A, "sumset")
    _require_nonempty(B, "sumset")
    _check_sum_range(A, B)
    rows = [[tuple(x + y for x, y in zip(a, b)) for b in B.points] for a in A.points]
    out: List[Point] = []
    for p in merge(*rows):
        if not out or out[-1] != p:
            out.append(p)
    return PointSet.trusted(A.dim, tuple(out))


def sumset_size(A: PointSet, B: PointSet) -> int:
    """|A + B| computed on mixed-radix int64 keys with numpy.

    Each point is shifted so its box starts at the origin and encoded as a single
    integer; the key of a + b is then key(a) + key(b), so the distinct outer sums
    count A + B. Falls back to set accumulation when the key range needs more than
    62 bits.
    """
    _require_same_dim(A, B)
    _require_nonempty(A, "sumset")
    _require_nonempty(B, "sumset")
    _check_sum_range(A, B)
    ranges_a = _axis_ranges(A.points, A.dim)
    ranges_b = _axis_ranges(B.points, B.dim)
    strides = []
    total = 1
    for (lo_a, hi_a), (lo_b, hi_b) in zip(ranges_a, ranges_b):
        strides.append(total)
        total *= (hi_a - lo_a) + (hi_b - lo_b) + 1
    if total > _KEY_LIMIT:
        return len(sumset(A, B))
    stride_vec = np.array(strides, dtype=np.int64)
    a = np.array(A.points, dtype=np.int64) - np.array([lo for lo, _ in ranges_a], dtype=np.int64)
    b = np.array(B.points, dtype=np.int64) - np.array([lo for lo, _ in ranges_b], dtype=np.int64)
    keys = np.add.outer(a @ stride_vec, b @ stride_vec)
    return int(np.unique(keys).size)


def sum_of_dilates(A: PointSet, q: int) -> PointSet:
    """A + q·A."""
    q = require_dilation_factor(q)
    _require_nonempty(A, "sum of dilates")
    return sumset(A, dilate(A, q))


def count_sum_of_dilates(points: Sequence[Point], q: int) -> int:
    """|A + q·A| on raw coordinate tuples, unchecked. Used by the search inner loop."""
    return len({tuple(x + q * y for x, y in zip(a, b)) for a in points for b in points})


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        head = m[rank]
        for r in range(rank + 1, n_rows):
            row = m[r]
            for c in range(col + 1, n_cols):
                num = row[c] * head[col] - row[col] * head[c]
                # exact: every entry is a minor of the input
                assert num % prev == 0
                row[c] = num // prev
            row[col] = 0
        prev = head[col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def integer_determinant(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    m = [list(r) for r in M]
    n = len(m)
    if any(len(r) != n for r in m):
        raise InvalidParameterError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                num = m[r][c] * m[k][k] - m[r][k] * m[k][c]
                assert num % prev == 0
                m[r][c] = num // prev
            m[r][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def affine_rank(A: PointSet) -> int:
    """Smallest dimension of an affine subspace containing A."""
    _require_nonempty(A, "affine rank")
    base = A.points[0]
    rows = [[x - y for x, y in zip(p, base)] for p in A.points[1:]]
    return bareiss_rank(rows)


def as_matrix(M: Sequence[Sequence[int]], dim: int) -> Matrix:
    try:
        matrix = tuple(tuple(index(x) for x in row) for row in M)
    except TypeError:
        raise InvalidParameterError("matrix entries must be integers")
    if len(matrix) != dim or any(len(row) != dim for row in matrix):
        raise DimensionMismatchError(f"expected a {dim}x{dim} matrix")
    return matrix


def mat_vec(M: Matrix, v: Sequence[int]) -> Point:
    return tuple(sum(m * x for m, x in zip(row, v)) for row in M)


def apply_linear(A: PointSet, M: Sequence[Sequence[int]]) -> PointSet:
    """Return M·A for an invertible integer matrix M."""
    matrix = as_matrix(M, A.dim)
    if integer_determinant(matrix) == 0:
        raise InvalidParameterError("singular matrix: linear image would not preserve |A + q·A|")
    image = {tuple(check_int64(c) for c in mat_vec(matrix, p)) for p in A.points}
    return PointSet.trusted(A.dim, tuple(sorted(image)))


@lru_cache(maxsize=None)
def box_symmetries(dim: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[bool, ...]], ...]:
    """All (axis permutation, reflection mask) pairs of the d-dimensional box."""
    return tuple(
        (perm, mask)
        for perm in permutations(range(dim))
        for mask in product((False, True), repeat=dim)
    )


def canonical_points(points: Sequence[Point], dim: int) -> Tuple[Point, ...]:
    """Lexicographically least image of points under translation and box symmetries."""
    lows = [min(p[i] for p in points) for i in range(dim)]
    shifted = [tuple(c - lo for c, lo in zip(p, lows)) for p in points]
    extents = [max(p[i] for p in shifted) for i in range(dim)]
    best = None
    for perm, mask in box_symmetries(dim):
        image = tuple(sorted(
            tuple(extents[axis] - p[axis] if mask[axis] else p[axis] for axis in perm)
            for p in shifted
        ))
        if best is None or image < best:
            best = image
    return best


def canonical_form(A: PointSet) -> PointSet:
    """Canonical representative of A under translation, axis permutations and reflections."""
    _require_nonempty(A, "canonical form")
    return PointSet.trusted(A.dim, canonical_points(A.points, A.dim))
