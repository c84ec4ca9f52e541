from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from operator import index
from typing import List, Sequence, Tuple
import logging

from .errors import HypothesisError, InvalidParameterError, TheoremViolation, ArithmeticOverflowError
from .pointset import (
    INT64_MAX, Matrix, Point, PointSet, affine_rank,
    require_dilation_factor, sumset_size, dilate
)


@dataclass(frozen=True)
class LatticeBasis:
    """Column-style Hermite normal form of a full-rank sublattice of Z^d.

    basis[i][j] is row i, column j. The matrix is lower triangular with a positive
    diagonal, and every entry left of the diagonal lies in [0, basis[i][i]).
    """
    dim: int
    basis: Matrix

    @property
    def det(self) -> int:
        result = 1
        for i in range(self.dim):
            result *= self.basis[i][i]
        return result

    @property
    def is_full(self) -> bool:
        """True iff the lattice is Z^d."""
        return self.det == 1

    def columns(self) -> List[Point]:
        return [tuple(self.basis[i][j] for i in range(self.dim)) for j in range(self.dim)]

    def solve(self, v: Sequence[int]) -> Point:
        """Coordinates y with basis·y = v, or raise ValueError if v is not in the lattice."""
        y: List[int] = []
        for i in range(self.dim):
            rest = v[i] - sum(self.basis[i][j] * y[j] for j in range(i))
            quotient, remainder = divmod(rest, self.basis[i][i])
            if remainder:
                raise ValueError(f"{tuple(v)} is not in the lattice")
            y.append(quotient)
        return tuple(y)

    def contains(self, v: Sequence[int]) -> bool:
        try:
            self.solve(v)
        except ValueError:
            return False
        return True


def hnf(M: Sequence[Sequence[int]]) -> LatticeBasis:
    """Hermite normal form of the lattice spanned by the columns of a d×m integer matrix."""
    rows = [[index(x) for x in row] for row in M]
    if not rows or not rows[0]:
        raise HypothesisError("hnf needs at least one row and one column")
    dim, width = len(rows), len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidParameterError("ragged matrix")
    if width < dim:
        raise HypothesisError(f"{width} columns cannot span a rank-{dim} lattice")
    cols = [[rows[i][j] for i in range(dim)] for j in range(width)]

    for i in range(dim):
        # Euclid on row i across the columns not yet fixed
        while True:
            live = [k for k in range(i, width) if cols[k][i] != 0]
            if not live:
                raise HypothesisError("columns span a lattice of rank < d")
            pivot = min(live, key=lambda k: (abs(cols[k][i]), k))
            cols[i], cols[pivot] = cols[pivot], cols[i]
            head = cols[i]
            done = True
            for k in range(i + 1, width):
                if cols[k][i]:
                    f = cols[k][i] // head[i]
                    cols[k] = [a - f * b for a, b in zip(cols[k], head)]
                    if cols[k][i]:
                        done = False
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-a for a in cols[i]]

    # reduce entries left of each diagonal into [0, diagonal)
    for i in range(dim):
        pivot = cols[i]
        for j in range(i):
            f = cols[j][i] // pivot[i]
            if f:
                cols[j] = [a - f * b for a, b in zip(cols[j], pivot)]

    basis = tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))
    return LatticeBasis(dim=dim, basis=basis)


def _require_full_rank(A: PointSet) -> None:
    rank = affine_rank(A)
    if rank < A.dim:
        raise HypothesisError(f"rank < d: affine rank {rank}, dimension {A.dim}")


def difference_lattice(A: PointSet) -> LatticeBasis:
    """HNF basis of the lattice generated by all pairwise differences of A."""
    _require_full_rank(A)
    diffs = [tuple(x - y for x, y in zip(b, a)) for a, b in combinations(A.points, 2)]
    matrix = [[v[i] for v in diffs] for i in range(A.dim)]
    return hnf(matrix)


def is_reduced(A: PointSet) -> bool:
    """True iff the difference lattice of A is all of Z^d."""
    return difference_lattice(A).is_full


@dataclass(frozen=True)
class ReductionRecord:
    input: PointSet
    output: PointSet
    anchor: Point
    transform: Matrix
    det: int


def reduce(A: PointSet) -> ReductionRecord:
    """Replace A by L^{-1}(A - a), with a the lexicographic minimum and L·Z^d the difference lattice.

    One pass always suffices: the difference lattice of the output is L^{-1}Γ = Z^d.
    """
    lattice = difference_lattice(A)
    anchor = A.points[0]
    image = sorted(
        lattice.solve(tuple(x - y for x, y in zip(p, anchor)))
        for p in A.points
    )
    output = PointSet.trusted(A.dim, tuple(image))
    if lattice.det > 1:
        logging.info(f"reduced a set of {len(A)} points by a lattice of index {lattice.det}")
    return ReductionRecord(input=A, output=output, anchor=anchor, transform=lattice.basis, det=lattice.det)


@dataclass(frozen=True)
class CosetPart:
    residue: Point
    part: PointSet
    quotient: PointSet


@dataclass(frozen=True)
class CosetPartition:
    """A = ∪ (a_i + q·A'_i), one part per coset of q·Z^d that A meets."""
    q: int
    parts: Tuple[CosetPart, ...] = field(default_factory=tuple)

    @property
    def r(self) -> int:
        return len(self.parts)

    def min_part_size(self) -> int:
        return min(len(p.part) for p in self.parts)


def coset_partition(A: PointSet, q: int) -> CosetPartition:
    """Split A by coordinate-wise Euclidean residue modulo |q|."""
    q = require_dilation_factor(q)
    modulus = abs(q)
    groups = {}
    for p in A.points:
        groups.setdefault(tuple(c % modulus for c in p), []).append(p)
    parts = []
    for residue in sorted(groups):
        members = groups[residue]
        quotient = []
        for p in members:
            y = []
            for c, a in zip(p, residue):
                value, rem = divmod(c - a, q)
                assert rem == 0, f"residue logic broke on {p} mod {q}"
                y.append(value)
            quotient.append(tuple(y))
        parts.append(CosetPart(
            residue=residue,
            part=PointSet.trusted(A.dim, tuple(members)),
            quotient=PointSet.trusted(A.dim, tuple(sorted(quotient))),
        ))
    return CosetPartition(q=q, parts=tuple(parts))


def coset_count_limit(q: int, dim: int) -> int:
    """|q|^d, refusing values past the signed 64-bit range."""
    total = abs(q) ** dim
    if total > INT64_MAX:
        raise ArithmeticOverflowError(f"|q|^d = {abs(q)}^{dim} exceeds the signed 64-bit range")
    return total


def is_fully_distributed(A: PointSet, q: int) -> bool:
    """True iff A meets every coset of q·Z^d."""
    q = require_dilation_factor(q)
    needed = coset_count_limit(q, A.dim)
    if len(A) < needed:
        return False
    return coset_partition(A, q).r == needed


class DistArm(Enum):
    """Which alternative of the coset dichotomy holds for a part."""
    FULLY_DISTRIBUTED = "quotient fully distributed"
    INEQUALITY = "inequality"
    BOTH = "both"


@dataclass(frozen=True)
class DistVerdict:
    index: int
    residue: Point
    quotient_fd: bool
    lhs: int
    rhs: int
    arm: DistArm


def check_dist_lemma(A: PointSet, q: int, i: int) -> DistVerdict:
    """Check that part i satisfies: A'_i is FD, or |A_i + q·A| >= |A_i + q·A_i| + min_w |A_w|."""
    q = require_dilation_factor(q)
    if not is_reduced(A):
        raise HypothesisError("the coset dichotomy needs a reduced set")
    partition = coset_partition(A, q)
    if not 0 <= i < partition.r:
        raise InvalidParameterError(f"part index {i} out of range 0..{partition.r - 1}")
    part = partition.parts[i]
    quotient_fd = is_fully_distributed(part.quotient, q)
    lhs = sumset_size(part.part, dilate(A, q))
    rhs = sumset_size(part.part, dilate(part.part, q)) + partition.min_part_size()
    inequality = lhs >= rhs
    if quotient_fd and inequality:
        arm = DistArm.BOTH
    elif quotient_fd:
        arm = DistArm.FULLY_DISTRIBUTED
    elif inequality:
        arm = DistArm.INEQUALITY
    else:
        logging.error(f"coset dichotomy failed for part {i} (residue {part.residue}), q={q}: {A.to_lists()}")
        raise TheoremViolation(
            f"part {i}: quotient not FD and |A_i+qA| = {lhs} < {rhs}", witness=A, q=q
        )
    return DistVerdict(index=i, residue=part.residue, quotient_fd=quotient_fd, lhs=lhs, rhs=rhs, arm=arm)


def check_reduced_generation(A: PointSet, q: int) -> bool:
    """For every part i, do a_1 - a_i, ..., a_r - a_i and q·e_1, ..., q·e_d generate Z^d?"""
    q = require_dilation_factor(q)
    partition = coset_partition(A, q)
    residues = [p.residue for p in partition.parts]
    scaled_basis = [tuple(q if k == j else 0 for k in range(A.dim)) for j in range(A.dim)]
    for base in residues:
        gens = [tuple(x - y for x, y in zip(a, base)) for a in residues] + scaled_basis
        matrix = [[g[row] for g in gens] for row in range(A.dim)]
        if not hnf(matrix).is_full:
            return False
    return True


def coset_split_total(A: PointSet, q: int) -> int:
    """Σ_i |A_i + q·A|. The pieces lie in distinct cosets, so this equals |A + q·A|."""
    q = require_dilation_factor(q)
    dilated = dilate(A, q)
    return sum(sumset_size(part.part, dilated) for part in coset_partition(A, q).parts)


