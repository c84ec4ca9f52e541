from dataclasses import dataclass
from typing import Iterable, List, Optional
import logging

from ..core.errors import InvalidParameterError, TheoremViolation
from ..core.pointset import PointSet, dilate, require_dilation_factor, sumset_size


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of the extremal family A_N = {e_1, ..., e_d} ∪ {n·e_1 : 0 < n < N}."""
    d: int
    N: int
    q: int = 2

    def __post_init__(self):
        if self.d < 2:
            raise InvalidParameterError(f"A_N needs d >= 2, got d = {self.d}")
        if self.N < 2:
            raise InvalidParameterError(f"A_N needs N >= 2, got N = {self.N}")
        require_dilation_factor(self.q)

    @property
    def size(self) -> int:
        # e_1 appears in both halves of the union
        return self.N + self.d - 2

    @property
    def below_rank_floor(self) -> bool:
        """A_2 = {e_1, ..., e_d} has only d points, one short of a rank-d set."""
        return self.size < self.d + 1


def construct_AN(d: int, N: int) -> PointSet:
    """The set {e_1, ..., e_d} ∪ {n·e_1 : 0 < n < N} in Z^d."""
    params = FamilyParams(d=d, N=N)
    points = [tuple(1 if k == i else 0 for k in range(d)) for i in range(d)]
    points += [(n,) + (0,) * (d - 1) for n in range(1, N)]
    A = PointSet(d, tuple(points))
    assert len(A) == params.size
    if params.below_rank_floor:
        logging.warning(f"A_{N} in dimension {d} has {len(A)} points, below the rank-{d} floor of {d + 1}")
    return A


def example_upper_bound(d: int, N: int, q: int) -> int:
    """(|q| + 2d - 1)|A_N| - (d - 1)(|q| - 2(d - 1) + 1)."""
    params = FamilyParams(d=d, N=N, q=q)
    k = abs(q)
    return (k + 2 * d - 1) * params.size - (d - 1) * (k - 2 * (d - 1) + 1)


def q2_identity_value(d: int, N: int) -> int:
    """(2d + 1)|A_N| - d(d + 1), the exact value of |A_N ± 2·A_N|."""
    return (2 * d + 1) * FamilyParams(d=d, N=N).size - d * (d + 1)


@dataclass(frozen=True)
class ConstructionRecord:
    d: int
    N: int
    q: int
    size: int
    computed: int
    upper_bound: int
    identity_value: Optional[int] = None

    @property
    def slack_to_upper(self) -> int:
        return self.upper_bound - self.computed


def verify_construction(d: int, N: int, q: int) -> ConstructionRecord:
    """Brute-force |A_N + q·A_N| and hold it against the upper bound (and the |q| = 2 identity)."""
    q = require_dilation_factor(q)
    A = construct_AN(d, N)
    computed = sumset_size(A, dilate(A, q))
    upper = example_upper_bound(d, N, q)
    if computed > upper:
        logging.error(f"A_{N} (d={d}, q={q}) gives {computed} > upper bound {upper}: {A.to_lists()}")
        raise TheoremViolation(f"|A_N + qA_N| = {computed} exceeds {upper} for d={d}, N={N}, q={q}",
                               witness=A, q=q)
    identity = None
    if abs(q) == 2:
        identity = q2_identity_value(d, N)
        if computed != identity:
            logging.error(f"A_{N} (d={d}, q={q}) gives {computed}, identity says {identity}: {A.to_lists()}")
            raise TheoremViolation(f"|A_N + qA_N| = {computed} != {identity} for d={d}, N={N}, q={q}",
                                   witness=A, q=q)
    return ConstructionRecord(d=d, N=N, q=q, size=len(A), computed=computed,
                              upper_bound=upper, identity_value=identity)


def construction_sweep(ds: Iterable[int], Ns: Iterable[int], qs: Iterable[int]) -> List[ConstructionRecord]:
    """verify_construction over a (d, N, q) grid, in grid order."""
    Ns, qs = list(Ns), list(qs)
    return [verify_construction(d, N, q) for d in ds for N in Ns for q in qs]
