import random
import unittest
from itertools import combinations
from math import gcd

from src.dilates.core.errors import (
    ArithmeticOverflowError, HypothesisError, InvalidParameterError
)
from src.dilates.core.lattice import (
    DistArm, check_dist_lemma, check_reduced_generation, coset_count_limit,
    coset_partition, coset_split_total, difference_lattice, hnf, is_fully_distributed,
    is_reduced, reduce
)
from src.dilates.core.pointset import (
    PointSet, affine_rank, bareiss_rank, dilate, integer_determinant, sum_of_dilates, sumset_size
)
from src.dilates.generator.constructions import construct_AN


def random_full_matrix(rng: random.Random, d: int, m: int):
    while True:
        M = [[rng.randint(-6, 6) for _ in range(m)] for _ in range(d)]
        if bareiss_rank(M) == d:
            return M


def scramble_columns(rng: random.Random, M, steps: int = 20):
    """Apply random unimodular column operations."""
    cols = [list(c) for c in zip(*M)]
    for _ in range(steps):
        i, j = rng.sample(range(len(cols)), 2)
        if rng.random() < 0.2:
            cols[i], cols[j] = cols[j], cols[i]
        elif rng.random() < 0.1:
            cols[i] = [-x for x in cols[i]]
        else:
            k = rng.randint(-3, 3)
            cols[i] = [a + k * b for a, b in zip(cols[i], cols[j])]
    return [list(r) for r in zip(*cols)]


def random_rank_d_set(rng: random.Random, d: int, lo: int = 0, hi: int = 6) -> PointSet:
    while True:
        n = rng.randint(d + 1, d + 6)
        A = PointSet(d, tuple(tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(n)))
        if affine_rank(A) == d:
            return A


class TestHermiteNormalForm(unittest.TestCase):
    def test_diagonal_lattice(self):
        basis = hnf([[2, 0], [0, 2]])
        self.assertEqual(basis.basis, ((2, 0), (0, 2)))
        self.assertEqual(basis.det, 4)
        self.assertFalse(basis.is_full)

    def test_checkerboard_lattice(self):
        """Test the lattice of points with x ≡ y mod 2"""
        basis = hnf([[2, 0, 1], [0, 2, 1]])
        self.assertEqual(basis.basis, ((1, 0), (1, 2)))
        self.assertEqual(basis.det, 2)
        self.assertTrue(basis.contains((1, 1)))
        self.assertTrue(basis.contains((3, -1)))
        self.assertFalse(basis.contains((1, 0)))
        self.assertEqual(basis.solve((1, 1)), (1, 0))
        with self.assertRaises(ValueError):
            basis.solve((1, 0))

    def test_rank_deficient_input(self):
        with self.assertRaises(HypothesisError):
            hnf([[1, 2], [2, 4]])
        with self.assertRaises(HypothesisError):
            hnf([[1], [0]])

    def test_shape_invariants(self):
        rng = random.Random(5)
        for _ in range(50):
            d = rng.randint(1, 3)
            basis = hnf(random_full_matrix(rng, d, d + rng.randint(0, 2))).basis
            for i in range(d):
                self.assertGreater(basis[i][i], 0)
                for j in range(i):
                    self.assertTrue(0 <= basis[i][j] < basis[i][i])
                for j in range(i + 1, d):
                    self.assertEqual(basis[i][j], 0)

    def test_unimodular_invariance(self):
        """Test hnf(M·U) = hnf(M) for random unimodular U"""
        rng = random.Random(17)
        for _ in range(60):
            d = rng.randint(2, 3)
            M = random_full_matrix(rng, d, d + rng.randint(0, 2))
            self.assertEqual(hnf(scramble_columns(rng, M)), hnf(M))

    def test_membership_and_index(self):
        """Test that input columns lie in the lattice and det is the gcd of maximal minors"""
        rng = random.Random(23)
        for _ in range(40):
            d = rng.randint(2, 3)
            m = d + rng.randint(0, 2)
            M = random_full_matrix(rng, d, m)
            basis = hnf(M)
            for j in range(m):
                self.assertTrue(basis.contains([M[i][j] for i in range(d)]))
            g = 0
            for cols in combinations(range(m), d):
                g = gcd(g, integer_determinant([[M[i][j] for j in cols] for i in range(d)]))
            self.assertEqual(basis.det, g)


class TestReduction(unittest.TestCase):
    def test_reduce_scaled_triangle(self):
        record = reduce(PointSet(2, ((0, 0), (2, 0), (0, 2))))
        self.assertEqual(record.output.points, ((0, 0), (0, 1), (1, 0)))
        self.assertEqual(record.det, 4)
        self.assertEqual(record.anchor, (0, 0))

    def test_reduce_already_reduced(self):
        record = reduce(PointSet(2, ((3, 3), (4, 3), (3, 4))))
        self.assertEqual(record.det, 1)
        self.assertEqual(record.transform, ((1, 0), (0, 1)))
        self.assertEqual(record.output.points, ((0, 0), (0, 1), (1, 0)))

    def test_reduce_rank_deficient(self):
        with self.assertRaises(HypothesisError) as ctx:
            reduce(PointSet(2, ((0, 0), (1, 1), (2, 2))))
        self.assertIn("rank < d", str(ctx.exception))

    def test_reduce_preserves_sum_of_dilates(self):
        rng = random.Random(29)
        for _ in range(60):
            d = rng.randint(2, 3)
            base = random_rank_d_set(rng, d)
            k = rng.choice([2, 3])
            A = PointSet(d, tuple(tuple(k * c + 1 for c in p) for p in base.points))
            record = reduce(A)
            self.assertTrue(is_reduced(record.output))
            self.assertEqual(difference_lattice(record.output).det, 1)
            for q in (2, -2, 3):
                self.assertEqual(len(sum_of_dilates(record.output, q)), len(sum_of_dilates(A, q)))


class TestCosets(unittest.TestCase):
    def setUp(self):
        """Set up test data"""
        self.square = PointSet(2, ((0, 0), (1, 0), (0, 1), (1, 1)))
        self.triangle = PointSet(2, ((0, 0), (1, 0), (0, 1)))

    def test_square_partition(self):
        partition = coset_partition(self.square, 2)
        self.assertEqual(partition.r, 4)
        self.assertEqual(partition.min_part_size(), 1)
        for part in partition.parts:
            self.assertEqual(part.quotient.points, ((0, 0),))

    def test_negative_q_partition(self):
        partition = coset_partition(PointSet(1, ((1,), (3,))), -2)
        self.assertEqual(partition.r, 1)
        part = partition.parts[0]
        self.assertEqual(part.residue, (1,))
        self.assertEqual(part.quotient.points, ((-1,), (0,)))

    def test_partition_reassembles(self):
        rng = random.Random(31)
        for q in (2, -2, 3, -3):
            for _ in range(30):
                A = random_rank_d_set(rng, rng.randint(1, 3), -8, 8)
                rebuilt = set()
                for part in coset_partition(A, q).parts:
                    for y in part.quotient.points:
                        rebuilt.add(tuple(a + q * c for a, c in zip(part.residue, y)))
                self.assertEqual(rebuilt, set(A.points))

    def test_fully_distributed(self):
        self.assertTrue(is_fully_distributed(self.square, 2))
        self.assertFalse(is_fully_distributed(self.triangle, 2))
        self.assertFalse(is_fully_distributed(self.square, 3))

    def test_coset_count_limit(self):
        self.assertEqual(coset_count_limit(2, 3), 8)
        with self.assertRaises(ArithmeticOverflowError):
            coset_count_limit(2, 64)

    def test_coset_split_total(self):
        rng = random.Random(37)
        for q in (2, -2, 3):
            for _ in range(30):
                A = random_rank_d_set(rng, 2)
                self.assertEqual(coset_split_total(A, q), sumset_size(A, dilate(A, q)))

    def test_reduced_sets_generate(self):
        self.assertTrue(check_reduced_generation(self.square, 2))
        self.assertTrue(check_reduced_generation(self.triangle, 3))


class TestDistLemma(unittest.TestCase):
    def test_unit_square(self):
        """Test that singleton parts fall in the inequality arm"""
        square = PointSet(2, ((0, 0), (1, 0), (0, 1), (1, 1)))
        for i in range(4):
            verdict = check_dist_lemma(square, 2, i)
            self.assertFalse(verdict.quotient_fd)
            self.assertEqual(verdict.arm, DistArm.INEQUALITY)
            self.assertEqual(verdict.lhs, 4)
            self.assertEqual(verdict.rhs, 2)

    def test_construction_parts(self):
        A = construct_AN(2, 5)
        for i in range(coset_partition(A, 2).r):
            verdict = check_dist_lemma(A, 2, i)
            self.assertIn(verdict.arm, list(DistArm))

    def test_hypotheses(self):
        with self.assertRaises(HypothesisError):
            check_dist_lemma(PointSet(2, ((0, 0), (2, 0), (0, 2))), 2, 0)
        with self.assertRaises(InvalidParameterError):
            check_dist_lemma(PointSet(2, ((0, 0), (1, 0), (0, 1))), 2, 3)


if __name__ == '__main__':
    unittest.main()
