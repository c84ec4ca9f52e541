import random
import unittest
from unittest.mock import patch

from src.dilates.core.bounds import (
    BoundKind, Verdict, conditional_catalog, evaluate_bounds, freiman_doubling_bound,
    lemma_fd_bound, q2_bound, ruzsa_bound, slope_catalog
)
from src.dilates.core.errors import HypothesisError, InvalidParameterError
from src.dilates.core.pointset import PointSet, affine_rank, apply_linear, translate
from src.dilates.generator.constructions import construct_AN


class TestBoundFormulas(unittest.TestCase):
    def test_explicit_bounds(self):
        self.assertEqual(ruzsa_bound(3, 3, 2), 6)
        self.assertEqual(ruzsa_bound(5, 2, 3), 5)
        self.assertEqual(lemma_fd_bound(4, 4, 2), 12)
        self.assertEqual(q2_bound(3, 2), 6)
        self.assertEqual(q2_bound(6, 2), 21)
        self.assertEqual(q2_bound(4, 3), 4)
        self.assertEqual(freiman_doubling_bound(4, 2), 9)

    def test_bound_preconditions(self):
        with self.assertRaises(HypothesisError):
            ruzsa_bound(2, 3, 2)
        with self.assertRaises(InvalidParameterError):
            q2_bound(2, 2)
        with self.assertRaises(InvalidParameterError):
            lemma_fd_bound(3, 4, 2)
        with self.assertRaises(InvalidParameterError):
            ruzsa_bound(0, 0, 2)

    def test_slope_catalog(self):
        slopes = {spec.name: spec.slope for spec in slope_catalog(2, 2)}
        self.assertEqual(slopes, {"baseline": 3, "main": 5, "conjecture": 5})
        slopes = {spec.name: spec.slope for spec in slope_catalog(2, 3)}
        self.assertEqual(slopes, {"baseline": 3, "main": 6, "d3": 7, "conjecture": 7})
        slopes = {spec.name: spec.slope for spec in slope_catalog(-3, 2)}
        self.assertEqual(slopes, {"baseline": 4, "main": 6, "conjecture": 6})
        self.assertTrue(all(spec.kind == BoundKind.SLOPE for spec in slope_catalog(5, 4)))
        with self.assertRaises(InvalidParameterError):
            slope_catalog(1, 2)

    def test_conditional_catalog(self):
        self.assertEqual([s.name for s in conditional_catalog(2, 2)], ["special_lines"])
        names = [s.name for s in conditional_catalog(2, 3)]
        self.assertEqual(names, ["special_lines", "two_hyperplanes", "four_lines"])
        self.assertEqual(conditional_catalog(3, 3)[1].slope, 8)


class TestEvaluateBounds(unittest.TestCase):
    def test_unit_square(self):
        report = evaluate_bounds(PointSet(2, ((0, 0), (1, 0), (0, 1), (1, 1))), 2)
        self.assertEqual(report.computed, 16)
        self.assertEqual(report.summary.cosets, 4)
        self.assertEqual(report.row("lemma_fd").required, 12)
        self.assertEqual(report.row("ruzsa").required, 9)
        self.assertEqual(report.row("q2").required, 11)
        self.assertEqual(report.row("freiman_doubling").computed, 9)
        for name in ("ruzsa", "lemma_fd", "q2", "freiman_doubling"):
            self.assertEqual(report.row(name).verdict, Verdict.PASS)
        self.assertEqual(report.failures(), [])

    def test_construction_slack(self):
        report = evaluate_bounds(construct_AN(2, 10), 2)
        self.assertEqual(report.computed, 44)
        q2 = report.row("q2")
        self.assertEqual(q2.required, 41)
        self.assertEqual(q2.verdict, Verdict.PASS)
        conjecture = report.row("conjecture")
        self.assertEqual(conjecture.verdict, Verdict.SLACK)
        self.assertEqual(conjecture.slack, -6)
        self.assertEqual(report.summary.line_cover, 2)
        self.assertEqual(report.row("special_lines").verdict, Verdict.SLACK)

    def test_rank_deficient_rows(self):
        report = evaluate_bounds(PointSet(2, ((0, 0), (1, 1), (3, 3))), 2)
        self.assertEqual(report.summary.rank, 1)
        self.assertEqual(report.row("q2").verdict, Verdict.NOT_APPLICABLE)
        self.assertEqual(report.row("main").verdict, Verdict.NOT_APPLICABLE)
        self.assertEqual(report.row("baseline").verdict, Verdict.SLACK)
        self.assertIsNone(report.summary.hyperplane_cover)

    def test_empty_and_bad_q(self):
        with self.assertRaises(InvalidParameterError):
            evaluate_bounds(PointSet(2, ()), 2)
        with self.assertRaises(InvalidParameterError):
            evaluate_bounds(PointSet(2, ((0, 0),)), -1)

    def test_corrupted_count_fails(self):
        """Test that a corrupted |A+qA| surfaces as FAIL rows"""
        square = PointSet(2, ((0, 0), (1, 0), (0, 1), (1, 1)))
        with patch('src.dilates.core.bounds.sumset_size', return_value=1):
            with self.assertLogs(level='ERROR'):
                report = evaluate_bounds(square, 2)
        failed = {row.name for row in report.failures()}
        self.assertTrue({"ruzsa", "lemma_fd", "q2"} <= failed)

    def test_random_sets_never_fail(self):
        rng = random.Random(59)
        for d in (2, 3):
            for q in (2, -2, 3):
                checked = 0
                while checked < 40:
                    n = rng.randint(d + 1, d + 5)
                    A = PointSet(d, tuple(tuple(rng.randint(0, 5) for _ in range(d)) for _ in range(n)))
                    if affine_rank(A) < d:
                        continue
                    report = evaluate_bounds(A, q)
                    self.assertEqual(report.failures(), [], f"witness {A.to_lists()} q={q}")
                    checked += 1


class TestConstructionSlack(unittest.TestCase):
    def test_conjecture_slack_is_constant(self):
        for d in (2, 3):
            for q in (2, -2):
                for N in range(3, 41):
                    report = evaluate_bounds(construct_AN(d, N), q)
                    self.assertEqual(report.row("conjecture").slack, -d * (d + 1), f"d={d} N={N} q={q}")
                    self.assertGreaterEqual(report.row("main").slack, -d * (d + 1), f"d={d} N={N} q={q}")


class TestReportInvariance(unittest.TestCase):
    def test_translates_and_unimodular_images(self):
        rng = random.Random(83)
        checked = 0
        while checked < 60:
            d = rng.randint(2, 3)
            A = PointSet(d, tuple(tuple(rng.randint(0, 4) for _ in range(d)) for _ in range(rng.randint(d + 1, d + 5))))
            if affine_rank(A) < d:
                continue
            M = [[int(i == j) for j in range(d)] for i in range(d)]
            for _ in range(3):
                i, j = rng.sample(range(d), 2)
                M[i] = [a + rng.choice([-1, 1]) * b for a, b in zip(M[i], M[j])]
            image = translate(apply_linear(A, M), [rng.randint(-7, 7) for _ in range(d)])
            q = rng.choice([2, -2, 3])
            self.assertEqual(evaluate_bounds(image, q), evaluate_bounds(A, q), f"{A.to_lists()} M={M}")
            checked += 1


if __name__ == '__main__':
    unittest.main()
