import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout

from src.dilates.cli import main
from src.dilates.engine.search_engine import SearchTask, search_min

REGRESSION_FILE = "tests/output/search_minima_d2_q2_g4.json"


class TestExhaustiveBracket(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        """Create output directory"""
        cls.output_dir = os.path.dirname(REGRESSION_FILE)
        if not os.path.exists(cls.output_dir):
            os.makedirs(cls.output_dir)

    def test_bracket_and_regression(self):
        minima = {}
        for n in range(3, 8):
            record = search_min(SearchTask(d=2, q=2, n=n, grid=4))
            self.assertGreaterEqual(record.min_value, 5 * n - 9)
            if n - 1 <= 4:
                # A_n fits in {0..4}^2
                self.assertLessEqual(record.min_value, 5 * n - 6)
            minima[str(n)] = record.min_value
        self.assertEqual(minima["3"], 9)
        self.assertEqual(minima["4"], 14)

        if os.path.exists(REGRESSION_FILE):
            with open(REGRESSION_FILE) as f:
                self.assertEqual(json.load(f), minima)
        else:
            with open(REGRESSION_FILE, "w") as f:
                json.dump(minima, f, indent=2, sort_keys=True)


class TestSearchDeterminism(unittest.TestCase):
    def run_search(self, out_path: str, workers: str) -> bytes:
        argv = ["search", "--d", "2", "--q", "2", "--n", "5", "--grid", "4",
                "--random", "5000", "--seed", "31337", "--workers", workers, "--out", out_path]
        with redirect_stdout(io.StringIO()):
            self.assertEqual(main(argv), 0)
        with open(out_path, "rb") as f:
            return f.read()

    def test_equal_seeds_give_identical_reports(self):
        with tempfile.TemporaryDirectory() as tmp:
            first = self.run_search(os.path.join(tmp, "a.json"), "1")
            second = self.run_search(os.path.join(tmp, "b.json"), "1")
            parallel = self.run_search(os.path.join(tmp, "c.json"), "4")
        self.assertEqual(first, second)
        self.assertEqual(first, parallel)


if __name__ == '__main__':
    unittest.main()
