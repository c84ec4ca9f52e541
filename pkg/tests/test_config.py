import os
import unittest
from unittest.mock import patch

from src.dilates.config import DEFAULT_BUDGET, Settings


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        with patch.dict(os.environ, {}, clear=True):
            settings = Settings.from_env()
        self.assertEqual(settings.budget, DEFAULT_BUDGET)
        self.assertEqual(settings.workers, 1)
        self.assertEqual(settings.log_level, "WARNING")

    def test_overrides(self):
        env = {"DILATE_BUDGET": "5000", "DILATE_WORKERS": "4", "DILATE_LOG_LEVEL": "info"}
        with patch.dict(os.environ, env, clear=True):
            settings = Settings.from_env()
        self.assertEqual(settings.budget, 5000)
        self.assertEqual(settings.workers, 4)
        self.assertEqual(settings.log_level, "INFO")

    def test_invalid_values(self):
        for env in ({"DILATE_BUDGET": "lots"}, {"DILATE_BUDGET": "0"},
                    {"DILATE_WORKERS": "-2"}, {"DILATE_LOG_LEVEL": "chatty"}):
            with patch.dict(os.environ, env, clear=True):
                with self.assertRaises(ValueError) as ctx:
                    Settings.from_env()
            self.assertIn(next(iter(env)), str(ctx.exception))


if __name__ == '__main__':
    unittest.main()
