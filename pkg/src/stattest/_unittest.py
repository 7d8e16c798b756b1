"""Stattest unittest integration."""

import functools
import unittest

from ._config import Config

original_stop_test = unittest.TestResult.stopTest


@functools.wraps(original_stop_test)
def new_stop_test(self: unittest.TestResult, test: unittest.TestCase) -> None:
    """Restore the active stattest settings between unittest tests."""
    Config.reset()
    return original_stop_test(self, test)


unittest.TestResult.stopTest = new_stop_test  # type: ignore
