"""Stattest doctest integration."""

import functools
from doctest import DocTestRunner, TestResults
from typing import Any

from ._config import Config

original_run = DocTestRunner.run


@functools.wraps(original_run)
def new_run(
    *args: Any,
    **kwargs: Any,
) -> TestResults:
    """Restore the active stattest settings between doctest tests."""
    try:
        return original_run(*args, **kwargs)
    finally:
        Config.reset()


DocTestRunner.run = new_run  # type: ignore
