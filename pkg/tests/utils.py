"""Utility functions for testing."""

import re
from collections.abc import Generator
from contextlib import contextmanager
from typing import Union

import numpy as np
import numpy.typing as npt


@contextmanager
def assert_raises(
    expected_exception: type[BaseException], match: Union[re.Pattern[str], str]
) -> Generator[None, None, None]:
    """Context manager to assert that an exception is raised with a specific error message.

    Args:
        expected_exception: Exception that is expected to be raised.
        match: String or regex pattern to match the error message against.

    Raises:
        AssertionError: Raised if the given exception or the message does not
            match the raised exception.
    """
    try:
        yield
    except Exception as raised_exception:  # pylint: disable=broad-except
        if not isinstance(raised_exception, expected_exception):
            raise AssertionError(  # pylint: disable=raise-missing-from
                f"\nExpected exception: '{expected_exception}'\n"
                f"Raised exception: '{type(raised_exception)}: {raised_exception}'"
            )
        if isinstance(match, re.Pattern):
            fail = not match.search(str(raised_exception))
            match = match.pattern
        else:
            fail = str(raised_exception) != match
        if fail:
            raise AssertionError(
                f"Expected error message:\n\n'{match}'\n"
                f"\nBut got:\n\n'{raised_exception}'\n\n"
            ) from raised_exception
    else:
        raise AssertionError(f"Exception '{expected_exception.__name__}' was not raised")


def assert_close(actual: npt.ArrayLike, expected: npt.ArrayLike, tol: float = 1e-8) -> None:
    """Assert that two numbers or arrays agree entrywise up to an absolute tolerance.

    Raises:
        AssertionError: Raised if shapes differ or some entry is off by more than `tol`.
    """
    left = np.asarray(actual, dtype=float)
    right = np.asarray(expected, dtype=float)
    if left.shape != right.shape:
        raise AssertionError(f"Shape {left.shape} does not match expected shape {right.shape}")
    if left.size and float(np.max(np.abs(left - right))) > tol:
        raise AssertionError(
            f"\nExpected: {right.tolist()}\nActual:   {left.tolist()}\n(tol {tol})"
        )
