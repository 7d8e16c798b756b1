"""Pytest plugin."""

from collections.abc import Generator
from typing import Any, Callable, Optional

import pytest
from _pytest.runner import CallInfo, Item, TestReport

from ._config import Config, Settings


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(
    item: Item,  # pylint: disable=unused-argument
    call: CallInfo[None],
) -> Generator[None, Optional[TestReport], None]:
    """Restore the active stattest settings after a test."""
    if call.when == "teardown":
        Config.reset()

    _test_report: Optional[TestReport] = yield


@pytest.fixture
def stattest_settings() -> Generator[Callable[..., Settings], None, None]:
    """Override stattest settings for the rest of a test.

    Examples:
        def test_loose_ranks(stattest_settings):
            settings = stattest_settings(rank_tol=1e-6)
            assert settings.rank_tol == 1e-6
    """
    previous = Config.CURRENT

    def override(**changes: Any) -> Settings:
        settings = Config.get().replace(**changes)
        Config.set(settings)
        return settings

    yield override
    Config.CURRENT = previous
