"""Run configuration: tolerances, enumeration guards and output settings."""

from __future__ import annotations

import dataclasses
import json
import logging
import os
from collections.abc import Generator, Mapping
from contextlib import contextmanager
from typing import Any, ClassVar, Optional

from ._errors import SchemaError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "STATTEST_CONFIG"

_TOLERANCES = ("rank_tol", "qp_tol", "feas_tol", "margin_tol")
_GUARDS = (
    "max_ties",
    "max_limiting_ties",
    "max_position_subsets",
    "max_exhaustive_vars",
    "max_certificate_clauses",
    "max_anft_switches",
    "max_sat_vars",
)
_OUTPUTS = ("text", "json")


@dataclasses.dataclass(frozen=True)
class Settings:
    """Immutable set of tolerances and guards used by every operation.

    Examples:
        >>> Settings().qp_tol
        1e-09
        >>> Settings(margin_tol=1e-6).margin_tol
        1e-06
        >>> Settings(feas_tol=0.0)
        Traceback (most recent call last):
          ...
        ValueError: Tolerance 'feas_tol' must be positive, got 0.0.
    """

    rank_tol: float = 1e-9
    qp_tol: float = 1e-9
    feas_tol: float = 1e-8
    margin_tol: float = 1e-7
    max_ties: int = 20
    max_limiting_ties: int = 20
    max_position_subsets: int = 10**6
    max_exhaustive_vars: int = 20
    max_certificate_clauses: int = 12
    max_anft_switches: int = 16
    max_sat_vars: int = 20
    seed: int = 0
    output: str = "text"

    def __post_init__(self) -> None:
        for name in _TOLERANCES:
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"Tolerance '{name}' must be positive, got {value!r}.")
        for name in _GUARDS:
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"Guard '{name}' must be a positive integer, got {value!r}.")
        if self.output not in _OUTPUTS:
            raise ValueError(
                f"Output format must be one of {', '.join(_OUTPUTS)}, got {self.output!r}."
            )

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> Settings:
        """Create settings from a mapping, rejecting unknown keys."""
        known = {field.name for field in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise SchemaError(f"Unknown configuration keys: {', '.join(unknown)}.")
        return cls(**dict(values))

    @classmethod
    def from_file(cls, path: str) -> Settings:
        """Read settings from a JSON document."""
        with open(path, encoding="utf-8") as file:
            try:
                values = json.load(file)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"Configuration file '{path}' is not valid JSON: {exc}") from exc
        if not isinstance(values, dict):
            raise SchemaError(f"Configuration file '{path}' must contain a JSON object.")
        return cls.from_dict(values)

    def replace(self, **changes: Any) -> Settings:
        """Return a copy with the given fields changed."""
        return dataclasses.replace(self, **changes)


class Config:
    """Holder of the active settings.

    Library functions read their default tolerances from here. Tests and the
    command line override the active settings with `Config.override`.
    """

    CURRENT: ClassVar[Optional[Settings]] = None

    @classmethod
    def get(cls) -> Settings:
        """Return the active settings, loading them on first use."""
        if cls.CURRENT is None:
            cls.CURRENT = cls.load()
        return cls.CURRENT

    @classmethod
    def load(cls) -> Settings:
        """Load settings from the file named by the STATTEST_CONFIG variable.

        Defaults are used when the variable is not set.
        """
        path = os.environ.get(CONFIG_ENV_VAR)
        if not path:
            return Settings()
        logger.debug("Loading configuration from %s", path)
        return Settings.from_file(path)

    @classmethod
    def set(cls, settings: Settings) -> None:
        """Make the given settings active."""
        cls.CURRENT = settings

    @classmethod
    def reset(cls) -> None:
        """Forget the active settings so that the next `get` reloads them."""
        cls.CURRENT = None

    @classmethod
    @contextmanager
    def override(cls, **changes: Any) -> Generator[Settings, None, None]:
        """Temporarily change some settings.

        Examples:
            >>> with Config.override(rank_tol=1e-6) as settings:
            ...     settings.rank_tol
            1e-06
        """
        previous = cls.CURRENT
        settings = cls.get().replace(**changes)
        cls.CURRENT = settings
        try:
            yield settings
        finally:
            cls.CURRENT = previous


def resolve(value: Optional[float], name: str) -> float:
    """Return `value` or the active setting called `name` when it is None."""
    if value is not None:
        return value
    return float(getattr(Config.get(), name))
