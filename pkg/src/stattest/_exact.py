"""Exact Clarke and Fréchet stationarity measurement."""

from __future__ import annotations

import dataclasses
import enum
import logging
import math
from typing import Literal, Optional

import numpy as np

from ._chain import SqReport, build_subdiff_sets, check_sq
from ._model import Dataset, LossModel, Network, flatten_params, rho_and_partition
from ._numkit import FloatArray, box_ls_distance

logger = logging.getLogger(__name__)

TestKind = Literal["clarke", "frechet"]
TEST_KINDS: tuple[TestKind, ...] = ("clarke", "frechet")


class Status(str, enum.Enum):
    """Outcome class of a stationarity test."""

    NOT_SQ = "not-SQ"
    VALUE = "value"
    INFINITE = "infinite"


@dataclasses.dataclass(frozen=True, eq=False)
class ExactTestResult:
    """Distance from the origin to the tested subdifferential.

    `epsilon` is None when the span qualification fails and `math.inf` when the
    Fréchet subdifferential is empty. `units` holds the pair
    `(|u-component|, distance of the inner-weight set)` of every unit and
    `minimizer` the minimum-norm subgradient in parameter space.
    """

    kind: TestKind
    status: Status
    epsilon: Optional[float]
    units: tuple[tuple[float, float], ...]
    sq: SqReport
    minimizer: Optional[FloatArray] = None

    @property
    def finite(self) -> bool:
        """True when the test produced a finite value."""
        return self.status is Status.VALUE


def _exact_test(net: Network, data: Dataset, loss: LossModel, kind: TestKind) -> ExactTestResult:
    activity = rho_and_partition(net, data, loss)
    sq = check_sq(net, data, loss, activity=activity)
    if not sq.holds:
        logger.info("%s test: span qualification fails on units %s", kind, sq.failing_units)
        return ExactTestResult(kind, Status.NOT_SQ, None, (), sq)
    if kind == "frechet" and any(activity.iminus):
        logger.info("Fréchet test: negative ties make the subdifferential empty")
        return ExactTestResult(kind, Status.INFINITE, math.inf, (), sq)

    breakdown = []
    outer_part, inner_part = [], []
    for unit in build_subdiff_sets(net, data, loss, activity=activity):
        segment_set = unit.clarke if kind == "clarke" else unit.frechet
        assert segment_set is not None
        nearest = box_ls_distance(segment_set)
        breakdown.append((abs(unit.u_component), nearest.distance))
        outer_part.append(unit.u_component)
        inner_part.append(segment_set.point(nearest.xi))
    epsilon = math.sqrt(sum(eps_u**2 + eps_w**2 for eps_u, eps_w in breakdown))
    minimizer = flatten_params(outer_part, np.array(inner_part))
    logger.debug("%s test value %.6e", kind, epsilon)
    return ExactTestResult(kind, Status.VALUE, epsilon, tuple(breakdown), sq, minimizer)


def etest_clarke(net: Network, data: Dataset, loss: LossModel) -> ExactTestResult:
    """Distance from the origin to the Clarke subdifferential of the loss.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> result = etest_clarke(Network.create([(1.0, [0.0])]), data, LossModel.identity())
        >>> result.status.value, round(result.epsilon, 12)
        ('value', 0.0)
    """
    return _exact_test(net, data, loss, "clarke")


def etest_frechet(net: Network, data: Dataset, loss: LossModel) -> ExactTestResult:
    """Distance from the origin to the Fréchet subdifferential of the loss.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [-1.0, -1.0])
        >>> etest_frechet(Network.create([(1.0, [0.0])]), data, LossModel.linear()).status.value
        'infinite'
    """
    return _exact_test(net, data, loss, "frechet")


def exact_test(kind: TestKind, net: Network, data: Dataset, loss: LossModel) -> ExactTestResult:
    """Run the exact test of the given kind."""
    if kind not in TEST_KINDS:
        raise ValueError(f"Test kind must be 'clarke' or 'frechet', got {kind!r}.")
    return _exact_test(net, data, loss, kind)
