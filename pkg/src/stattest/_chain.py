"""Subdifferential sets of the empirical loss and the regularity conditions behind them.

For every hidden unit k the tied samples J_eq(k) split into `iplus`
(`u_k * rho_i >= 0`) and `iminus`. With the active part

    a_k = sum over untied active samples of u_k * rho_i * x_i

the Clarke set of the unit is `a_k + sum_{j tied} [0, 1] * u_k * rho_j * x_j`. The
Fréchet set keeps only the `iplus` segments and is empty as soon as `iminus` is
not. The limiting set is a union of such zonotopes, one per sign pattern of the
`iminus` samples that some direction realizes. These formulas are exact
precisely when the span qualification holds: the tied samples of `iplus` and
`iminus` span subspaces meeting only at the origin.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from typing import Optional

import numpy as np

from ._config import Config, resolve
from ._errors import GuardExceededError
from ._model import (
    Activity,
    Dataset,
    LossModel,
    Network,
    preactivations,
    rho_and_partition,
    switching_matrix,
)
from ._numkit import SegmentSumSet, rank_with_tolerance, sign_patterns

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class UnitSubdiff:
    """Subdifferential sets of the inner weights of one hidden unit.

    `frechet` is None when the Fréchet set is empty.
    """

    u_component: float
    clarke: SegmentSumSet
    frechet: Optional[SegmentSumSet]
    limiting: tuple[SegmentSumSet, ...]
    n_negative: int = 0

    @property
    def limiting_general_position(self) -> bool:
        """True when every sign pattern of the negative ties is realizable."""
        return len(self.limiting) == 2**self.n_negative


@dataclasses.dataclass(frozen=True)
class UnitSq:
    """Ranks of the positive, negative and joint tied data of one unit."""

    r_plus: int
    r_minus: int
    r_joint: int

    @property
    def holds(self) -> bool:
        """Whether the two spans intersect only at the origin."""
        return self.r_joint == self.r_plus + self.r_minus


@dataclasses.dataclass(frozen=True)
class SqReport:
    """Span qualification verdict for every unit."""

    units: tuple[UnitSq, ...]

    @property
    def holds(self) -> bool:
        """Whether the span qualification holds for all units."""
        return all(unit.holds for unit in self.units)

    @property
    def failing_units(self) -> tuple[int, ...]:
        """Indices of the units that violate the span qualification."""
        return tuple(k for k, unit in enumerate(self.units) if not unit.holds)


@dataclasses.dataclass(frozen=True)
class Regularities:
    """Verdicts of the regularity conditions at a point."""

    general_position: bool
    likq: bool
    liad: bool
    sq: bool


def check_sq(
    net: Network,
    data: Dataset,
    loss: LossModel,
    rel_tol: Optional[float] = None,
    *,
    activity: Optional[Activity] = None,
) -> SqReport:
    """Check the span qualification with rank computations.

    Examples:
        >>> data = Dataset.create([[1.0], [1.0]], [-1.0, 1.0])
        >>> check_sq(Network.create([(1.0, [0.0])]), data, LossModel.square()).holds
        False
    """
    tol = resolve(rel_tol, "rank_tol")
    activity = activity or rho_and_partition(net, data, loss)
    units = []
    for k in range(net.n_units):
        plus = data.points[list(activity.iplus[k])]
        minus = data.points[list(activity.iminus[k])]
        joint = np.vstack([plus, minus])
        units.append(
            UnitSq(
                rank_with_tolerance(plus, tol),
                rank_with_tolerance(minus, tol),
                rank_with_tolerance(joint, tol),
            )
        )
    report = SqReport(tuple(units))
    logger.debug("Span qualification %s (failing units %s)", report.holds, report.failing_units)
    return report


def build_subdiff_sets(
    net: Network,
    data: Dataset,
    loss: LossModel,
    *,
    activity: Optional[Activity] = None,
    margin_tol: Optional[float] = None,
) -> list[UnitSubdiff]:
    """Clarke, Fréchet and limiting sets of every hidden unit.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> [unit] = build_subdiff_sets(Network.create([(1.0, [0.0])]), data, LossModel.identity())
        >>> unit.clarke.generators.tolist(), unit.frechet is not None, len(unit.limiting)
        ([[1.0], [-1.0]], True, 1)
    """
    activity = activity or rho_and_partition(net, data, loss)
    values, ties = preactivations(net, data)
    relu = np.maximum(values, 0.0)
    active = (values > 0.0) & ~ties
    rho = activity.rho
    guard = Config.get().max_limiting_ties
    units = []
    for k, (u_k, _) in enumerate(net.units):
        u_component = float(rho @ relu[:, k])
        base = u_k * ((active[:, k] * rho) @ data.points)
        plus, minus = activity.iplus[k], activity.iminus[k]
        tied = sorted(plus + minus)
        clarke = SegmentSumSet.create(base, (u_k * rho[j] * data.points[j] for j in tied))
        frechet = None
        if not minus:
            frechet = SegmentSumSet.create(base, (u_k * rho[j] * data.points[j] for j in plus))
        if len(minus) > guard:
            raise GuardExceededError("limiting sign patterns", len(minus), guard)
        plus_generators = [u_k * rho[j] * data.points[j] for j in plus]
        members = []
        for signs, _ in sign_patterns(data.points[list(minus)], margin_tol=margin_tol):
            shift = sum(
                (u_k * rho[t] * data.points[t] for t, s in zip(minus, signs) if s > 0),
                np.zeros(data.dim),
            )
            members.append(SegmentSumSet.create(base + shift, plus_generators))
        units.append(UnitSubdiff(u_component, clarke, frechet, tuple(members), len(minus)))
    return units


def _general_position(data: Dataset, limit: int) -> bool:
    size = min(data.n_samples, data.dim)
    count = math.comb(data.n_samples, size)
    if count > limit:
        raise GuardExceededError("general position subsets", count, limit)
    tol = resolve(None, "rank_tol")
    return all(
        rank_with_tolerance(data.points[list(subset)], tol) == size
        for subset in itertools.combinations(range(data.n_samples), size)
    )


def check_regularities(net: Network, data: Dataset, loss: LossModel) -> Regularities:
    """General position of the data, LIKQ, LIAD and the span qualification at a point.

    General position asks every `min(N, d)` data points to be linearly
    independent. LIKQ is the full row rank of the switching-variable Jacobian
    restricted to the active kinks, LIAD the linear independence of the tied
    data of every unit.
    """
    settings = Config.get()
    activity = rho_and_partition(net, data, loss)
    general = _general_position(data, settings.max_position_subsets)
    tied_rows = [k * data.n_samples + i for k, eq in enumerate(activity.partition.eq) for i in eq]
    jacobian = switching_matrix(net, data)[tied_rows]
    likq = rank_with_tolerance(jacobian, settings.rank_tol) == len(tied_rows)
    liad = all(
        rank_with_tolerance(data.points[list(eq)], settings.rank_tol) == len(eq)
        for eq in activity.partition.eq
    )
    sq = check_sq(net, data, loss, settings.rank_tol, activity=activity).holds
    return Regularities(general, likq, liad, sq)
