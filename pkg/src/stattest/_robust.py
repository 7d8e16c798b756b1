"""Robust stationarity tests: neural rounding, the general robust test and its line search.

A point is certified `(epsilon, delta)`-near-approximately stationary when a
point within distance `delta` of it passes the exact test with value
`epsilon`. Rounding moves every inner weight to the nearest point with the
activation pattern it is expected to have at a nearby stationary point: small
pre-activations (`|x_i^T w_k| <= R delta`) become exact kinks and the others are
pushed at least `2 R delta` away from the kink.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Optional

import numpy as np

from ._config import resolve
from ._errors import DimensionError
from ._exact import TEST_KINDS, ExactTestResult, Status, TestKind, exact_test
from ._model import Dataset, LossModel, Network, preactivations, sample_derivatives
from ._numkit import PolyhedronSpec, project_polyhedron

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class RobustConfig:
    """Parameters of one robust test run."""

    delta: float
    kind: TestKind = "clarke"
    qp_tol: Optional[float] = None
    feas_tol: Optional[float] = None
    bound: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError(f"Rounding radius must be positive, got {self.delta!r}.")
        if self.kind not in TEST_KINDS:
            raise ValueError(f"Test kind must be 'clarke' or 'frechet', got {self.kind!r}.")


@dataclasses.dataclass(frozen=True)
class CurvatureConstants:
    """The constants C1 to C5 of one test kind."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    @property
    def mu(self) -> float:
        """Curvature constant C4 + C5."""
        return self.c4 + self.c5


@dataclasses.dataclass(frozen=True)
class Separation:
    """Separation constants of a reference point.

    `frechet` uses the `4 * C_u` denominator of the identification argument,
    `frechet_as_stated` the `C_u` denominator of the constant's definition.
    """

    clarke: float
    frechet: float
    frechet_as_stated: float


@dataclasses.dataclass(frozen=True)
class ConstantBundle:
    """Curvature constants of both test kinds and, optionally, a separation."""

    radius: float
    bound: float
    lip_value: float
    lip_grad: float
    n_samples: int
    n_units: int
    clarke: CurvatureConstants
    frechet: CurvatureConstants
    c_u: float
    separation: Optional[Separation] = None

    @property
    def c_mu_clarke(self) -> float:
        """Curvature constant of the Clarke test."""
        return self.clarke.mu

    @property
    def c_mu_frechet(self) -> float:
        """Curvature constant of the Fréchet test."""
        return self.frechet.mu

    @property
    def c_tau_clarke(self) -> Optional[float]:
        """Clarke separation of the reference point, if one was given."""
        return None if self.separation is None else self.separation.clarke

    @property
    def c_tau_frechet(self) -> Optional[float]:
        """Conservative Fréchet separation of the reference point, if one was given."""
        return None if self.separation is None else self.separation.frechet

    def c_mu(self, kind: TestKind) -> float:
        """Curvature constant of the given kind."""
        return self.c_mu_clarke if kind == "clarke" else self.c_mu_frechet


def _u_threshold(lip_grad: float, n_units: int, radius: float, bound: float) -> float:
    return lip_grad * (4.0 * n_units * radius * bound**2 + 1.0)


def constants(
    data: Dataset,
    loss: LossModel,
    bound: float,
    n_units: int,
    *,
    reference: Optional[Network] = None,
) -> ConstantBundle:
    """Curvature constants for networks of norm at most `bound`.

    Examples:
        >>> data = Dataset.create([[1.0]], [0.0])
        >>> bundle = constants(data, LossModel.square(), 1.0, 1)
        >>> bundle.clarke
        CurvatureConstants(c1=3.0, c2=3.0, c3=2.0, c4=5.0, c5=4.0)
        >>> bundle.c_mu_clarke, bundle.c_mu_frechet, bundle.c_u
        (9.0, 12.0, 5.0)
    """
    if bound < 0:
        raise ValueError(f"Norm bound must be nonnegative, got {bound}.")
    if n_units < 1:
        raise DimensionError("Number of hidden units must be positive.")
    radius, lip, count, units = data.radius, loss.lip_grad, data.n_samples, n_units

    c1 = 3.0 * lip * count * units * bound * radius
    c2 = bound * radius * c1
    c3 = 2.0 * lip * count * radius
    clarke = CurvatureConstants(
        c1, c2, c3, units * (c2 + c3), units * (bound * radius * c1 + count * radius * lip)
    )

    f1 = 4.0 * lip * count * units * bound * radius
    f2 = bound * radius * f1
    frechet = CurvatureConstants(
        f1, f2, c3, units * (f2 + c3), units * (bound * radius * f1 + 2.0 * count * radius * lip)
    )
    return ConstantBundle(
        radius,
        bound,
        loss.lip_value,
        lip,
        count,
        units,
        clarke,
        frechet,
        _u_threshold(lip, units, radius, bound),
        None if reference is None else separation(reference, data, loss),
    )


def separation(netstar: Network, data: Dataset, loss: LossModel) -> Separation:
    """Separation constants of a reference point; `math.inf` over an empty set.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> separation(Network.create([(1.0, [0.0])]), data, LossModel.identity()).clarke
        inf
    """
    values, ties = preactivations(netstar, data)
    radius = data.radius
    clearances = np.abs(values[~ties])
    tau = float(np.min(clearances)) / (4.0 * radius) if clearances.size else math.inf
    rho = sample_derivatives(netstar, data, loss)
    products = (netstar.outer[None, :] * rho[:, None])[ties]
    positive = products[products > 0.0]
    c_u = _u_threshold(loss.lip_grad, netstar.n_units, radius, netstar.norm())
    if positive.size == 0:
        return Separation(tau, tau, tau)
    smallest = float(np.min(positive))
    conservative = smallest / (4.0 * c_u) if c_u > 0 else math.inf
    as_stated = smallest / c_u if c_u > 0 else math.inf
    return Separation(tau, min(tau, conservative), min(tau, as_stated))


def _round_inner(
    net: Network,
    delta: float,
    data: Dataset,
    qp_tol: Optional[float],
    feas_tol: Optional[float],
) -> Optional[tuple[np.ndarray, list[frozenset[int]]]]:
    values, _ = preactivations(net, data)
    threshold = data.radius * delta
    rounded, pinned = [], []
    for k in range(net.n_units):
        column = values[:, k]
        kinks = np.flatnonzero(np.abs(column) <= threshold)
        above = np.flatnonzero(column > threshold)
        below = np.flatnonzero(column < -threshold)
        polyhedron = PolyhedronSpec.create(
            ge_rows=[(data.points[i], 2.0 * threshold) for i in above],
            le_rows=[(data.points[i], -2.0 * threshold) for i in below],
            eq_rows=[(data.points[i], 0.0) for i in kinks],
        )
        projection = project_polyhedron(
            net.inner[k], polyhedron, qp_tol=qp_tol, feas_tol=feas_tol
        )
        if projection.point is None:
            logger.info("Rounding unit %d at delta %.3e is infeasible", k, delta)
            return None
        rounded.append(projection.point)
        pinned.append(frozenset(int(i) for i in kinks))
    return np.array(rounded), pinned


def rnd_clarke(
    net: Network,
    delta: float,
    data: Dataset,
    *,
    qp_tol: Optional[float] = None,
    feas_tol: Optional[float] = None,
) -> Optional[Network]:
    """Round the inner weights; None when some unit has no admissible rounding.

    The rounded network pins its kinks so that later computations see them as
    exact ties.

    Examples:
        >>> data = Dataset.create([[1.0, 0.0]], [0.0])
        >>> rnd_clarke(Network.create([(1.0, [0.1, 0.9])]), 0.2, data).inner.tolist()
        [[0.0, 0.9]]
    """
    RobustConfig(delta)
    inner = _round_inner(net, delta, data, qp_tol, feas_tol)
    if inner is None:
        return None
    weights, pinned = inner
    return Network.from_arrays(net.outer, weights, pinned)


def rnd_frechet(
    net: Network,
    delta: float,
    data: Dataset,
    loss: LossModel,
    *,
    bound: Optional[float] = None,
    qp_tol: Optional[float] = None,
    feas_tol: Optional[float] = None,
) -> Optional[Network]:
    """Round the inner weights and zero the outer weights of weakly supported kinks.

    A unit keeps its outer weight unless it has kinks after rounding and
    `min_i u_k * rho_i <= 2 * C_u * delta` over them, with `rho` taken at the
    input point and `C_u = L'(4 H R B^2 + 1)`. `bound` defaults to
    `||net|| + delta`.
    """
    RobustConfig(delta, "frechet")
    inner = _round_inner(net, delta, data, qp_tol, feas_tol)
    if inner is None:
        return None
    weights, pinned = inner
    norm_bound = net.norm() + delta if bound is None else bound
    c_u = _u_threshold(loss.lip_grad, net.n_units, data.radius, norm_bound)
    rho = sample_derivatives(net, data, loss)
    outer = net.outer.copy()
    for k, kinks in enumerate(pinned):
        if not kinks:
            continue
        weakest = min(float(net.outer[k] * rho[i]) for i in kinks)
        if weakest <= 2.0 * c_u * delta:
            logger.debug("Zeroing outer weight of unit %d (min u*rho %.3e)", k, weakest)
            outer[k] = 0.0
    return Network.from_arrays(outer, weights, pinned)


@dataclasses.dataclass(frozen=True, eq=False)
class RobustTestResult:
    """Outcome of one robust test run."""

    kind: TestKind
    delta: float
    status: Status
    exact: Optional[ExactTestResult]
    rounded: Optional[Network]
    displacement: float

    @property
    def epsilon(self) -> Optional[float]:
        """Certified value, `math.inf` when nothing was certified, None when not SQ."""
        if self.exact is None:
            return math.inf
        return self.exact.epsilon

    @property
    def finite(self) -> bool:
        """True when the run certified a finite value."""
        return self.status is Status.VALUE


def rtest(
    kind: TestKind,
    net: Network,
    delta: float,
    data: Dataset,
    loss: LossModel,
    *,
    bound: Optional[float] = None,
) -> RobustTestResult:
    """Round with the rounder of `kind` and run the exact test at the rounded point.

    Returns an infinite result when rounding is infeasible or moves the point
    by more than `delta`.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> net = Network.create([(1.0, [0.1])])
        >>> result = rtest("clarke", net, 0.2, data, LossModel.identity())
        >>> result.status.value, round(result.epsilon, 12)
        ('value', 0.0)
    """
    config = RobustConfig(delta, kind, bound=bound)
    if kind == "clarke":
        rounded = rnd_clarke(net, delta, data)
    else:
        rounded = rnd_frechet(net, delta, data, loss, bound=config.bound)
    if rounded is None:
        return RobustTestResult(kind, delta, Status.INFINITE, None, None, math.inf)
    displacement = net.distance(rounded)
    if displacement > delta:
        logger.info("Rounding moved the point by %.3e > delta %.3e", displacement, delta)
        return RobustTestResult(kind, delta, Status.INFINITE, None, rounded, displacement)
    result = exact_test(kind, rounded, data, loss)
    return RobustTestResult(kind, delta, result.status, result, rounded, displacement)


@dataclasses.dataclass(frozen=True, eq=False)
class LineSearchStep:
    """One radius of the line search and its robust test result."""

    delta: float
    result: RobustTestResult


@dataclasses.dataclass(frozen=True, eq=False)
class LineSearchTrace:
    """All runs of a line search.

    `stop_bound` is the radius below which rounding leaves the point unchanged.
    """

    steps: tuple[LineSearchStep, ...]
    stop_bound: float

    @property
    def best(self) -> Optional[LineSearchStep]:
        """The run with the smallest finite value, the smaller radius on ties."""
        finite = [step for step in self.steps if step.result.finite]
        if not finite:
            return None
        return min(finite, key=lambda step: (step.result.epsilon, step.delta))


def identity_radius(net: Network, data: Dataset) -> float:
    """Largest radius at which rounding is the identity.

    This is `min |x_i^T w_k| / (2 R)` over the non-kinks.
    """
    values, ties = preactivations(net, data)
    clearances = np.abs(values[~ties])
    if clearances.size == 0:
        return math.inf
    return float(np.min(clearances)) / (2.0 * data.radius)


def line_search(
    kind: TestKind,
    net: Network,
    data: Dataset,
    loss: LossModel,
    delta0: float = 1.0,
    max_iters: int = 30,
) -> LineSearchTrace:
    """Run the robust test at `delta0, delta0 / 2, ...`.

    Stops after the first radius at which rounding is the identity, or after
    `max_iters` runs.
    """
    if not delta0 > 0:
        raise ValueError(f"Initial radius must be positive, got {delta0!r}.")
    if max_iters < 1:
        raise ValueError(f"Line search needs at least one iteration, got {max_iters}.")
    stop_bound = identity_radius(net, data)
    steps = []
    for iteration in range(max_iters):
        delta = delta0 / 2.0**iteration
        result = rtest(kind, net, delta, data, loss)
        steps.append(LineSearchStep(delta, result))
        logger.info(
            "Line search step %d: delta %.3e, status %s, value %s",
            iteration,
            delta,
            result.status.value,
            result.epsilon,
        )
        if delta <= stop_bound:
            break
    return LineSearchTrace(tuple(steps), stop_bound)


def nondegeneracy_violations(
    net: Network, data: Dataset, loss: LossModel, delta: float, *, tol: Optional[float] = None
) -> tuple[int, ...]:
    """Samples near a kink whose loss derivative vanishes.

    The Fréchet robust test assumes the loss derivative is nonzero on every
    sample that sits on a kink of the reference point; near-kinks of the
    candidate are the observable proxy.
    """
    threshold = resolve(tol, "feas_tol")
    values, _ = preactivations(net, data)
    near = np.min(np.abs(values), axis=1) <= data.radius * delta
    rho = sample_derivatives(net, data, loss)
    return tuple(int(i) for i in np.flatnonzero(near & (np.abs(rho) <= threshold)))
