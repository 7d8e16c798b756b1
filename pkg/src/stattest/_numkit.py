"""Dense numerical kernels.

Rank with tolerance, strict linear feasibility, distance to a translated
zonotope, minimum-norm points of convex hulls and Euclidean projection onto a
polyhedron. Every solver returns a `SolveReport` and raises `SolverError`
instead of returning an answer it cannot vouch for.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
from collections.abc import Iterable, Sequence
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt
import quadprog
from scipy.optimize import OptimizeResult, linprog, lsq_linear, nnls

from ._config import resolve
from ._errors import DimensionError, GuardExceededError, SolverError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
Status = Literal["optimal", "infeasible", "max_iter"]

_MAX_VERTEX_GENERATORS = 20
_POLISH_STEPS = 2000


@dataclasses.dataclass(frozen=True)
class SolveReport:
    """Outcome of a single LP or QP solve."""

    status: Status
    kkt_residual: float
    iterations: int


@dataclasses.dataclass(frozen=True, eq=False)
class SegmentSumSet:
    """The set `base + sum_j [0, 1] * generators[j]`, a translated zonotope.

    Generators are stored as the rows of a `(n, d)` array.

    Examples:
        >>> box = SegmentSumSet.create([0.0], [[1.0], [-1.0]])
        >>> box.dim, box.n_generators
        (1, 2)
        >>> box.contains([0.5])
        True
    """

    base: FloatArray
    generators: FloatArray

    def __post_init__(self) -> None:
        if self.base.ndim != 1:
            raise DimensionError("Segment sum base must be a vector.")
        if self.generators.ndim != 2 or self.generators.shape[1] != self.base.shape[0]:
            raise DimensionError(
                f"Segment sum generators must have shape (n, {self.base.shape[0]}), "
                f"got {self.generators.shape}."
            )

    @classmethod
    def create(
        cls, base: npt.ArrayLike, generators: Iterable[npt.ArrayLike] = ()
    ) -> SegmentSumSet:
        """Create a segment sum from a base vector and any iterable of generators."""
        base_array = np.array(base, dtype=float).reshape(-1)
        rows = [np.asarray(generator, dtype=float).reshape(-1) for generator in generators]
        gens = np.array(rows, dtype=float).reshape(len(rows), base_array.shape[0])
        base_array.flags.writeable = False
        gens.flags.writeable = False
        return cls(base_array, gens)

    @property
    def dim(self) -> int:
        """Dimension of the ambient space."""
        return int(self.base.shape[0])

    @property
    def n_generators(self) -> int:
        """Number of segments."""
        return int(self.generators.shape[0])

    def point(self, xi: npt.ArrayLike) -> FloatArray:
        """Return `base + generators^T xi`."""
        coeffs = np.asarray(xi, dtype=float).reshape(-1)
        if coeffs.shape[0] != self.n_generators:
            raise DimensionError(
                f"Expected {self.n_generators} coefficients, got {coeffs.shape[0]}."
            )
        return np.asarray(self.base + self.generators.T @ coeffs, dtype=float)

    def vertex_candidates(self) -> FloatArray:
        """Points obtained with every 0/1 assignment of the coefficients.

        The true vertices of the zonotope are among these points.
        """
        if self.n_generators > _MAX_VERTEX_GENERATORS:
            raise GuardExceededError(
                "zonotope vertex candidates", self.n_generators, _MAX_VERTEX_GENERATORS
            )
        patterns = np.array(
            list(itertools.product((0.0, 1.0), repeat=self.n_generators)), dtype=float
        ).reshape(-1, self.n_generators)
        return np.asarray(self.base + patterns @ self.generators, dtype=float)

    def contains(self, point: npt.ArrayLike, tol: float = 1e-8) -> bool:
        """Check whether a point lies in the set up to `tol`."""
        target = np.asarray(point, dtype=float).reshape(-1)
        shifted = SegmentSumSet(self.base - target, self.generators)
        return box_ls_distance(shifted).distance <= tol


@dataclasses.dataclass(frozen=True)
class PolyhedronSpec:
    """Linear constraint system `ge_rows`, `le_rows` and `eq_rows`.

    Each row is a pair `(a, b)` meaning `a^T z >= b`, `a^T z <= b` or
    `a^T z = b` respectively.
    """

    ge_rows: tuple[tuple[FloatArray, float], ...] = ()
    le_rows: tuple[tuple[FloatArray, float], ...] = ()
    eq_rows: tuple[tuple[FloatArray, float], ...] = ()

    def __post_init__(self) -> None:
        dims = {row.shape[0] for row, _ in self.ge_rows + self.le_rows + self.eq_rows}
        if len(dims) > 1:
            raise DimensionError(f"Polyhedron rows have different dimensions: {sorted(dims)}.")

    @classmethod
    def create(
        cls,
        ge_rows: Iterable[tuple[npt.ArrayLike, float]] = (),
        le_rows: Iterable[tuple[npt.ArrayLike, float]] = (),
        eq_rows: Iterable[tuple[npt.ArrayLike, float]] = (),
    ) -> PolyhedronSpec:
        """Create a polyhedron from array-like rows."""

        def convert(
            rows: Iterable[tuple[npt.ArrayLike, float]],
        ) -> tuple[tuple[FloatArray, float], ...]:
            return tuple(
                (np.asarray(row, dtype=float).reshape(-1), float(rhs)) for row, rhs in rows
            )

        return cls(convert(ge_rows), convert(le_rows), convert(eq_rows))

    @property
    def n_rows(self) -> int:
        """Total number of constraints."""
        return len(self.ge_rows) + len(self.le_rows) + len(self.eq_rows)

    def inequalities(self, dim: int) -> tuple[FloatArray, FloatArray]:
        """Return `(C, c)` such that the inequality rows read `C z >= c`."""
        rows = [row for row, _ in self.ge_rows] + [-row for row, _ in self.le_rows]
        rhs = [b for _, b in self.ge_rows] + [-b for _, b in self.le_rows]
        return (
            np.array(rows, dtype=float).reshape(len(rows), dim),
            np.array(rhs, dtype=float),
        )

    def equalities(self, dim: int) -> tuple[FloatArray, FloatArray]:
        """Return `(A, b)` such that the equality rows read `A z = b`."""
        rows = [row for row, _ in self.eq_rows]
        return (
            np.array(rows, dtype=float).reshape(len(rows), dim),
            np.array([b for _, b in self.eq_rows], dtype=float),
        )

    def violation(self, z: npt.ArrayLike) -> float:
        """Largest constraint violation at `z`."""
        point = np.asarray(z, dtype=float)
        ineq, ineq_rhs = self.inequalities(point.shape[0])
        eq, eq_rhs = self.equalities(point.shape[0])
        worst = 0.0
        if ineq.shape[0]:
            worst = max(worst, float(np.max(ineq_rhs - ineq @ point)))
        if eq.shape[0]:
            worst = max(worst, float(np.max(np.abs(eq @ point - eq_rhs))))
        return worst


@dataclasses.dataclass(frozen=True, eq=False)
class StrictFeasibility:
    """Verdict of a strict-inequality feasibility problem."""

    feasible: bool
    witness: Optional[FloatArray]
    margin: float
    report: SolveReport


@dataclasses.dataclass(frozen=True, eq=False)
class BoxDistance:
    """Distance from the origin to a segment sum and a minimizing coefficient vector."""

    distance: float
    xi: FloatArray
    report: SolveReport


@dataclasses.dataclass(frozen=True, eq=False)
class SimplexMinNorm:
    """Minimum-norm point of a convex hull given by its weights."""

    distance: float
    weights: FloatArray
    point: FloatArray
    report: SolveReport


@dataclasses.dataclass(frozen=True, eq=False)
class Projection:
    """Euclidean projection onto a polyhedron, `point` is None when it is empty."""

    point: Optional[FloatArray]
    report: SolveReport

    @property
    def feasible(self) -> bool:
        """True when the polyhedron is nonempty."""
        return self.point is not None


def rank_with_tolerance(matrix: npt.ArrayLike, rel_tol: Optional[float] = None) -> int:
    """Count singular values larger than `rel_tol` times the largest one.

    Examples:
        >>> rank_with_tolerance(np.eye(3))
        3
        >>> rank_with_tolerance([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
        1
        >>> rank_with_tolerance(np.zeros((2, 2)))
        0
    """
    tol = resolve(rel_tol, "rank_tol")
    if tol <= 0:
        raise ValueError(f"Relative rank tolerance must be positive, got {tol}.")
    array = np.asarray(matrix, dtype=float)
    if array.size == 0:
        return 0
    singular_values = np.linalg.svd(np.atleast_2d(array), compute_uv=False)
    if singular_values[0] == 0.0:
        return 0
    return int(np.count_nonzero(singular_values > tol * singular_values[0]))


def _check_linprog(result: OptimizeResult, what: str) -> None:
    status = result.status
    if status == 0:
        return
    iterations = int(getattr(result, "nit", 0) or 0)
    report = SolveReport("max_iter", float("inf"), iterations)
    raise SolverError(
        f"Linear program for {what} did not finish "
        f"(status {status}: {getattr(result, 'message', '')}).",
        report,
    )


def lp_strict_feasible(
    strict_rows: Sequence[tuple[npt.ArrayLike, str]],
    eq_rows: Sequence[npt.ArrayLike] = (),
    *,
    margin_tol: Optional[float] = None,
) -> StrictFeasibility:
    """Decide whether some `d` satisfies strict inequalities and homogeneous equalities.

    Each strict row is a pair `(a, sense)` with `sense` either `">"` (`a^T d > 0`)
    or `"<"` (`a^T d < 0`). Strictness is realized by maximizing a common margin
    `s` with `||d||_inf <= 1`; the system is feasible when `s > margin_tol`.

    Examples:
        >>> lp_strict_feasible([([1.0, 0.0], ">"), ([-1.0, 0.0], ">")]).feasible
        False
        >>> result = lp_strict_feasible([([1.0, 0.0], ">"), ([1.0, 1.0], "<")])
        >>> result.feasible
        True
        >>> bool(result.witness[0] > 0 and result.witness.sum() < 0)
        True
    """
    tol = resolve(margin_tol, "margin_tol")
    if not strict_rows and not eq_rows:
        raise ValueError("Strict feasibility needs at least one row.")
    rows = [np.asarray(row, dtype=float).reshape(-1) for row, _ in strict_rows]
    equalities = [np.asarray(row, dtype=float).reshape(-1) for row in eq_rows]
    dims = {row.shape[0] for row in rows + equalities}
    if len(dims) != 1:
        raise DimensionError(f"Feasibility rows have different dimensions: {sorted(dims)}.")
    dim = dims.pop()
    if not rows:
        return StrictFeasibility(True, np.zeros(dim), float("inf"), SolveReport("optimal", 0.0, 0))

    signed = []
    for row, (_, sense) in zip(rows, strict_rows):
        if sense not in (">", "<"):
            raise ValueError(f"Strict row sense must be '>' or '<', got {sense!r}.")
        norm = float(np.linalg.norm(row))
        if norm == 0.0:
            logger.debug("Zero row in strict system, no strict sign is possible")
            return StrictFeasibility(False, None, 0.0, SolveReport("infeasible", 0.0, 0))
        signed.append((row if sense == ">" else -row) / norm)

    # variables (d, s): maximize s subject to a^T d >= s, |d_j| <= 1, s <= 1
    cost = np.zeros(dim + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([-np.array(signed), np.ones((len(signed), 1))])
    b_ub = np.zeros(len(signed))
    a_eq: Optional[FloatArray] = None
    b_eq: Optional[FloatArray] = None
    if equalities:
        a_eq = np.hstack([np.array(equalities), np.zeros((len(equalities), 1))])
        b_eq = np.zeros(len(equalities))
    bounds = [(-1.0, 1.0)] * dim + [(None, 1.0)]
    result = linprog(
        cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs"
    )
    _check_linprog(result, "strict feasibility")
    margin = float(-result.fun)
    iterations = int(result.nit)
    logger.debug("Strict feasibility margin %.3e after %d iterations", margin, iterations)
    if margin > tol:
        witness = np.asarray(result.x[:dim], dtype=float)
        return StrictFeasibility(True, witness, margin, SolveReport("optimal", 0.0, iterations))
    return StrictFeasibility(False, None, margin, SolveReport("infeasible", 0.0, iterations))


def _box_kkt_residual(matrix: FloatArray, base: FloatArray, xi: FloatArray) -> float:
    gradient = matrix.T @ (base + matrix @ xi)
    raw = float(np.max(np.abs(xi - np.clip(xi - gradient, 0.0, 1.0))))
    size = float(np.linalg.norm(matrix))
    scale = max(1.0, size * (float(np.linalg.norm(base)) + size))
    return raw / scale


def _polish_box(matrix: FloatArray, base: FloatArray, xi: FloatArray) -> FloatArray:
    """Re-solve the free coordinates of a box least-squares solution exactly."""
    polished = xi.copy()
    for _ in range(3):
        free = (polished > 0.0) & (polished < 1.0)
        if not np.any(free):
            break
        fixed_part = base + matrix[:, ~free] @ polished[~free]
        solution, *_ = np.linalg.lstsq(matrix[:, free], -fixed_part, rcond=None)
        polished[free] = np.clip(solution, 0.0, 1.0)
    return polished


def box_ls_distance(segment_set: SegmentSumSet, *, qp_tol: Optional[float] = None) -> BoxDistance:
    """Distance from the origin to a segment sum.

    Solves `min ||base + P xi||` over `xi` in the unit box with bounded-variable
    least squares. Zero generators do not change the set and are skipped.

    Examples:
        >>> box_ls_distance(SegmentSumSet.create([0.0])).distance
        0.0
        >>> result = box_ls_distance(SegmentSumSet.create([1.0], [[-2.0]]))
        >>> round(result.distance, 12), round(float(result.xi[0]), 12)
        (0.0, 0.5)
        >>> round(box_ls_distance(SegmentSumSet.create([3.0], [[-2.0]])).distance, 12)
        1.0
    """
    tol = resolve(qp_tol, "qp_tol")
    base = np.asarray(segment_set.base, dtype=float)
    generators = np.asarray(segment_set.generators, dtype=float)
    xi = np.zeros(segment_set.n_generators)
    active = np.flatnonzero(np.linalg.norm(generators, axis=1) > 0.0)
    if active.size == 0:
        return BoxDistance(float(np.linalg.norm(base)), xi, SolveReport("optimal", 0.0, 0))

    matrix = generators[active].T
    result = lsq_linear(
        matrix, -base, bounds=(0.0, 1.0), method="bvls", tol=min(tol, 1e-10), lsq_solver="exact"
    )
    solution = np.clip(np.asarray(result.x, dtype=float), 0.0, 1.0)
    residual = _box_kkt_residual(matrix, base, solution)
    if residual > tol:
        polished = _polish_box(matrix, base, solution)
        polished_residual = _box_kkt_residual(matrix, base, polished)
        if polished_residual < residual:
            solution, residual = polished, polished_residual
    iterations = int(result.nit)
    if residual > tol:
        report = SolveReport("max_iter", residual, iterations)
        raise SolverError(
            f"Box least squares stopped with KKT residual {residual:.3e} above {tol:.1e}.", report
        )
    xi[active] = solution
    distance = float(np.linalg.norm(base + matrix @ solution))
    logger.debug(
        "Box least squares: %d generators, distance %.6e, residual %.2e",
        active.size,
        distance,
        residual,
    )
    return BoxDistance(distance, xi, SolveReport("optimal", residual, iterations))


def project_simplex(vector: npt.ArrayLike) -> FloatArray:
    """Euclidean projection onto the probability simplex.

    Examples:
        >>> project_simplex([0.5, 0.5]).tolist()
        [0.5, 0.5]
        >>> project_simplex([2.0, 0.0]).tolist()
        [1.0, 0.0]
    """
    values = np.asarray(vector, dtype=float).reshape(-1)
    ordered = np.sort(values)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    index = np.arange(1, values.shape[0] + 1)
    support = np.flatnonzero(ordered - cumulative / index > 0)[-1]
    threshold = cumulative[support] / (support + 1)
    return np.asarray(np.maximum(values - threshold, 0.0), dtype=float)


def _simplex_kkt_residual(points: FloatArray, weights: FloatArray) -> float:
    gradient = points @ (points.T @ weights)
    level = float(weights @ gradient)
    support = weights > 0.0
    raw = max(0.0, level - float(np.min(gradient)))
    if np.any(support):
        raw = max(raw, float(np.max(np.abs(gradient[support] - level))))
    scale = max(1.0, float(np.max(np.sum(points * points, axis=1))))
    return raw / scale


def simplex_min_norm(points: npt.ArrayLike, *, qp_tol: Optional[float] = None) -> SimplexMinNorm:
    """Minimum-norm point in the convex hull of the rows of `points`.

    The simplex QP is turned into nonnegative least squares
    `min_{u >= 0} ||P^T u||^2 + (1^T u - 1)^2` whose solution is a positive
    multiple of the optimal weights. A projected-gradient pass on the simplex
    polishes the weights when the KKT residual is above tolerance.

    Examples:
        >>> round(simplex_min_norm([[1.0], [-1.0]]).distance, 12)
        0.0
        >>> round(simplex_min_norm([[1.0, 1.0], [1.0, -1.0]]).distance, 12)
        1.0
    """
    tol = resolve(qp_tol, "qp_tol")
    array = np.atleast_2d(np.asarray(points, dtype=float))
    count = array.shape[0]
    if count == 0:
        raise ValueError("Convex hull of an empty point set is empty.")
    system = np.vstack([array.T, np.ones((1, count))])
    target = np.zeros(system.shape[0])
    target[-1] = 1.0
    try:
        scaled, _ = nnls(system, target)
    except RuntimeError as exc:
        raise SolverError(
            f"Nonnegative least squares failed: {exc}", SolveReport("max_iter", float("inf"), 0)
        ) from exc
    total = float(np.sum(scaled))
    weights = scaled / total if total > 0.0 else np.full(count, 1.0 / count)
    residual = _simplex_kkt_residual(array, weights)
    iterations = 0
    if residual > tol:
        step = 1.0 / max(float(np.linalg.norm(array, 2)) ** 2, 1e-300)
        while residual > tol and iterations < _POLISH_STEPS:
            weights = project_simplex(weights - step * (array @ (array.T @ weights)))
            iterations += 1
            if iterations % 50 == 0:
                residual = _simplex_kkt_residual(array, weights)
        residual = _simplex_kkt_residual(array, weights)
    if residual > tol:
        report = SolveReport("max_iter", residual, iterations)
        raise SolverError(
            f"Simplex minimum-norm problem stopped with KKT residual {residual:.3e}.", report
        )
    point = np.asarray(array.T @ weights, dtype=float)
    return SimplexMinNorm(
        float(np.linalg.norm(point)), weights, point, SolveReport("optimal", residual, iterations)
    )


def hull_distance(point: npt.ArrayLike, points: npt.ArrayLike) -> float:
    """Euclidean distance from `point` to the convex hull of the rows of `points`."""
    target = np.asarray(point, dtype=float).reshape(-1)
    shifted = np.atleast_2d(np.asarray(points, dtype=float)) - target
    return simplex_min_norm(shifted).distance


def _phase_one(
    ineq: FloatArray, ineq_rhs: FloatArray, eq: FloatArray, eq_rhs: FloatArray, dim: int
) -> Optional[float]:
    """Largest common slack of the inequalities, None when the equalities are inconsistent."""
    norms = np.linalg.norm(ineq, axis=1)
    norms[norms == 0.0] = 1.0
    rows = ineq / norms[:, None]
    rhs = ineq_rhs / norms
    cost = np.zeros(dim + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([-rows, np.ones((rows.shape[0], 1))]) if rows.shape[0] else None
    b_ub = -rhs if rows.shape[0] else None
    a_eq = np.hstack([eq, np.zeros((eq.shape[0], 1))]) if eq.shape[0] else None
    b_eq = eq_rhs if eq.shape[0] else None
    bounds = [(None, None)] * dim + [(None, 1.0)]
    result = linprog(
        cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs"
    )
    if result.status == 2:
        return None
    _check_linprog(result, "polyhedron phase one")
    return float(-result.fun)


def _equality_frame(
    eq: FloatArray, eq_rhs: FloatArray, dim: int, rank_tol: float
) -> tuple[FloatArray, FloatArray]:
    """Particular solution and orthonormal null-space basis of `eq z = eq_rhs`."""
    if eq.shape[0] == 0:
        return np.zeros(dim), np.eye(dim)
    left, singular, right_t = np.linalg.svd(eq, full_matrices=True)
    rank = rank_with_tolerance(eq, rank_tol)
    offset = right_t[:rank].T @ ((left[:, :rank].T @ eq_rhs) / singular[:rank])
    return np.asarray(offset, dtype=float), np.asarray(right_t[rank:].T, dtype=float)


def project_polyhedron(
    w: npt.ArrayLike,
    polyhedron: PolyhedronSpec,
    *,
    qp_tol: Optional[float] = None,
    feas_tol: Optional[float] = None,
) -> Projection:
    """Euclidean projection of `w` onto a polyhedron.

    Emptiness is decided first by a phase-one LP: the polyhedron is reported
    infeasible when the best common slack is below `-feas_tol`. Equalities are
    then eliminated with an orthonormal null-space basis and the remaining
    inequality-constrained projection is solved with quadprog.

    Examples:
        >>> on_axis = PolyhedronSpec.create(eq_rows=[([1.0, 0.0], 0.0)])
        >>> bool(np.allclose(project_polyhedron([1.0, 1.0], on_axis).point, [0.0, 1.0]))
        True
        >>> half_space = PolyhedronSpec.create(ge_rows=[([1.0, 0.0], 2.0)])
        >>> bool(np.allclose(project_polyhedron([1.0, 1.0], half_space).point, [2.0, 1.0]))
        True
        >>> empty = PolyhedronSpec.create(ge_rows=[([1.0], 1.0)], le_rows=[([1.0], -1.0)])
        >>> project_polyhedron([0.0], empty).feasible
        False
    """
    qtol = resolve(qp_tol, "qp_tol")
    ftol = resolve(feas_tol, "feas_tol")
    start = np.asarray(w, dtype=float).reshape(-1)
    dim = start.shape[0]
    ineq, ineq_rhs = polyhedron.inequalities(dim)
    eq, eq_rhs = polyhedron.equalities(dim)

    already_inside = (ineq.shape[0] == 0 or bool(np.all(ineq @ start >= ineq_rhs))) and (
        eq.shape[0] == 0 or bool(np.all(eq @ start == eq_rhs))
    )
    if already_inside:
        return Projection(start.copy(), SolveReport("optimal", 0.0, 0))

    slack = _phase_one(ineq, ineq_rhs, eq, eq_rhs, dim)
    if slack is None or slack <= -ftol:
        logger.debug("Polyhedron is empty (phase one slack %s)", slack)
        return Projection(None, SolveReport("infeasible", 0.0, 0))

    offset, basis = _equality_frame(eq, eq_rhs, dim, resolve(None, "rank_tol"))
    target = basis.T @ (start - offset)
    reduced = ineq @ basis
    reduced_rhs = ineq_rhs - ineq @ offset
    keep = np.linalg.norm(reduced, axis=1) > 1e-12 * np.maximum(np.linalg.norm(ineq, axis=1), 1.0)
    reduced, reduced_rhs = reduced[keep], reduced_rhs[keep]

    iterations = 0
    multipliers = np.zeros(reduced.shape[0])
    if basis.shape[1] == 0:
        coords = np.zeros(0)
    elif reduced.shape[0] == 0:
        coords = target
    else:
        try:
            solution = quadprog.solve_qp(
                np.eye(basis.shape[1]),
                np.ascontiguousarray(target),
                np.ascontiguousarray(reduced.T),
                np.ascontiguousarray(reduced_rhs),
                0,
            )
        except ValueError as exc:
            raise SolverError(
                f"Projection QP failed: {exc}", SolveReport("max_iter", float("inf"), 0)
            ) from exc
        coords = np.asarray(solution[0], dtype=float)
        multipliers = np.asarray(solution[4], dtype=float)
        iterations = int(solution[3][0])

    point = offset + basis @ coords
    scale = max(1.0, float(np.linalg.norm(start)))
    stationarity = 0.0
    complementarity = 0.0
    if coords.shape[0]:
        stationarity = float(np.max(np.abs(coords - target - reduced.T @ multipliers)))
    if reduced.shape[0]:
        complementarity = float(np.max(np.abs(multipliers * (reduced @ coords - reduced_rhs))))
    residual = max(stationarity, complementarity) / scale
    violation = polyhedron.violation(point)
    if residual > qtol or violation > max(ftol, ftol * scale):
        report = SolveReport("max_iter", residual, iterations)
        raise SolverError(
            f"Projection QP stopped with KKT residual {residual:.3e} "
            f"and constraint violation {violation:.3e}.",
            report,
        )
    logger.debug("Projected onto %d constraints in %d iterations", polyhedron.n_rows, iterations)
    return Projection(point, SolveReport("optimal", residual, iterations))


def sign_patterns(
    rows: npt.ArrayLike, *, margin_tol: Optional[float] = None
) -> list[tuple[tuple[int, ...], FloatArray]]:
    """Sign vectors of the cells of a central hyperplane arrangement.

    Returns every `sigma` in {-1, 1}^m for which some `d` has
    `sigma_t * rows[t]^T d > 0` for all `t`, together with such a `d`.
    Prefixes are pruned as soon as they become infeasible; patterns are listed
    in lexicographic order with -1 before 1.

    Examples:
        >>> [signs for signs, _ in sign_patterns([[1.0, 0.0], [0.0, 1.0]])]
        [(-1, -1), (-1, 1), (1, -1), (1, 1)]
        >>> [signs for signs, _ in sign_patterns([[1.0], [2.0]])]
        [(-1, -1), (1, 1)]
    """
    array = np.atleast_2d(np.asarray(rows, dtype=float))
    count = array.shape[0] if array.size else 0
    if count == 0:
        dim = array.shape[1] if array.ndim == 2 else 0
        return [((), np.zeros(dim))]
    found: list[tuple[tuple[int, ...], FloatArray]] = []

    def extend(prefix: tuple[int, ...]) -> None:
        for sign in (-1, 1):
            signs = prefix + (sign,)
            system = [(array[t], ">" if s > 0 else "<") for t, s in enumerate(signs)]
            verdict = lp_strict_feasible(system, margin_tol=margin_tol)
            if not verdict.feasible:
                continue
            if len(signs) == count:
                assert verdict.witness is not None
                found.append((signs, verdict.witness))
            else:
                extend(signs)

    extend(())
    logger.debug("Arrangement of %d hyperplanes has %d cells", count, len(found))
    return found
