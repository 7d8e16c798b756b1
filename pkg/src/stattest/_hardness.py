"""Satisfiability reductions behind the hardness of stationarity testing.

A 3-CNF formula with clauses C_1, ..., C_n over m variables becomes the
piecewise linear function

    f(d) = max_i -sum_{j=1..3} max(d^T y_{3(i-1)+j}, 0)

where `y` is `e_k` for a literal `x_k` and `-e_k` for `not x_k`. The formula is
satisfiable exactly when f takes a negative value, that is exactly when the
origin is not Fréchet stationary for f. Clauses with fewer than three literals
repeat their last literal; a repeated term changes the clause sum but not its
sign, so the equivalence survives.
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
from scipy.linalg import solve_triangular
from scipy.optimize import linprog, nnls

from ._config import Config, resolve
from ._errors import DimensionError, GuardExceededError, SchemaError, SolverError
from ._numkit import FloatArray, SolveReport, _check_linprog

logger = logging.getLogger(__name__)

PltMode = Literal["exhaustive", "certificate"]

_CHUNK_BITS = 14
_QP_VARIABLE_LIMIT = 4096
_LAMBDA_RIDGE = 1e-10


@dataclasses.dataclass(frozen=True)
class Cnf3:
    """A CNF formula whose clauses hold one to three signed variable indices."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise DimensionError(f"Formula needs at least one variable, got {self.num_vars}.")
        for number, clause in enumerate(self.clauses, start=1):
            if not 1 <= len(clause) <= 3:
                raise DimensionError(
                    f"Clause {number} has {len(clause)} literals, expected one to three."
                )
            for literal in clause:
                if literal == 0 or abs(literal) > self.num_vars:
                    raise DimensionError(
                        f"Clause {number} refers to variable {abs(literal)} "
                        f"outside 1..{self.num_vars}."
                    )

    @classmethod
    def create(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> Cnf3:
        """Create a formula from any nested iterable of literals."""
        return cls(num_vars, tuple(tuple(int(lit) for lit in clause) for clause in clauses))

    @property
    def n_clauses(self) -> int:
        """Number of clauses."""
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """Evaluate the formula on a truth assignment of variables 1..m."""
        return all(
            any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in self.clauses
        )


@dataclasses.dataclass(frozen=True, eq=False)
class PltInstance:
    """Data vectors of a piecewise linear test, three per clause, as rows."""

    num_vars: int
    vectors: npt.NDArray[np.int64]

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.num_vars:
            raise DimensionError(
                f"Vectors must have shape (3n, {self.num_vars}), got {self.vectors.shape}."
            )
        if self.vectors.shape[0] == 0 or self.vectors.shape[0] % 3:
            raise DimensionError(
                f"Expected a positive multiple of three vectors, got {self.vectors.shape[0]}."
            )

    @classmethod
    def create(cls, num_vars: int, vectors: npt.ArrayLike) -> PltInstance:
        """Create an instance from integer vectors."""
        array = np.asarray(vectors)
        if array.size and not np.array_equal(array, np.round(array)):
            raise DimensionError("Vectors must have integer entries.")
        rows = np.array(array, dtype=np.int64).reshape(-1, num_vars)
        rows.flags.writeable = False
        return cls(num_vars, rows)

    @property
    def n_clauses(self) -> int:
        """Number of clause triples n."""
        return int(self.vectors.shape[0] // 3)

    @property
    def is_reduction(self) -> bool:
        """True when every vector is a signed unit vector."""
        magnitudes = np.abs(self.vectors)
        return bool(np.all(magnitudes.sum(axis=1) == 1) and np.all(magnitudes.max(axis=1) == 1))


@dataclasses.dataclass(frozen=True, eq=False)
class AbsNormalForm:
    """Abs-linear form `z = Z x + L |z|`, `y = a^T x + b^T |z|` of a piecewise linear function."""

    a: FloatArray
    b: FloatArray
    Z: FloatArray  # pylint: disable=invalid-name
    L: FloatArray  # pylint: disable=invalid-name

    def __post_init__(self) -> None:
        n_vars, n_switches = self.a.shape[0], self.b.shape[0]
        if self.Z.shape != (n_switches, n_vars):
            raise DimensionError(f"Z must have shape ({n_switches}, {n_vars}), got {self.Z.shape}.")
        if self.L.shape != (n_switches, n_switches):
            raise DimensionError(
                f"L must have shape ({n_switches}, {n_switches}), got {self.L.shape}."
            )
        if np.any(np.triu(self.L) != 0.0):
            raise DimensionError("L must be strictly lower triangular.")

    @classmethod
    def create(
        cls, a: npt.ArrayLike, b: npt.ArrayLike, Z: npt.ArrayLike, L: npt.ArrayLike
    ) -> AbsNormalForm:  # pylint: disable=invalid-name
        """Create a form from array-likes; empty `Z` and `L` are reshaped to fit."""
        a_array = np.array(a, dtype=float).reshape(-1)
        b_array = np.array(b, dtype=float).reshape(-1)
        z_array = np.array(Z, dtype=float).reshape(b_array.shape[0], a_array.shape[0])
        l_array = np.array(L, dtype=float).reshape(b_array.shape[0], b_array.shape[0])
        return cls(a_array, b_array, z_array, l_array)

    @property
    def n_vars(self) -> int:
        """Number of input variables."""
        return int(self.a.shape[0])

    @property
    def n_switches(self) -> int:
        """Number of switching variables s."""
        return int(self.b.shape[0])


def parse_dimacs(text: str) -> Cnf3:
    """Read a DIMACS CNF formula with clauses of at most three literals.

    Examples:
        >>> parse_dimacs("c demo\\np cnf 3 1\\n1 -2 3 0\\n").clauses
        ((1, -2, 3),)
    """
    header: Optional[tuple[int, int]] = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            fields = line.split()
            if header is not None or len(fields) != 4 or fields[1] != "cnf":
                raise SchemaError(f"Line {number}: malformed problem line {line!r}.")
            try:
                header = (int(fields[2]), int(fields[3]))
            except ValueError as exc:
                raise SchemaError(f"Line {number}: malformed problem line {line!r}.") from exc
            continue
        if header is None:
            raise SchemaError(f"Line {number}: clause before the problem line.")
        try:
            literals = [int(token) for token in line.split()]
        except ValueError as exc:
            raise SchemaError(f"Line {number}: non-integer literal in {line!r}.") from exc
        for literal in literals:
            if literal:
                pending.append(literal)
                continue
            if not 1 <= len(pending) <= 3:
                raise SchemaError(
                    f"Line {number}: clause with {len(pending)} literals, expected one to three."
                )
            clauses.append(tuple(pending))
            pending = []
    if header is None:
        raise SchemaError("Missing 'p cnf' problem line.")
    if pending:
        raise SchemaError("Last clause is not terminated by 0.")
    num_vars, num_clauses = header
    if len(clauses) != num_clauses:
        raise SchemaError(f"Problem line announces {num_clauses} clauses, found {len(clauses)}.")
    try:
        return Cnf3.create(num_vars, clauses)
    except DimensionError as exc:
        raise SchemaError(str(exc)) from exc


def format_dimacs(cnf: Cnf3) -> str:
    """Write a formula in DIMACS CNF."""
    lines = [f"p cnf {cnf.num_vars} {cnf.n_clauses}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def random_cnf(
    num_vars: int, num_clauses: int, rng: np.random.Generator, clause_size: int = 3
) -> Cnf3:
    """Random formula whose clauses use distinct variables with random signs."""
    if not 1 <= clause_size <= 3:
        raise ValueError(f"Clause size must be between one and three, got {clause_size}.")
    size = min(clause_size, num_vars)
    clauses = []
    for _ in range(num_clauses):
        variables = rng.choice(num_vars, size=size, replace=False) + 1
        signs = rng.choice((-1, 1), size=size)
        clauses.append(tuple(int(v * s) for v, s in zip(variables, signs)))
    return Cnf3.create(num_vars, clauses)


def sat_to_plt(cnf: Cnf3) -> PltInstance:
    """Map every literal to a signed unit vector, padding short clauses.

    Examples:
        >>> sat_to_plt(Cnf3.create(3, [(1, -2, 3)])).vectors.tolist()
        [[1, 0, 0], [0, -1, 0], [0, 0, 1]]
    """
    if not cnf.clauses:
        raise DimensionError("Formula must have at least one clause.")
    vectors = np.zeros((3 * cnf.n_clauses, cnf.num_vars), dtype=np.int64)
    for i, clause in enumerate(cnf.clauses):
        padded = clause + (clause[-1],) * (3 - len(clause))
        for j, literal in enumerate(padded):
            vectors[3 * i + j, abs(literal) - 1] = 1 if literal > 0 else -1
    return PltInstance.create(cnf.num_vars, vectors)


def _check_direction(inst: PltInstance, d: npt.ArrayLike) -> FloatArray:
    direction = np.asarray(d, dtype=float)
    if direction.shape[-1] != inst.num_vars:
        raise DimensionError(
            f"Direction has length {direction.shape[-1]}, expected {inst.num_vars}."
        )
    return direction


def _plt_values(inst: PltInstance, directions: FloatArray) -> FloatArray:
    products = np.maximum(directions @ inst.vectors.T, 0.0)
    clause_sums = products.reshape(directions.shape[0], inst.n_clauses, 3).sum(axis=2)
    return np.asarray(np.max(-clause_sums, axis=1), dtype=float)


def eval_plt(inst: PltInstance, d: npt.ArrayLike) -> float:
    """Value of the piecewise linear test function at `d`.

    Examples:
        >>> eval_plt(sat_to_plt(Cnf3.create(3, [(1, -2, 3)])), [1.0, -1.0, 1.0])
        -3.0
    """
    direction = _check_direction(inst, d).reshape(1, -1)
    return float(_plt_values(inst, direction)[0])


def eval_nnt(inst: PltInstance, u: npt.ArrayLike, w: npt.ArrayLike) -> float:
    """Value of the network form `max_i sum_j u_j * max(w^T y_j, 0)` of the test."""
    outer = np.asarray(u, dtype=float).reshape(-1)
    if outer.shape[0] != inst.vectors.shape[0]:
        raise DimensionError(
            f"Outer weights have length {outer.shape[0]}, expected {inst.vectors.shape[0]}."
        )
    inner = _check_direction(inst, w).reshape(-1)
    terms = outer * np.maximum(inst.vectors @ inner, 0.0)
    return float(np.max(terms.reshape(inst.n_clauses, 3).sum(axis=1)))


def satisfying_assignment(cnf: Cnf3) -> Optional[tuple[bool, ...]]:
    """First satisfying assignment in truth-table order, or None."""
    guard = Config.get().max_sat_vars
    if cnf.num_vars > guard:
        raise GuardExceededError("truth table variables", cnf.num_vars, guard)
    count = 2**cnf.num_vars
    chunk = 2 ** min(cnf.num_vars, _CHUNK_BITS)
    shifts = np.arange(cnf.num_vars)
    for start in range(0, count, chunk):
        index = np.arange(start, min(start + chunk, count))
        table = ((index[:, None] >> shifts) & 1).astype(bool)
        satisfied = np.ones(index.shape[0], dtype=bool)
        for clause in cnf.clauses:
            hit = np.zeros(index.shape[0], dtype=bool)
            for literal in clause:
                column = table[:, abs(literal) - 1]
                hit |= column if literal > 0 else ~column
            satisfied &= hit
        found = np.flatnonzero(satisfied)
        if found.size:
            return tuple(bool(value) for value in table[found[0]])
    return None


def brute_sat(cnf: Cnf3) -> bool:
    """Satisfiability by truth table.

    Examples:
        >>> brute_sat(Cnf3.create(1, [(1,), (-1,)]))
        False
    """
    return satisfying_assignment(cnf) is not None


def assignment_direction(assignment: Sequence[bool]) -> FloatArray:
    """The direction `d_k = 1` for true and `-1` for false variables."""
    return np.where(np.asarray(assignment, dtype=bool), 1.0, -1.0)


def _require_reduction(inst: PltInstance, mode: str) -> None:
    if not inst.is_reduction:
        raise DimensionError(f"{mode} needs every vector to be a signed unit vector.")


def _negative_corner(inst: PltInstance) -> Optional[FloatArray]:
    guard = Config.get().max_exhaustive_vars
    if inst.num_vars > guard:
        raise GuardExceededError("exhaustive sign vectors", inst.num_vars, guard)
    count = 2**inst.num_vars
    chunk = 2 ** min(inst.num_vars, _CHUNK_BITS)
    shifts = np.arange(inst.num_vars)
    for start in range(0, count, chunk):
        index = np.arange(start, min(start + chunk, count))
        corners = ((index[:, None] >> shifts) & 1) * 2.0 - 1.0
        values = _plt_values(inst, corners)
        negative = np.flatnonzero(values < 0.0)
        if negative.size:
            return np.asarray(corners[negative[0]], dtype=float)
    return None


def _orthant_pieces(inst: PltInstance, signs: npt.NDArray[np.int64]) -> FloatArray:
    # On the closed orthant max(s * d_k, 0) is s * d_k when s agrees with the orthant, else 0.
    agrees = (inst.vectors * signs[None, :]) > 0
    pieces = -np.where(agrees, inst.vectors, 0).astype(float)
    return np.asarray(pieces.reshape(inst.n_clauses, 3, inst.num_vars).sum(axis=1), dtype=float)


def plt_frechet_distance(inst: PltInstance, *, qp_tol: Optional[float] = None) -> float:
    """Distance from the origin to the Fréchet subdifferential of the test function at 0.

    On the closed orthant with signs `sigma` the function is the maximum of
    the clause pieces `C_sigma d`, so `g` is a Fréchet subgradient exactly when
    for every orthant some `lambda` in the simplex has
    `sigma * (C_sigma^T lambda - g) >= 0`. The least-norm `g` comes from one
    quadratic program over `g` and all `lambda`; `math.inf` means the
    subdifferential is empty.
    """
    _require_reduction(inst, "Fréchet distance of a test function")
    tol = resolve(qp_tol, "qp_tol")
    m, n = inst.num_vars, inst.n_clauses
    orthants = [np.array(signs) for signs in itertools.product((-1, 1), repeat=m)]
    size = m + len(orthants) * n
    if size > _QP_VARIABLE_LIMIT:
        raise GuardExceededError("subgradient QP variables", size, _QP_VARIABLE_LIMIT)

    ineq_rows, eq_rows = [], []
    for t, signs in enumerate(orthants):
        pieces = _orthant_pieces(inst, signs)
        offset = m + t * n
        block = np.zeros((m, size))
        block[:, :m] = -np.diag(signs)
        block[:, offset : offset + n] = signs[:, None] * pieces.T
        ineq_rows.append(block)
        simplex = np.zeros(size)
        simplex[offset : offset + n] = 1.0
        eq_rows.append(simplex)
    positivity = np.zeros((size - m, size))
    positivity[:, m:] = np.eye(size - m)
    ineq = np.vstack(ineq_rows + [positivity])
    eq = np.array(eq_rows)

    result = linprog(
        np.zeros(size),
        A_ub=-ineq,
        b_ub=np.zeros(ineq.shape[0]),
        A_eq=eq,
        b_eq=np.ones(eq.shape[0]),
        bounds=[(None, None)] * size,
        method="highs",
    )
    if result.status == 2:
        logger.debug("Fréchet subdifferential of the test function is empty")
        return float("inf")
    _check_linprog(result, "Fréchet subgradient feasibility")

    hessian = np.diag(np.concatenate([np.ones(m), np.full(size - m, _LAMBDA_RIDGE)]))
    constraints = np.vstack([eq, ineq])
    rhs = np.concatenate([np.ones(eq.shape[0]), np.zeros(ineq.shape[0])])
    try:
        solution, *_ = quadprog.solve_qp(
            hessian, np.zeros(size), constraints.T, rhs, eq.shape[0]
        )
    except ValueError as exc:
        raise SolverError(
            f"Subgradient QP failed: {exc}", SolveReport("max_iter", float("inf"), 0)
        ) from exc
    violation = max(
        float(np.max(np.abs(eq @ solution - 1.0))), float(np.max(-(ineq @ solution), initial=0.0))
    )
    if violation > max(tol, 1e-7):
        raise SolverError(
            f"Subgradient QP violates its constraints by {violation:.3e}.",
            SolveReport("max_iter", violation, 0),
        )
    return float(np.linalg.norm(solution[:m]))


def _certificate_direction(inst: PltInstance) -> Optional[FloatArray]:
    guard = Config.get().max_certificate_clauses
    if inst.n_clauses > guard:
        raise GuardExceededError("certificate clauses", inst.n_clauses, guard)
    rows = inst.vectors.reshape(inst.n_clauses, 3, inst.num_vars)

    def search(chosen: list[npt.NDArray[np.int64]]) -> Optional[FloatArray]:
        clause = len(chosen)
        if clause == inst.n_clauses:
            # d^T y >= 1 for one vector per clause puts every clause sum at or below -1
            result = linprog(
                np.zeros(inst.num_vars),
                A_ub=-np.array(chosen, dtype=float),
                b_ub=-np.ones(clause),
                bounds=[(None, None)] * inst.num_vars,
                method="highs",
            )
            if result.status == 2:
                return None
            _check_linprog(result, "stationarity certificate")
            return np.asarray(result.x, dtype=float)
        for vector in rows[clause]:
            if any(np.array_equal(vector, -other) for other in chosen):
                continue
            found = search(chosen + [vector])
            if found is not None:
                return found
        return None

    return search([])


def plt_stationary(
    inst: PltInstance, epsilon: float = 0.0, mode: PltMode = "exhaustive"
) -> bool:
    """Decide whether the origin is `epsilon`-Fréchet stationary for the test function.

    `exhaustive` checks the sign vectors `{-1, 1}^m` for `epsilon = 0` and solves
    the least-norm subgradient problem otherwise; it needs signed unit
    vectors. `certificate` searches one vector per clause and a direction
    making all of them positive, which works for any integer data and
    `epsilon = 0`.

    Examples:
        >>> plt_stationary(sat_to_plt(Cnf3.create(1, [(1,), (-1,)])))
        True
        >>> plt_stationary(sat_to_plt(Cnf3.create(3, [(1, -2, 3)])), mode="certificate")
        False
    """
    if epsilon < 0:
        raise ValueError(f"Stationarity level must be nonnegative, got {epsilon}.")
    if mode == "certificate":
        if epsilon > 0:
            raise ValueError("Certificate mode decides exact stationarity only.")
        return _certificate_direction(inst) is None
    if mode != "exhaustive":
        raise ValueError(f"Mode must be 'exhaustive' or 'certificate', got {mode!r}.")
    _require_reduction(inst, "Exhaustive mode")
    if epsilon == 0:
        return _negative_corner(inst) is None
    return plt_frechet_distance(inst) <= epsilon


@dataclasses.dataclass(frozen=True)
class NntReport:
    """Agreement of network-form difference quotients with the test function."""

    n_directions: int
    seed: int
    max_error: float
    errors: tuple[float, ...]


def nnt_directional_check(
    inst: PltInstance, n_directions: int = 100, seed: Optional[int] = None, step: float = 1e-6
) -> NntReport:
    """Compare directional derivatives of the network form at `(-1, 0)` with the test function.

    The derivative along `(d_u, d_w)` is estimated with the extrapolated
    quotient `2 q(t / 2) - q(t)` and should equal `f(d_w)`.
    """
    if n_directions < 1:
        raise ValueError(f"Need at least one direction, got {n_directions}.")
    chosen_seed = Config.get().seed if seed is None else seed
    rng = np.random.default_rng(chosen_seed)
    outer = -np.ones(inst.vectors.shape[0])
    inner = np.zeros(inst.num_vars)
    origin = eval_nnt(inst, outer, inner)

    def quotient(d_u: FloatArray, d_w: FloatArray, t: float) -> float:
        return (eval_nnt(inst, outer + t * d_u, inner + t * d_w) - origin) / t

    errors = []
    for _ in range(n_directions):
        d_u = rng.standard_normal(outer.shape[0])
        d_w = rng.standard_normal(inst.num_vars)
        norm = float(np.linalg.norm(np.concatenate([d_u, d_w])))
        d_u, d_w = d_u / norm, d_w / norm
        estimate = 2.0 * quotient(d_u, d_w, step / 2.0) - quotient(d_u, d_w, step)
        errors.append(abs(estimate - eval_plt(inst, d_w)))
    return NntReport(n_directions, chosen_seed, max(errors), tuple(errors))


def plt_to_abs_normal(inst: PltInstance) -> AbsNormalForm:
    """Abs-linear form of the test function with `4n - 1` switching variables.

    The first `3n` switches are `z_j = y_j^T d`, so every clause value is
    `q_i = -1/2 sum_j (y_j^T d + |z_j|)`. The running maximum
    `M_t = max(M_{t-1}, q_t)` is `(M_{t-1} + q_t) / 2 + |M_{t-1} - q_t| / 2`,
    which spends one more switch per clause after the first.

    Examples:
        >>> anf = plt_to_abs_normal(sat_to_plt(Cnf3.create(1, [(1,), (-1,)])))
        >>> anf.n_vars, anf.n_switches
        (1, 7)
    """
    m, n = inst.num_vars, inst.n_clauses
    count = 3 * n
    switches = count + n - 1
    z_matrix = np.zeros((switches, m))
    l_matrix = np.zeros((switches, switches))
    z_matrix[:count] = inst.vectors

    def clause(i: int) -> tuple[FloatArray, FloatArray]:
        d_part = -0.5 * inst.vectors[3 * i : 3 * i + 3].sum(axis=0).astype(float)
        p_part = np.zeros(switches)
        p_part[3 * i : 3 * i + 3] = -0.5
        return d_part, p_part

    running_d, running_p = clause(0)
    for t in range(1, n):
        q_d, q_p = clause(t)
        row = count + t - 1
        z_matrix[row] = running_d - q_d
        l_matrix[row] = running_p - q_p
        running_d = 0.5 * (running_d + q_d)
        running_p = 0.5 * (running_p + q_p)
        running_p[row] += 0.5
    return AbsNormalForm(running_d, running_p, z_matrix, l_matrix)


def eval_abs_normal(anf: AbsNormalForm, x: npt.ArrayLike) -> float:
    """Evaluate an abs-linear form by computing its switches in order."""
    point = np.asarray(x, dtype=float).reshape(-1)
    if point.shape[0] != anf.n_vars:
        raise DimensionError(f"Point has length {point.shape[0]}, expected {anf.n_vars}.")
    magnitudes = np.zeros(anf.n_switches)
    linear = anf.Z @ point
    for i in range(anf.n_switches):
        magnitudes[i] = abs(linear[i] + anf.L[i, :i] @ magnitudes[:i])
    return float(anf.a @ point + anf.b @ magnitudes)


def anft_incompatible_signature(
    anf: AbsNormalForm, *, tol: Optional[float] = None
) -> Optional[tuple[int, ...]]:
    """First signature whose first-order system has no solution `mu >= 0`, or None.

    For a signature `sigma` the system reads
    `a + M^T (b - mu) = 0` with `M = (Diag(sigma) - L)^{-1} Z`, solved as the
    nonnegative least squares problem `min ||M^T mu - (a + M^T b)||`.
    """
    threshold = resolve(tol, "feas_tol")
    guard = Config.get().max_anft_switches
    if anf.n_switches > guard:
        raise GuardExceededError("abs-normal signatures", anf.n_switches, guard)
    if anf.n_switches == 0:
        return None if np.linalg.norm(anf.a) <= threshold else ()
    for signs in itertools.product((-1, 1), repeat=anf.n_switches):
        matrix = solve_triangular(np.diag(signs) - anf.L, anf.Z, lower=True)
        target = anf.a + matrix.T @ anf.b
        try:
            _, residual = nnls(matrix.T, target)
        except RuntimeError as exc:
            raise SolverError(
                f"Nonnegative least squares failed: {exc}", SolveReport("max_iter", float("inf"), 0)
            ) from exc
        if residual > threshold * max(1.0, float(np.linalg.norm(target))):
            logger.debug("Signature %s is incompatible (residual %.3e)", signs, residual)
            return tuple(int(s) for s in signs)
    return None


def anft_check(anf: AbsNormalForm, *, tol: Optional[float] = None) -> bool:
    """True when some signature makes the first-order system incompatible.

    Examples:
        >>> anft_check(plt_to_abs_normal(sat_to_plt(Cnf3.create(3, [(1, -2, 3)]))))
        True
    """
    return anft_incompatible_signature(anf, tol=tol) is not None
