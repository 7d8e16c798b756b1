"""Common problem instances for testing."""

# pylint: disable=missing-docstring
from typing import Optional

import numpy as np

from stattest import Cnf3, Dataset, LossModel, Network

Problem = tuple[Network, Dataset, LossModel]


def abs_kink() -> Problem:
    """`|w|` at `w = 0`: stationary in every sense."""
    data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
    return Network.create([(1.0, [0.0])]), data, LossModel.identity()


def neg_abs_kink() -> Problem:
    """`-|w|` at `w = 0`: Clarke stationary but not Fréchet stationary."""
    data = Dataset.create([[1.0], [-1.0]], [-1.0, -1.0])
    return Network.create([(1.0, [0.0])]), data, LossModel.linear()


def smooth_point() -> Problem:
    """No kinks at all, so every test reduces to the gradient norm."""
    data = Dataset.create([[1.0, 0.0], [0.0, 1.0]], [1.0, 0.0])
    return Network.create([(2.0, [1.0, 1.0])]), data, LossModel.square()


def opposite_twins() -> Problem:
    """Two copies of a tied point with opposite loss coefficients violate the span qualification."""
    data = Dataset.create([[1.0], [1.0]], [1.0, -1.0])
    return Network.create([(1.0, [0.0])]), data, LossModel.linear()


def non_sq_gap() -> Problem:
    """Span qualification fails and the chain-rule set is strictly larger than the true one.

    The true Clarke distance is 1.5 while the chain-rule set is at distance `sqrt(2)`.
    """
    data = Dataset.create([[1.0, 0.0], [1.0, 0.0], [1.5, 1.0]], [1.0, -2.0, 1.0])
    return Network.create([(1.0, [0.0, 1.0])]), data, LossModel.linear()


def sq_without_liad() -> Problem:
    """Four tied points of rank three whose positive and negative spans only meet at 0."""
    points = [
        [0.0, 2.0, 0.0, 1.0],
        [2.0, 0.0, 2.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, -1.0, 1.0],
    ]
    data = Dataset.create(points, [1.0, 1.0, 1.0, -1.0])
    return Network.create([(1.0, [0.0, 0.0, 0.0, 0.0])]), data, LossModel.linear()


def liad_without_position() -> Problem:
    """Independent tied data that is not in general position."""
    points = [[0.0, -2.0, 1.0], [0.0, -1.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]
    data = Dataset.create(points, [1.0, 1.0, 1.0, -1.0])
    return Network.create([(1.0, [1.0, 1.0, -1.0])]), data, LossModel.linear()


def clarke_critical() -> Problem:
    """Square loss point with two tied samples and one zero-residual active sample."""
    points = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
    data = Dataset.create(points, [-1.0, -1.0, 1.0, 0.0])
    return Network.create([(1.0, [0.0, 1.0])]), data, LossModel.square()


def frechet_critical() -> Problem:
    """`clarke_critical` with a second, switched-off unit sharing the ties."""
    net, data, loss = clarke_critical()
    return Network.create([(1.0, [0.0, 1.0]), (0.0, [0.0, -1.0])]), data, loss


def perturb(net: Network, radius: float, rng: np.random.Generator) -> Network:
    """Move a network by exactly `radius` in a random direction."""
    direction = rng.standard_normal(net.n_params)
    direction *= radius / np.linalg.norm(direction)
    return Network.from_flat(net.flat() + direction, net.dim)


def _nonzero_row(rng: np.random.Generator, dim: int) -> np.ndarray:
    while True:
        row = rng.integers(-2, 3, size=dim).astype(float)
        if np.any(row != 0.0):
            return row


def _tying_weight(points: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n_samples, dim = points.shape
    choice = rng.integers(0, 3)
    if choice == 0 or dim == 1:
        return np.zeros(dim) if choice == 0 else rng.integers(-2, 3, size=dim).astype(float)
    first = points[rng.integers(0, n_samples)]
    if dim == 2:
        weight = np.array([-first[1], first[0]])
    else:
        second = points[rng.integers(0, n_samples)]
        weight = np.cross(first, second)
        if not np.any(weight != 0.0):
            weight = np.cross(first, _nonzero_row(rng, dim))
    return weight * rng.choice((-1.0, 1.0))


def random_problem(
    rng: np.random.Generator,
    *,
    max_dim: int = 3,
    max_samples: int = 5,
    max_units: int = 2,
    loss: Optional[LossModel] = None,
) -> Problem:
    """Small integer instance whose inner weights are built to create exact ties.

    Some inner weights are orthogonal to one or two data points, others are
    zero. A zero inner weight ties every sample of the unit, so such instances
    are generally not in general position when `N > d`.
    """
    dim = int(rng.integers(1, max_dim + 1))
    n_samples = int(rng.integers(1, max_samples + 1))
    n_units = int(rng.integers(1, max_units + 1))
    points = np.array([_nonzero_row(rng, dim) for _ in range(n_samples)])
    labels = rng.integers(-2, 3, size=n_samples).astype(float)
    units = [
        (float(rng.integers(-2, 3)), _tying_weight(points, rng)) for _ in range(n_units)
    ]
    chosen = loss or (LossModel.identity() if rng.integers(0, 2) else LossModel.square())
    return Network.create(units), Dataset.create(points, labels), chosen


def random_duplicated_kink(rng: np.random.Generator) -> Problem:
    """Linear-loss instance with one point tied twice under opposite loss derivatives.

    Both copies sit on the kink of the only unit, so the span qualification
    fails; any further samples are strictly active or inactive.
    """
    dim = int(rng.integers(1, 4))
    kink = _nonzero_row(rng, dim)
    if dim == 1:
        weight = np.zeros(1)
    elif dim == 2:
        weight = np.array([-kink[1], kink[0]])
    else:
        weight = np.cross(kink, _nonzero_row(rng, dim))
        while not np.any(weight != 0.0):
            weight = np.cross(kink, _nonzero_row(rng, dim))
    points = [kink, kink]
    labels = [float(rng.integers(1, 3)), -float(rng.integers(1, 3))]
    for _ in range(int(rng.integers(0, 3)) if dim > 1 else 0):
        row = _nonzero_row(rng, dim)
        if float(row @ weight) != 0.0:
            points.append(row)
            labels.append(float(rng.integers(-2, 3)))
    outer = float(rng.choice((-2.0, -1.0, 1.0, 2.0)))
    return Network.create([(outer, weight)]), Dataset.create(points, labels), LossModel.linear()


def unit_block(net: Network, gradient: np.ndarray, k: int) -> np.ndarray:
    """Inner-weight block of unit `k` of a parameter-space vector."""
    start = k * (net.dim + 1) + 1
    return gradient[start : start + net.dim]


def dpll(cnf: Cnf3) -> bool:
    """Satisfiability by unit propagation and branching."""

    def solve(clauses: list[frozenset[int]]) -> bool:
        clauses = list(clauses)
        while True:
            if not clauses:
                return True
            if any(not clause for clause in clauses):
                return False
            units = [next(iter(clause)) for clause in clauses if len(clause) == 1]
            if not units:
                break
            clauses = _assign(clauses, units[0])
        literal = next(iter(clauses[0]))
        return solve(_assign(clauses, literal)) or solve(_assign(clauses, -literal))

    return solve([frozenset(clause) for clause in cnf.clauses])


def _assign(clauses: list[frozenset[int]], literal: int) -> list[frozenset[int]]:
    return [clause - {-literal} for clause in clauses if literal not in clause]
