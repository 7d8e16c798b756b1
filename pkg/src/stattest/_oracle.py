"""Brute-force ground truth for small instances.

The oracle never uses the chain-rule formulas. It enumerates the cells of
the arrangement of kink hyperplanes around the current point, takes the
gradient of the smooth piece of every cell and works with those.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.optimize import linprog

from ._chain import build_subdiff_sets
from ._config import Config, resolve
from ._errors import DimensionError, GuardExceededError
from ._model import (
    Dataset,
    LossModel,
    Network,
    directional_derivative,
    eval_loss,
    preactivations,
    selection_gradient,
)
from ._numkit import FloatArray, _check_linprog, hull_distance, sign_patterns, simplex_min_norm

logger = logging.getLogger(__name__)

_FD_STEPS = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


@dataclasses.dataclass(frozen=True, eq=False)
class CellSign:
    """One full-dimensional cell around the current point.

    `ties` lists the tied `(unit, sample)` pairs, `signs` the side of each kink
    hyperplane the cell lies on and `witness` a parameter-space direction
    pointing strictly into the cell.
    """

    ties: tuple[tuple[int, int], ...]
    signs: tuple[int, ...]
    witness: FloatArray

    def active_mask(self, net: Network, data: Dataset) -> npt.NDArray[np.bool_]:
        """ReLU activity inside the cell: tied ReLUs are active on the positive side."""
        values, ties = preactivations(net, data)
        mask = (values > 0.0) & ~ties
        for (k, i), sign in zip(self.ties, self.signs):
            mask[i, k] = sign > 0
        return mask


def _tie_pairs(net: Network, data: Dataset) -> list[list[int]]:
    _, ties = preactivations(net, data)
    per_unit = [[int(i) for i in np.flatnonzero(ties[:, k])] for k in range(net.n_units)]
    total = sum(len(unit) for unit in per_unit)
    guard = Config.get().max_ties
    if total > guard:
        raise GuardExceededError("oracle ties", total, guard)
    return per_unit


def enumerate_cells(
    net: Network, data: Dataset, loss: LossModel, *, margin_tol: Optional[float] = None
) -> list[CellSign]:
    """Every realizable sign pattern of the kinks, in lexicographic order.

    Units move independently, so the cells are products of the cells of each
    unit's own arrangement.

    Examples:
        >>> data = Dataset.create([[1.0, 0.0], [2.0, 0.0]], [0.0, 0.0])
        >>> net = Network.create([(1.0, [0.0, 1.0])])
        >>> [cell.signs for cell in enumerate_cells(net, data, LossModel.identity())]
        [(-1, -1), (1, 1)]
    """
    del loss
    per_unit = _tie_pairs(net, data)
    unit_cells = [sign_patterns(data.points[tied], margin_tol=margin_tol) for tied in per_unit]
    ties = tuple((k, i) for k, tied in enumerate(per_unit) for i in tied)
    cells = []
    for combination in itertools.product(*unit_cells):
        witness = np.zeros((net.n_units, net.dim + 1))
        signs: tuple[int, ...] = ()
        for k, (unit_signs, direction) in enumerate(combination):
            signs += unit_signs
            witness[k, 1:] = direction
        cells.append(CellSign(ties, signs, witness.reshape(-1)))
    logger.debug("Enumerated %d cells around %d kinks", len(cells), len(ties))
    return cells


def bouligand_gradients(net: Network, data: Dataset, loss: LossModel) -> FloatArray:
    """Gradients of the smooth pieces of every cell, one row per cell."""
    cells = enumerate_cells(net, data, loss)
    return np.array(
        [selection_gradient(net, data, loss, cell.active_mask(net, data)) for cell in cells]
    )


def clarke_oracle_distance(net: Network, data: Dataset, loss: LossModel) -> float:
    """Distance from the origin to the convex hull of the cell gradients.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> net = Network.create([(1.0, [0.0])])
        >>> distance = clarke_oracle_distance(net, data, LossModel.identity())
        >>> round(distance, 12)
        0.0
    """
    return simplex_min_norm(bouligand_gradients(net, data, loss)).distance


def frechet_oracle_check(
    g: npt.ArrayLike,
    net: Network,
    data: Dataset,
    loss: LossModel,
    *,
    margin_tol: Optional[float] = None,
) -> bool:
    """Check `g^T d <= L'(x; d)` for every direction, one linear program per cell.

    On the closure of a cell the directional derivative is linear with the
    cell gradient as coefficient, so it suffices to minimize
    `(c - g)^T d` over each closed cell cone intersected with the unit box.
    """
    tol = resolve(margin_tol, "margin_tol")
    candidate = np.asarray(g, dtype=float).reshape(-1)
    if candidate.shape[0] != net.n_params:
        raise DimensionError(
            f"Candidate has length {candidate.shape[0]}, expected {net.n_params} parameters."
        )
    for cell in enumerate_cells(net, data, loss):
        slope = selection_gradient(net, data, loss, cell.active_mask(net, data)) - candidate
        rows = []
        for (k, i), sign in zip(cell.ties, cell.signs):
            row = np.zeros((net.n_units, net.dim + 1))
            row[k, 1:] = -sign * data.points[i]
            rows.append(row.reshape(-1))
        result = linprog(
            slope,
            A_ub=np.array(rows) if rows else None,
            b_ub=np.zeros(len(rows)) if rows else None,
            bounds=[(-1.0, 1.0)] * net.n_params,
            method="highs",
        )
        _check_linprog(result, "Fréchet cell check")
        if float(result.fun) < -tol:
            logger.debug("Cell %s separates the candidate (value %.3e)", cell.signs, result.fun)
            return False
    return True


def formula_vertices_in_hull(
    net: Network, data: Dataset, loss: LossModel, *, tol: float = 1e-8
) -> bool:
    """Check whether every vertex candidate of the Clarke formula set lies in the oracle hull."""
    gradients = bouligand_gradients(net, data, loss)
    units = build_subdiff_sets(net, data, loss)
    blocks = [unit.clarke.vertex_candidates() for unit in units]
    for choice in itertools.product(*blocks):
        vertex = np.concatenate(
            [np.concatenate([[unit.u_component], inner]) for unit, inner in zip(units, choice)]
        )
        if hull_distance(vertex, gradients) > tol:
            return False
    return True


@dataclasses.dataclass(frozen=True)
class FiniteDifferenceReport:
    """Agreement of analytic directional derivatives with difference quotients."""

    n_directions: int
    seed: int
    max_rel_error: float
    errors: tuple[float, ...]


def finite_difference_report(
    net: Network,
    data: Dataset,
    loss: LossModel,
    n_directions: int = 100,
    seed: Optional[int] = None,
) -> FiniteDifferenceReport:
    """Compare `directional_derivative` with forward differences along random unit directions.

    The error of a direction is the smallest relative error over a ladder of
    step sizes.
    """
    if n_directions < 1:
        raise ValueError(f"Need at least one direction, got {n_directions}.")
    chosen_seed = Config.get().seed if seed is None else seed
    rng = np.random.default_rng(chosen_seed)
    origin = net.flat()
    base_value = eval_loss(net, data, loss)
    errors = []
    for _ in range(n_directions):
        direction = rng.standard_normal(net.n_params)
        direction /= np.linalg.norm(direction)
        analytic = directional_derivative(net, data, loss, direction)
        scale = max(1.0, abs(analytic))
        best = np.inf
        for step in _FD_STEPS:
            moved = Network.from_flat(origin + step * direction, net.dim)
            quotient = (eval_loss(moved, data, loss) - base_value) / step
            best = min(best, abs(quotient - analytic) / scale)
        errors.append(float(best))
    report = FiniteDifferenceReport(n_directions, chosen_seed, max(errors), tuple(errors))
    logger.debug("Finite differences: max relative error %.3e", report.max_rel_error)
    return report
