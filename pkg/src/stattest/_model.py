"""Two-layer ReLU networks, datasets and smooth per-sample losses.

The empirical loss is

    L(u_1, w_1, ..., u_H, w_H) = sum_i loss(sum_k u_k * max(w_k^T x_i, 0), y_i)

and parameters are flattened in the order `(u_1, w_1, ..., u_H, w_H)`.
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Callable, Iterable, Sequence
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.special import expit

from ._errors import DimensionError
from ._numkit import FloatArray

logger = logging.getLogger(__name__)

LOSS_KINDS = ("square", "identity", "logistic", "linear", "custom")

LossFunction = Callable[[FloatArray, FloatArray], FloatArray]
IndexSets = tuple[tuple[int, ...], ...]


def _frozen(array: npt.ArrayLike) -> FloatArray:
    result = np.array(array, dtype=float)
    result.flags.writeable = False
    return result


@dataclasses.dataclass(frozen=True, eq=False)
class LossModel:
    """Smooth per-sample loss `value(t, y)` with its derivative in `t`.

    `lip_value` bounds `|deriv|` and `lip_grad` bounds the Lipschitz constant of
    `deriv`. Both functions are vectorised over numpy arrays.

    Examples:
        >>> square = LossModel.square()
        >>> float(square.value(np.array([1.0]), np.array([2.0]))[0])
        0.5
        >>> LossModel.logistic().lip_grad
        0.25
    """

    kind: str
    value: LossFunction
    deriv: LossFunction
    lip_value: float
    lip_grad: float

    def __post_init__(self) -> None:
        if self.kind not in LOSS_KINDS:
            raise ValueError(f"Unknown loss kind {self.kind!r}.")
        if self.lip_value < 0 or self.lip_grad < 0:
            raise ValueError("Lipschitz constants must be nonnegative.")

    @classmethod
    def square(cls, box: Optional[float] = None) -> LossModel:
        """`(t - y)^2 / 2`; `box` bounds `|t - y|` on the region of interest."""
        return cls(
            "square",
            lambda t, y: 0.5 * (t - y) ** 2,
            lambda t, y: t - y,
            float("inf") if box is None else float(box),
            1.0,
        )

    @classmethod
    def identity(cls) -> LossModel:
        """`t`, which makes the empirical loss piecewise linear."""
        return cls("identity", lambda t, y: t + 0.0 * y, lambda t, y: np.ones_like(t + y), 1.0, 0.0)

    @classmethod
    def logistic(cls) -> LossModel:
        """`log(1 + exp(-y t))` for labels in {-1, 1}."""
        return cls(
            "logistic",
            lambda t, y: np.logaddexp(0.0, -y * t),
            lambda t, y: -y * expit(-y * t),
            1.0,
            0.25,
        )

    @classmethod
    def linear(cls) -> LossModel:
        """`y t`: the label of each sample is its coefficient in the loss."""
        return cls("linear", lambda t, y: y * t, lambda t, y: y + 0.0 * t, float("inf"), 0.0)

    @classmethod
    def custom(
        cls, value: LossFunction, deriv: LossFunction, lip_value: float, lip_grad: float
    ) -> LossModel:
        """Loss given by arbitrary vectorised callables."""
        return cls("custom", value, deriv, lip_value, lip_grad)

    @classmethod
    def from_kind(
        cls, kind: str, l_lip: Optional[float] = None, lg_lip: Optional[float] = None
    ) -> LossModel:
        """Build a built-in loss, optionally overriding its Lipschitz constants."""
        builders: dict[str, Callable[[], LossModel]] = {
            "square": cls.square,
            "identity": cls.identity,
            "logistic": cls.logistic,
            "linear": cls.linear,
        }
        if kind not in builders:
            raise ValueError(
                f"Loss kind must be one of {', '.join(builders)}, got {kind!r}."
            )
        loss = builders[kind]()
        changes = {}
        if l_lip is not None:
            changes["lip_value"] = float(l_lip)
        if lg_lip is not None:
            changes["lip_grad"] = float(lg_lip)
        return dataclasses.replace(loss, **changes) if changes else loss


@dataclasses.dataclass(frozen=True, eq=False)
class Dataset:
    """Training points (rows of `points`) with scalar labels.

    When `bias_appended` is set the last coordinate of every point is the
    constant 1 of the `(x, 1)` parametrization.

    Examples:
        >>> data = Dataset.create([[3.0, 4.0]], [1.0])
        >>> data.n_samples, data.dim, data.radius
        (1, 2, 5.0)
        >>> Dataset.create([[2.0]], [0.0], append_bias=True).points.tolist()
        [[2.0, 1.0]]
    """

    points: FloatArray
    labels: FloatArray
    bias_appended: bool = False

    def __post_init__(self) -> None:
        if self.points.ndim != 2:
            raise DimensionError("Dataset points must be a two-dimensional array.")
        if self.labels.ndim != 1 or self.labels.shape[0] != self.points.shape[0]:
            raise DimensionError(
                f"Dataset has {self.points.shape[0]} points but {self.labels.shape[0]} labels."
            )
        if self.points.shape[0] < 1:
            raise DimensionError("Dataset must contain at least one point.")
        zero = np.flatnonzero(~np.any(self.points != 0.0, axis=1))
        if zero.size:
            raise ValueError(f"Data point {int(zero[0])} is the zero vector.")

    @classmethod
    def create(
        cls, points: npt.ArrayLike, labels: npt.ArrayLike, *, append_bias: bool = False
    ) -> Dataset:
        """Create a dataset, appending the bias coordinate when requested."""
        array = np.array(points, dtype=float)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if append_bias:
            array = np.hstack([array, np.ones((array.shape[0], 1))])
        return cls(_frozen(array), _frozen(np.array(labels, dtype=float).reshape(-1)), append_bias)

    @property
    def n_samples(self) -> int:
        """Number of samples N."""
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        """Feature dimension d, including the bias coordinate."""
        return int(self.points.shape[1])

    @property
    def radius(self) -> float:
        """R = max_i ||x_i||."""
        return float(np.max(np.linalg.norm(self.points, axis=1)))

    def raw_points(self) -> FloatArray:
        """Points without the appended bias coordinate."""
        return self.points[:, :-1] if self.bias_appended else self.points


@dataclasses.dataclass(frozen=True, eq=False)
class Network:
    """Two-layer ReLU network with outer weights `outer` and inner weights `inner`.

    `ties` optionally pins, per unit, sample indices whose pre-activation is
    exactly zero. Rounding produces such points; the floating point products
    there are only zero up to round-off, and pinned ties make every computation
    treat them as exact kinks.

    Examples:
        >>> net = Network.create([(1.0, [3.0, 0.0]), (2.0, [0.0, 0.0])])
        >>> net.n_units, net.dim
        (2, 2)
        >>> net.flat().tolist()
        [1.0, 3.0, 0.0, 2.0, 0.0, 0.0]
        >>> round(net.norm(), 12)
        3.741657386774
    """

    outer: FloatArray
    inner: FloatArray
    ties: Optional[tuple[frozenset[int], ...]] = None

    def __post_init__(self) -> None:
        if self.inner.ndim != 2 or self.outer.ndim != 1:
            raise DimensionError("Network weights must be a vector and a matrix.")
        if self.outer.shape[0] != self.inner.shape[0]:
            raise DimensionError(
                f"Network has {self.outer.shape[0]} outer weights "
                f"but {self.inner.shape[0]} inner weight vectors."
            )
        if self.outer.shape[0] < 1:
            raise DimensionError("Network must have at least one hidden unit.")
        if self.ties is not None and len(self.ties) != self.outer.shape[0]:
            raise DimensionError("Pinned ties must be given for every hidden unit.")

    @classmethod
    def create(cls, units: Iterable[tuple[float, npt.ArrayLike]]) -> Network:
        """Create a network from `(u_k, w_k)` pairs."""
        pairs = list(units)
        if not pairs:
            raise DimensionError("Network must have at least one hidden unit.")
        rows = [np.asarray(w, dtype=float).reshape(-1) for _, w in pairs]
        if len({row.shape[0] for row in rows}) != 1:
            raise DimensionError("All inner weight vectors must have the same dimension.")
        return cls.from_arrays([u for u, _ in pairs], rows)

    @classmethod
    def from_arrays(
        cls,
        outer: npt.ArrayLike,
        inner: npt.ArrayLike,
        ties: Optional[Sequence[Iterable[int]]] = None,
    ) -> Network:
        """Create a network from an outer weight vector and an inner weight matrix."""
        outer_array = np.array(outer, dtype=float).reshape(-1)
        inner_array = np.array(inner, dtype=float).reshape(outer_array.shape[0], -1)
        pinned = None if ties is None else tuple(frozenset(int(i) for i in unit) for unit in ties)
        return cls(_frozen(outer_array), _frozen(inner_array), pinned)

    @classmethod
    def from_flat(cls, vector: npt.ArrayLike, dim: int) -> Network:
        """Inverse of `flat` for inner dimension `dim`."""
        array = np.asarray(vector, dtype=float).reshape(-1)
        if array.shape[0] % (dim + 1):
            raise DimensionError(
                f"Parameter vector of length {array.shape[0]} does not split into units "
                f"of size {dim + 1}."
            )
        blocks = array.reshape(-1, dim + 1)
        return cls.from_arrays(blocks[:, 0], blocks[:, 1:])

    @property
    def n_units(self) -> int:
        """Number of hidden units H."""
        return int(self.outer.shape[0])

    @property
    def dim(self) -> int:
        """Inner weight dimension d."""
        return int(self.inner.shape[1])

    @property
    def n_params(self) -> int:
        """Length of the flattened parameter vector."""
        return self.n_units * (self.dim + 1)

    @property
    def units(self) -> list[tuple[float, FloatArray]]:
        """The `(u_k, w_k)` pairs."""
        return [(float(u), self.inner[k]) for k, u in enumerate(self.outer)]

    def flat(self) -> FloatArray:
        """Parameter vector `(u_1, w_1, ..., u_H, w_H)`."""
        return flatten_params(self.outer, self.inner)

    def norm(self) -> float:
        """Euclidean norm of the parameter vector."""
        return float(np.linalg.norm(self.flat()))

    def distance(self, other: Network) -> float:
        """Euclidean distance between two parameter vectors."""
        return float(np.linalg.norm(self.flat() - other.flat()))

    def unpinned(self) -> Network:
        """The same weights without pinned ties."""
        return Network(self.outer, self.inner)


@dataclasses.dataclass(frozen=True)
class ActivationPartition:
    """Per unit, the sample indices with negative, zero and positive pre-activation."""

    less: IndexSets
    eq: IndexSets
    greater: IndexSets


@dataclasses.dataclass(frozen=True, eq=False)
class Activity:
    """Per-sample loss derivatives and the tie split of every unit."""

    rho: FloatArray
    partition: ActivationPartition
    iplus: IndexSets
    iminus: IndexSets

    @property
    def n_ties(self) -> int:
        """Total number of tied (unit, sample) pairs."""
        return sum(len(ties) for ties in self.partition.eq)


def flatten_params(outer: npt.ArrayLike, inner: npt.ArrayLike) -> FloatArray:
    """Interleave outer and inner weights into `(u_1, w_1, ..., u_H, w_H)`."""
    outer_array = np.asarray(outer, dtype=float).reshape(-1, 1)
    inner_array = np.asarray(inner, dtype=float).reshape(outer_array.shape[0], -1)
    return np.asarray(np.hstack([outer_array, inner_array]).reshape(-1), dtype=float)


def check_dimensions(net: Network, data: Dataset) -> None:
    """Raise `DimensionError` when the network does not fit the dataset."""
    if net.dim != data.dim:
        raise DimensionError(
            f"Network inner dimension {net.dim} does not match data dimension {data.dim}."
        )
    if net.ties is not None:
        for k, pinned in enumerate(net.ties):
            if any(i < 0 or i >= data.n_samples for i in pinned):
                raise DimensionError(f"Pinned tie of unit {k} refers to a missing sample.")


def preactivations(net: Network, data: Dataset) -> tuple[FloatArray, npt.NDArray[np.bool_]]:
    """Pre-activations `x_i^T w_k` as an `(N, H)` array and the mask of exact ties."""
    check_dimensions(net, data)
    values = np.asarray(data.points @ net.inner.T, dtype=float)
    ties = values == 0.0
    if net.ties is not None:
        for k, pinned in enumerate(net.ties):
            index = sorted(pinned)
            values[index, k] = 0.0
            ties[index, k] = True
    return values, ties


def network_outputs(net: Network, data: Dataset) -> FloatArray:
    """Network output on every sample."""
    values, _ = preactivations(net, data)
    return np.asarray(np.maximum(values, 0.0) @ net.outer, dtype=float)


def eval_loss(net: Network, data: Dataset, loss: LossModel) -> float:
    """Empirical loss.

    Examples:
        >>> data = Dataset.create([[1.0, 0.0]], [2.0])
        >>> eval_loss(Network.create([(1.0, [1.0, 0.0])]), data, LossModel.square())
        0.5
    """
    outputs = network_outputs(net, data)
    return float(np.sum(loss.value(outputs, data.labels)))


def sample_derivatives(net: Network, data: Dataset, loss: LossModel) -> FloatArray:
    """rho_i: the loss derivative at the network output of every sample."""
    outputs = network_outputs(net, data)
    return np.asarray(loss.deriv(outputs, data.labels), dtype=float).reshape(-1)


def rho_and_partition(net: Network, data: Dataset, loss: LossModel) -> Activity:
    """Loss derivatives, activation partition and the split of the ties.

    A tied sample of unit k goes to `iplus` when `u_k * rho_i >= 0` and to
    `iminus` otherwise.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> activity = rho_and_partition(Network.create([(1.0, [0.0])]), data, LossModel.identity())
        >>> activity.rho.tolist(), activity.iplus, activity.iminus
        ([1.0, 1.0], ((0, 1),), ((),))
    """
    values, ties = preactivations(net, data)
    rho = sample_derivatives(net, data, loss)
    less, eq, greater, iplus, iminus = [], [], [], [], []
    for k in range(net.n_units):
        tied = np.flatnonzero(ties[:, k])
        less.append(tuple(int(i) for i in np.flatnonzero((values[:, k] < 0.0) & ~ties[:, k])))
        eq.append(tuple(int(i) for i in tied))
        greater.append(tuple(int(i) for i in np.flatnonzero((values[:, k] > 0.0) & ~ties[:, k])))
        signs = net.outer[k] * rho[tied]
        iplus.append(tuple(int(i) for i in tied[signs >= 0.0]))
        iminus.append(tuple(int(i) for i in tied[signs < 0.0]))
    partition = ActivationPartition(tuple(less), tuple(eq), tuple(greater))
    return Activity(rho, partition, tuple(iplus), tuple(iminus))


def directional_derivative(
    net: Network, data: Dataset, loss: LossModel, direction: npt.ArrayLike
) -> float:
    """One-sided directional derivative `L'(x; d)` in parameter space.

    A kink contributes `max(d_w^T x, 0)`; active ReLUs contribute `d_w^T x`.

    Examples:
        >>> data = Dataset.create([[1.0], [-1.0]], [0.0, 0.0])
        >>> net = Network.create([(1.0, [0.0])])
        >>> directional_derivative(net, data, LossModel.identity(), [0.0, 1.0])
        1.0
        >>> directional_derivative(net, data, LossModel.identity(), [0.0, -1.0])
        1.0
    """
    step = np.asarray(direction, dtype=float).reshape(-1)
    if step.shape[0] != net.n_params:
        raise DimensionError(
            f"Direction has length {step.shape[0]}, expected {net.n_params} parameters."
        )
    if not np.any(step != 0.0):
        raise ValueError("Direction must be nonzero.")
    blocks = step.reshape(net.n_units, net.dim + 1)
    d_outer, d_inner = blocks[:, 0], blocks[:, 1:]
    values, ties = preactivations(net, data)
    d_values = data.points @ d_inner.T
    relu_change = np.where(values > 0.0, d_values, 0.0)
    relu_change = np.where(ties, np.maximum(d_values, 0.0), relu_change)
    d_outputs = np.maximum(values, 0.0) @ d_outer + relu_change @ net.outer
    rho = sample_derivatives(net, data, loss)
    return float(np.sum(rho * d_outputs))


def selection_gradient(
    net: Network,
    data: Dataset,
    loss: LossModel,
    active: Optional[npt.NDArray[np.bool_]] = None,
) -> FloatArray:
    """Gradient of the smooth piece selected by the activation mask `active`.

    `active` is an `(N, H)` boolean array saying which ReLUs count as active.
    By default tied ReLUs are inactive, which gives a valid subgradient
    selection for subgradient methods.
    """
    values, ties = preactivations(net, data)
    if active is None:
        mask = (values > 0.0) & ~ties
    else:
        mask = np.asarray(active, dtype=bool)
        if mask.shape != values.shape:
            raise DimensionError(f"Activation mask must have shape {values.shape}.")
    rho = sample_derivatives(net, data, loss)
    grad_outer = rho @ np.maximum(values, 0.0)
    grad_inner = net.outer[:, None] * ((mask * rho[:, None]).T @ data.points)
    return flatten_params(grad_outer, grad_inner)


def switching_matrix(net: Network, data: Dataset) -> FloatArray:
    """Jacobian of the switching variables `z_{k,i} = w_k^T x_i` of the loss.

    Row `k * N + i` holds `x_i` in the columns of `w_k`.
    """
    check_dimensions(net, data)
    n_samples, dim = data.n_samples, data.dim
    matrix = np.zeros((net.n_units * n_samples, net.n_params))
    for k in range(net.n_units):
        start = k * (dim + 1) + 1
        matrix[k * n_samples : (k + 1) * n_samples, start : start + dim] = data.points
    return matrix
