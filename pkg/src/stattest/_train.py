"""Subgradient training with the robust test as termination criterion."""

from __future__ import annotations

import dataclasses
import logging
from typing import Optional

import numpy as np

from ._exact import TEST_KINDS, TestKind
from ._model import Dataset, LossModel, Network, eval_loss, selection_gradient
from ._robust import LineSearchStep, line_search

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class TrainConfig:
    """Schedule and stopping targets of a training run.

    Step `t` (counted from 1) has length `step_scale / t`. Every
    `probe_every` steps the robust line search runs from `target_delta`.
    """

    max_iters: int = 1000
    step_scale: float = 1.0
    probe_every: int = 10
    target_epsilon: float = 1e-6
    target_delta: float = 1e-2
    kind: TestKind = "clarke"
    search_iters: int = 10

    def __post_init__(self) -> None:
        if self.max_iters < 1 or self.probe_every < 1 or self.search_iters < 1:
            raise ValueError("Iteration counts must be positive.")
        if not self.step_scale > 0:
            raise ValueError(f"Step scale must be positive, got {self.step_scale!r}.")
        if self.target_epsilon < 0 or not self.target_delta > 0:
            raise ValueError("Targets must be a nonnegative value and a positive radius.")
        if self.kind not in TEST_KINDS:
            raise ValueError(f"Test kind must be 'clarke' or 'frechet', got {self.kind!r}.")


@dataclasses.dataclass(frozen=True, eq=False)
class TrainProbe:
    """One robust test probe during training."""

    iteration: int
    loss: float
    best: Optional[LineSearchStep]


@dataclasses.dataclass(frozen=True, eq=False)
class TrainResult:
    """Final iterate, all probes and whether a certificate met the targets."""

    net: Network
    iterations: int
    probes: tuple[TrainProbe, ...]
    certified: bool

    @property
    def best(self) -> Optional[LineSearchStep]:
        """Best certificate over all probes."""
        steps = [probe.best for probe in self.probes if probe.best is not None]
        if not steps:
            return None
        return min(steps, key=lambda step: (step.result.epsilon, step.delta))


def _meets(step: Optional[LineSearchStep], config: TrainConfig) -> bool:
    if step is None or step.result.epsilon is None:
        return False
    return step.result.epsilon <= config.target_epsilon and step.delta <= config.target_delta


def subgradient_descent(
    net: Network, data: Dataset, loss: LossModel, config: Optional[TrainConfig] = None
) -> TrainResult:
    """Run the subgradient method, treating tied ReLUs as inactive.

    Stops as soon as a probe certifies `(epsilon, delta)` within the targets
    or after `max_iters` steps.
    """
    config = config or TrainConfig()
    params = net.unpinned().flat()
    current = Network.from_flat(params, net.dim)
    probes = []
    for iteration in range(1, config.max_iters + 1):
        gradient = selection_gradient(current, data, loss)
        params = params - (config.step_scale / iteration) * gradient
        current = Network.from_flat(params, net.dim)
        if iteration % config.probe_every and iteration != config.max_iters:
            continue
        trace = line_search(
            config.kind, current, data, loss, config.target_delta, config.search_iters
        )
        probe = TrainProbe(iteration, eval_loss(current, data, loss), trace.best)
        probes.append(probe)
        logger.info(
            "Iteration %d: loss %.6e, best value %s",
            iteration,
            probe.loss,
            None if probe.best is None else probe.best.result.epsilon,
        )
        if _meets(probe.best, config):
            return TrainResult(current, iteration, tuple(probes), True)
    return TrainResult(current, config.max_iters, tuple(probes), False)


def demo_fixture() -> tuple[Network, Dataset, LossModel]:
    """One-dimensional network whose loss has an `|w|`-type kink at `w = 0`.

    With `x = (1, -1)`, labels `-1` and the square loss, the unit `(u, w) = (1, w)`
    sees `1/2 (u max(w, 0) + 1)^2 + 1/2 (u max(-w, 0) + 1)^2`.
    """
    data = Dataset.create(np.array([[1.0], [-1.0]]), [-1.0, -1.0])
    return Network.create([(1.0, [0.5])]), data, LossModel.square()
