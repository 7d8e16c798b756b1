"""Test the chain-rule subdifferential sets and regularity conditions."""

# pylint: disable=missing-docstring
import numpy as np

from stattest import (
    Config,
    Dataset,
    GuardExceededError,
    LossModel,
    Network,
    build_subdiff_sets,
    check_regularities,
    check_sq,
    enumerate_cells,
    rho_and_partition,
    selection_gradient,
)

from . import common
from .utils import assert_close, assert_raises


class ChainTestCase:
    def test_sq_holds_without_negative_ties(self) -> None:
        report = check_sq(*common.abs_kink())
        assert report.holds
        assert report.units[0].r_plus == 1
        assert report.units[0].r_minus == 0

    def test_sq_fails_on_opposite_twins(self) -> None:
        report = check_sq(*common.opposite_twins())
        assert not report.holds
        assert report.failing_units == (0,)
        unit = report.units[0]
        assert (unit.r_plus, unit.r_minus, unit.r_joint) == (1, 1, 1)

    def test_sq_reports_units_separately(self) -> None:
        data = Dataset.create([[1.0], [1.0]], [1.0, -1.0])
        net = Network.create([(1.0, [1.0]), (1.0, [0.0])])
        report = check_sq(net, data, LossModel.linear())
        assert report.failing_units == (1,)
        assert report.units[0].holds

    def test_subdiff_sets_of_abs_kink(self) -> None:
        [unit] = build_subdiff_sets(*common.abs_kink())
        assert unit.u_component == 0.0
        assert unit.clarke.generators.tolist() == [[1.0], [-1.0]]
        assert unit.frechet is not None
        assert unit.frechet.contains([0.0])
        assert unit.limiting_general_position

    def test_subdiff_sets_of_negative_abs_kink(self) -> None:
        [unit] = build_subdiff_sets(*common.neg_abs_kink())
        assert unit.frechet is None
        assert unit.n_negative == 2
        # -|w| has limiting subgradients -1 and 1 but not 0
        members = sorted(float(member.base[0]) for member in unit.limiting)
        assert members == [-1.0, 1.0]
        assert all(member.n_generators == 0 for member in unit.limiting)
        assert unit.clarke.contains([0.0])
        assert not unit.limiting_general_position

    def test_limiting_sets_without_general_position(self) -> None:
        data = Dataset.create([[1.0], [2.0]], [-1.0, -1.0])
        [unit] = build_subdiff_sets(Network.create([(1.0, [0.0])]), data, LossModel.linear())
        # both kinks lie on the same hyperplane, so only two of four sign patterns exist
        assert len(unit.limiting) == 2
        assert sorted(float(member.base[0]) for member in unit.limiting) == [-3.0, 0.0]

    def test_limiting_guard(self) -> None:
        with Config.override(max_limiting_ties=1):
            with assert_raises(
                GuardExceededError,
                "Enumeration guard exceeded for limiting sign patterns: "
                "size 2 is larger than the limit 1.",
            ):
                build_subdiff_sets(*common.neg_abs_kink())

    def test_clarke_set_contains_frechet_set(self) -> None:
        rng = np.random.default_rng(17)
        for _ in range(30):
            net, data, loss = common.random_problem(rng)
            for unit in build_subdiff_sets(net, data, loss):
                if unit.frechet is None:
                    continue
                for vertex in unit.frechet.vertex_candidates():
                    assert unit.clarke.contains(vertex)

    def test_cell_gradients_lie_in_limiting_sets(self) -> None:
        rng = np.random.default_rng(23)
        checked = 0
        for _ in range(40):
            net, data, loss = common.random_problem(rng, max_samples=4)
            if not check_sq(net, data, loss).holds:
                continue
            units = build_subdiff_sets(net, data, loss)
            for cell in enumerate_cells(net, data, loss):
                gradient = selection_gradient(net, data, loss, cell.active_mask(net, data))
                for k, unit in enumerate(units):
                    block = common.unit_block(net, gradient, k)
                    assert any(member.contains(block, tol=1e-7) for member in unit.limiting)
                    assert_close(gradient[k * (net.dim + 1)], unit.u_component)
                    checked += 1
        assert checked > 0

    def test_every_limiting_member_holds_a_cell_gradient(self) -> None:
        rng = np.random.default_rng(29)
        for _ in range(30):
            net, data, loss = common.random_problem(rng, max_samples=4)
            if not check_sq(net, data, loss).holds:
                continue
            units = build_subdiff_sets(net, data, loss)
            gradients = [
                selection_gradient(net, data, loss, cell.active_mask(net, data))
                for cell in enumerate_cells(net, data, loss)
            ]
            for k, unit in enumerate(units):
                for member in unit.limiting:
                    blocks = [common.unit_block(net, gradient, k) for gradient in gradients]
                    assert any(member.contains(block, tol=1e-7) for block in blocks)

    def test_regularities_sq_without_liad(self) -> None:
        regularities = check_regularities(*common.sq_without_liad())
        assert regularities.sq
        assert not regularities.liad
        assert not regularities.likq
        assert not regularities.general_position

    def test_regularities_liad_without_general_position(self) -> None:
        regularities = check_regularities(*common.liad_without_position())
        assert regularities.liad
        assert regularities.likq
        assert regularities.sq
        assert not regularities.general_position

    def test_regularities_at_smooth_point(self) -> None:
        regularities = check_regularities(*common.smooth_point())
        assert regularities.general_position
        assert regularities.likq
        assert regularities.liad
        assert regularities.sq

    def test_regularity_chain(self) -> None:
        rng = np.random.default_rng(31)
        general = 0
        for _ in range(1000):
            net, data, loss = common.random_problem(rng)
            regularities = check_regularities(net, data, loss)
            if regularities.liad:
                assert regularities.sq
            assert regularities.liad == regularities.likq
            # a zero inner weight ties every sample, more than d of them when N > d
            ties = rho_and_partition(net, data, loss).partition.eq
            if regularities.general_position and all(
                np.any(w_k != 0.0) for w_k, eq in zip(net.inner, ties) if eq
            ):
                assert regularities.liad
                general += 1
        assert general >= 100

    def test_general_position_guard(self) -> None:
        data = Dataset.create(np.arange(1.0, 9.0).reshape(4, 2), np.zeros(4))
        net = Network.create([(1.0, [1.0, 1.0])])
        with Config.override(max_position_subsets=3):
            with assert_raises(
                GuardExceededError,
                "Enumeration guard exceeded for general position subsets: "
                "size 6 is larger than the limit 3.",
            ):
                check_regularities(net, data, LossModel.square())
