"""Test the satisfiability reductions and their checkers."""

# pylint: disable=missing-docstring
import math

import numpy as np

from stattest import (
    AbsNormalForm,
    Cnf3,
    Config,
    DimensionError,
    GuardExceededError,
    PltInstance,
    SchemaError,
    anft_check,
    brute_sat,
    eval_abs_normal,
    eval_nnt,
    eval_plt,
    format_dimacs,
    nnt_directional_check,
    parse_dimacs,
    plt_frechet_distance,
    plt_stationary,
    plt_to_abs_normal,
    random_cnf,
    sat_to_plt,
    satisfying_assignment,
)
from stattest._hardness import assignment_direction

from . import common
from .utils import assert_close, assert_raises

SINGLE_CLAUSE = Cnf3.create(3, [(1, -2, 3)])
UNSAT_PAIR = Cnf3.create(1, [(1,), (-1,)])


class HardnessTestCase:
    def test_parse_dimacs(self) -> None:
        text = "c two clauses\np cnf 3 2\n1 -2\n3 0\n2 0\n%\n0\n"
        cnf = parse_dimacs(text)
        assert cnf.num_vars == 3
        assert cnf.clauses == ((1, -2, 3), (2,))
        assert format_dimacs(cnf) == "p cnf 3 2\n1 -2 3 0\n2 0\n"
        assert parse_dimacs(format_dimacs(cnf)) == cnf

    def test_parse_dimacs_errors(self) -> None:
        cases = [
            ("", "Missing 'p cnf' problem line."),
            ("1 2 0\n", "Line 1: clause before the problem line."),
            ("p cnf 2\n", "Line 1: malformed problem line 'p cnf 2'."),
            ("p dnf 2 1\n", "Line 1: malformed problem line 'p dnf 2 1'."),
            ("p cnf 2 1\n1 2 1 2 0\n", "Line 2: clause with 4 literals, expected one to three."),
            ("p cnf 2 1\n1 x 0\n", "Line 2: non-integer literal in '1 x 0'."),
            ("p cnf 2 1\n1 2\n", "Last clause is not terminated by 0."),
            ("p cnf 2 2\n1 2 0\n", "Problem line announces 2 clauses, found 1."),
            ("p cnf 2 1\n1 3 0\n", "Clause 1 refers to variable 3 outside 1..2."),
        ]
        for text, message in cases:
            with assert_raises(SchemaError, message):
                parse_dimacs(text)

    def test_cnf_validation(self) -> None:
        with assert_raises(DimensionError, "Formula needs at least one variable, got 0."):
            Cnf3.create(0, [])
        with assert_raises(DimensionError, "Clause 2 has 4 literals, expected one to three."):
            Cnf3.create(4, [(1,), (1, 2, 3, 4)])
        with assert_raises(DimensionError, "Clause 1 refers to variable 0 outside 1..2."):
            Cnf3.create(2, [(0, 1)])

    def test_satisfied_by(self) -> None:
        assert SINGLE_CLAUSE.satisfied_by([False, False, False])
        assert not SINGLE_CLAUSE.satisfied_by([False, True, False])
        assert satisfying_assignment(UNSAT_PAIR) is None
        assignment = satisfying_assignment(SINGLE_CLAUSE)
        assert assignment == (False, False, False)

    def test_random_cnf(self) -> None:
        first = random_cnf(5, 4, np.random.default_rng(3))
        second = random_cnf(5, 4, np.random.default_rng(3))
        assert first == second
        assert first.n_clauses == 4
        for clause in first.clauses:
            assert len({abs(lit) for lit in clause}) == 3
        short = random_cnf(2, 3, np.random.default_rng(5))
        assert all(len(clause) == 2 for clause in short.clauses)
        with assert_raises(ValueError, "Clause size must be between one and three, got 4."):
            random_cnf(5, 1, np.random.default_rng(0), clause_size=4)

    def test_sat_to_plt(self) -> None:
        inst = sat_to_plt(SINGLE_CLAUSE)
        assert inst.vectors.tolist() == [[1, 0, 0], [0, -1, 0], [0, 0, 1]]
        assert inst.n_clauses == 1
        assert inst.is_reduction

    def test_sat_to_plt_pads_short_clauses(self) -> None:
        inst = sat_to_plt(Cnf3.create(2, [(1,), (-2, 1)]))
        assert inst.vectors.tolist() == [[1, 0], [1, 0], [1, 0], [0, -1], [1, 0], [1, 0]]
        with assert_raises(DimensionError, "Formula must have at least one clause."):
            sat_to_plt(Cnf3.create(2, []))

    def test_plt_instance_validation(self) -> None:
        with assert_raises(DimensionError, "Expected a positive multiple of three vectors, got 2."):
            PltInstance.create(2, [[1, 0], [0, 1]])
        with assert_raises(DimensionError, "Vectors must have integer entries."):
            PltInstance.create(1, [[0.5], [1.0], [1.0]])
        assert not PltInstance.create(2, [[1, 1], [1, 0], [0, 1]]).is_reduction

    def test_eval_plt(self) -> None:
        inst = sat_to_plt(SINGLE_CLAUSE)
        assert eval_plt(inst, [1.0, -1.0, 1.0]) == -3.0
        assert eval_plt(inst, [-1.0, 1.0, -1.0]) == 0.0
        assert eval_plt(inst, [0.0, 0.0, 0.0]) == 0.0
        with assert_raises(DimensionError, "Direction has length 2, expected 3."):
            eval_plt(inst, [1.0, 0.0])

    def test_eval_plt_is_positively_homogeneous(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(20):
            inst = sat_to_plt(random_cnf(4, 3, rng))
            d = rng.standard_normal(4)
            value = eval_plt(inst, d)
            for t in (0.0, 0.5, 2.0):
                assert abs(eval_plt(inst, t * d) - t * value) <= 1e-12

    def test_satisfying_direction_is_negative(self) -> None:
        rng = np.random.default_rng(13)
        for _ in range(30):
            cnf = random_cnf(4, 5, rng)
            assignment = satisfying_assignment(cnf)
            if assignment is None:
                continue
            assert eval_plt(sat_to_plt(cnf), assignment_direction(assignment)) <= -1.0

    def test_eval_nnt_matches_plt(self) -> None:
        rng = np.random.default_rng(17)
        inst = sat_to_plt(random_cnf(3, 2, rng))
        outer = -np.ones(6)
        for _ in range(10):
            d = rng.standard_normal(3)
            assert_close(eval_nnt(inst, outer, d), eval_plt(inst, d), tol=1e-12)
        with assert_raises(DimensionError, "Outer weights have length 2, expected 6."):
            eval_nnt(inst, [1.0, 1.0], [0.0, 0.0, 0.0])

    def test_brute_sat_agrees_with_dpll(self) -> None:
        rng = np.random.default_rng(19)
        for _ in range(100):
            cnf = random_cnf(int(rng.integers(1, 7)), int(rng.integers(1, 9)), rng)
            assert brute_sat(cnf) == common.dpll(cnf)

    def test_stationarity_of_examples(self) -> None:
        sat, unsat = sat_to_plt(SINGLE_CLAUSE), sat_to_plt(UNSAT_PAIR)
        for mode in ("exhaustive", "certificate"):
            assert not plt_stationary(sat, mode=mode)  # type: ignore[arg-type]
            assert plt_stationary(unsat, mode=mode)  # type: ignore[arg-type]

    def test_stationarity_complements_satisfiability(self) -> None:
        rng = np.random.default_rng(23)
        first_order_checked = 0
        for _ in range(500):
            cnf = random_cnf(int(rng.integers(1, 9)), int(rng.integers(1, 7)), rng)
            inst = sat_to_plt(cnf)
            satisfiable = brute_sat(cnf)
            assert satisfiable == common.dpll(cnf)
            assert plt_stationary(inst) is not satisfiable
            assert plt_stationary(inst, mode="certificate") is not satisfiable
            anf = plt_to_abs_normal(inst)
            if anf.n_switches <= 16:
                assert anft_check(anf) is satisfiable
                first_order_checked += 1
        assert first_order_checked >= 100

    def test_certificate_mode_accepts_general_integer_data(self) -> None:
        inst = PltInstance.create(2, [[1, 1], [1, 0], [0, 1]])
        assert not plt_stationary(inst, mode="certificate")
        with assert_raises(
            DimensionError, "Exhaustive mode needs every vector to be a signed unit vector."
        ):
            plt_stationary(inst)

    def test_plt_stationary_validation(self) -> None:
        inst = sat_to_plt(SINGLE_CLAUSE)
        with assert_raises(ValueError, "Stationarity level must be nonnegative, got -1.0."):
            plt_stationary(inst, -1.0)
        with assert_raises(ValueError, "Certificate mode decides exact stationarity only."):
            plt_stationary(inst, 0.5, mode="certificate")
        with assert_raises(ValueError, "Mode must be 'exhaustive' or 'certificate', got 'fast'."):
            plt_stationary(inst, mode="fast")  # type: ignore[arg-type]

    def test_frechet_distance_of_examples(self) -> None:
        # no subgradient exists at all when some direction gives a negative value
        assert plt_frechet_distance(sat_to_plt(SINGLE_CLAUSE)) == math.inf
        assert_close(plt_frechet_distance(sat_to_plt(UNSAT_PAIR)), 0.0, tol=1e-6)
        assert plt_stationary(sat_to_plt(UNSAT_PAIR), 0.5)
        assert not plt_stationary(sat_to_plt(SINGLE_CLAUSE), 0.5)

    def test_positive_level_complements_satisfiability(self) -> None:
        rng = np.random.default_rng(29)
        for _ in range(15):
            cnf = random_cnf(int(rng.integers(1, 4)), int(rng.integers(1, 5)), rng)
            assert plt_stationary(sat_to_plt(cnf), 0.1) is not brute_sat(cnf)

    def test_nnt_directional_check(self) -> None:
        rng = np.random.default_rng(31)
        for _ in range(20):
            inst = sat_to_plt(random_cnf(4, 3, rng))
            report = nnt_directional_check(inst, n_directions=100, seed=5)
            assert report.seed == 5
            assert len(report.errors) == 100
            assert report.max_error <= 1e-6
        with assert_raises(ValueError, "Need at least one direction, got 0."):
            nnt_directional_check(sat_to_plt(SINGLE_CLAUSE), n_directions=0)

    def test_nnt_directional_check_uses_configured_seed(self) -> None:
        with Config.override(seed=8):
            report = nnt_directional_check(sat_to_plt(SINGLE_CLAUSE), n_directions=4)
        assert report.seed == 8

    def test_abs_normal_form_shape(self) -> None:
        anf = plt_to_abs_normal(sat_to_plt(SINGLE_CLAUSE))
        assert (anf.n_vars, anf.n_switches) == (3, 3)
        anf = plt_to_abs_normal(sat_to_plt(Cnf3.create(2, [(1,), (2,), (-1, -2)])))
        assert (anf.n_vars, anf.n_switches) == (2, 11)
        assert not np.any(np.triu(anf.L))

    def test_abs_normal_form_evaluates_like_plt(self) -> None:
        rng = np.random.default_rng(37)
        for _ in range(20):
            inst = sat_to_plt(random_cnf(3, int(rng.integers(1, 5)), rng))
            anf = plt_to_abs_normal(inst)
            for _ in range(5):
                d = rng.standard_normal(3)
                assert_close(eval_abs_normal(anf, d), eval_plt(inst, d), tol=1e-10)

    def test_abs_normal_form_validation(self) -> None:
        with assert_raises(DimensionError, "L must be strictly lower triangular."):
            AbsNormalForm.create([0.0], [1.0], [[1.0]], [[1.0]])
        with assert_raises(DimensionError, "Z must have shape (1, 1), got (1, 2)."):
            AbsNormalForm(np.zeros(1), np.zeros(1), np.zeros((1, 2)), np.zeros((1, 1)))
        anf = AbsNormalForm.create([1.0], [1.0], [[1.0]], [[0.0]])
        with assert_raises(DimensionError, "Point has length 2, expected 1."):
            eval_abs_normal(anf, [1.0, 2.0])

    def test_anft_examples(self) -> None:
        assert anft_check(plt_to_abs_normal(sat_to_plt(SINGLE_CLAUSE)))
        assert not anft_check(plt_to_abs_normal(sat_to_plt(UNSAT_PAIR)))
        # without switches the function is linear
        assert anft_check(AbsNormalForm.create([1.0], [], [], []))
        assert not anft_check(AbsNormalForm.create([0.0], [], [], []))

    def test_anft_complements_stationarity(self) -> None:
        rng = np.random.default_rng(41)
        for _ in range(12):
            cnf = random_cnf(int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)
            inst = sat_to_plt(cnf)
            assert anft_check(plt_to_abs_normal(inst)) is not plt_stationary(inst)

    def test_guards(self) -> None:
        cnf = random_cnf(5, 5, np.random.default_rng(43))
        inst = sat_to_plt(cnf)
        with Config.override(max_sat_vars=4):
            with assert_raises(
                GuardExceededError,
                "Enumeration guard exceeded for truth table variables: "
                "size 5 is larger than the limit 4.",
            ):
                brute_sat(cnf)
        with Config.override(max_exhaustive_vars=4):
            with assert_raises(
                GuardExceededError,
                "Enumeration guard exceeded for exhaustive sign vectors: "
                "size 5 is larger than the limit 4.",
            ):
                plt_stationary(inst)
        with Config.override(max_certificate_clauses=4):
            with assert_raises(
                GuardExceededError,
                "Enumeration guard exceeded for certificate clauses: "
                "size 5 is larger than the limit 4.",
            ):
                plt_stationary(inst, mode="certificate")
        with assert_raises(
            GuardExceededError,
            "Enumeration guard exceeded for abs-normal signatures: "
            "size 19 is larger than the limit 16.",
        ):
            anft_check(plt_to_abs_normal(inst))
