"""Command line interface.

Exit codes: 0 success, 1 input or solver error, 2 span qualification fails,
3 enumeration guard exceeded, 4 training stopped at its iteration cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from typing import Any, Callable, Optional

import numpy as np

from ._config import Config
from ._errors import GuardExceededError, StattestError
from ._exact import TEST_KINDS, ExactTestResult, Status, exact_test
from ._hardness import (
    anft_check,
    brute_sat,
    parse_dimacs,
    plt_stationary,
    plt_to_abs_normal,
    random_cnf,
    sat_to_plt,
)
from ._model import Dataset, LossModel, Network
from ._oracle import clarke_oracle_distance, formula_vertices_in_hull
from ._robust import constants, line_search, nondegeneracy_violations
from ._serialization import (
    anf_to_dict,
    constants_to_dict,
    load_anf,
    load_dataset,
    load_loss,
    load_network,
    load_plt,
    plt_to_dict,
    write_json,
)
from ._train import TrainConfig, demo_fixture, subgradient_descent

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_SQ = 2
EXIT_GUARD = 3
EXIT_CAP = 4

Handler = Callable[[argparse.Namespace], int]


def _number(value: Optional[float]) -> Any:
    if value is None:
        return None
    if math.isinf(value):
        return "inf"
    return value


def _emit(document: dict[str, Any]) -> None:
    if Config.get().output == "json":
        print(json.dumps(document, indent=2))
        return
    for key, value in document.items():
        if isinstance(value, list):
            print(f"{key}:")
            for item in value:
                print(f"  {item}")
        else:
            print(f"{key}: {value}")


def _load_problem(args: argparse.Namespace) -> tuple[Network, Dataset, LossModel]:
    return load_network(args.net), load_dataset(args.data), load_loss(args.loss)


def _exact_document(result: ExactTestResult) -> dict[str, Any]:
    return {
        "kind": result.kind,
        "status": result.status.value,
        "epsilon": _number(result.epsilon),
        "sq": result.sq.holds,
        "failing_units": list(result.sq.failing_units),
        "units": [f"eps_u={eps_u:.6e} eps_w={eps_w:.6e}" for eps_u, eps_w in result.units],
    }


def cmd_exact(args: argparse.Namespace) -> int:
    """Run the exact test on files."""
    net, data, loss = _load_problem(args)
    result = exact_test(args.kind, net, data, loss)
    _emit(_exact_document(result))
    return EXIT_NOT_SQ if result.status is Status.NOT_SQ else EXIT_OK


def cmd_robust(args: argparse.Namespace) -> int:
    """Run the robust line search on files."""
    net, data, loss = _load_problem(args)
    if args.kind == "frechet":
        flagged = nondegeneracy_violations(net, data, loss, args.delta0)
        if flagged:
            logger.warning(
                "Samples %s sit near a kink with zero loss derivative; the Fréchet "
                "certificate assumes nonzero derivatives there",
                list(flagged),
            )
    trace = line_search(args.kind, net, data, loss, args.delta0, args.max_iters)
    bundle = constants(data, loss, net.norm() + args.delta0, net.n_units)
    document: dict[str, Any] = {
        "kind": args.kind,
        "trace": [
            f"delta={step.delta:.6e} status={step.result.status.value} "
            f"epsilon={_number(step.result.epsilon)}"
            for step in trace.steps
        ],
        "stop_bound": _number(trace.stop_bound),
        "c_mu": bundle.c_mu(args.kind),
        "c_u": bundle.c_u,
        "constants": constants_to_dict(bundle),
    }
    best = trace.best
    if best is None:
        document["certificate"] = None
    else:
        epsilon = best.result.epsilon
        assert epsilon is not None
        document["certificate"] = {"epsilon": epsilon, "delta": best.delta}
        # Stationarity bound carried by the certificate: epsilon + C_mu * delta.
        document["bound"] = epsilon + bundle.c_mu(args.kind) * best.delta
    _emit(document)
    return EXIT_OK


def cmd_hardness_gen(args: argparse.Namespace) -> int:
    """Turn a CNF formula into a test instance file."""
    if args.cnf:
        with open(args.cnf, encoding="utf-8") as file:
            cnf = parse_dimacs(file.read())
    else:
        num_vars, num_clauses = args.random
        cnf = random_cnf(num_vars, num_clauses, np.random.default_rng(Config.get().seed))
    inst = sat_to_plt(cnf)
    write_json(args.out, plt_to_dict(inst))
    if args.anf_out:
        write_json(args.anf_out, anf_to_dict(plt_to_abs_normal(inst)))
    _emit({"vectors": int(inst.vectors.shape[0]), "variables": inst.num_vars, "out": args.out})
    return EXIT_OK


def cmd_hardness_check(args: argparse.Namespace) -> int:
    """Decide stationarity of a test instance, cross-checked with SAT when a formula is given."""
    sat: Optional[bool] = None
    if args.cnf:
        with open(args.cnf, encoding="utf-8") as file:
            cnf = parse_dimacs(file.read())
        inst = sat_to_plt(cnf)
        sat = brute_sat(cnf)
    else:
        inst = load_plt(args.plt)
    stationary = plt_stationary(inst, args.epsilon, args.mode)
    document: dict[str, Any] = {"stationary": stationary}
    if sat is not None:
        document["sat"] = "SAT" if sat else "UNSAT"
        document["summary"] = f"{document['sat']} / stationary: {str(stationary).lower()}"
        if args.epsilon == 0 and sat == stationary:
            logger.error("Satisfiability and stationarity verdicts are not complementary")
            _emit(document)
            return EXIT_INPUT
    _emit(document)
    return EXIT_OK


def cmd_hardness_anft(args: argparse.Namespace) -> int:
    """Run the first-order minimality test of an abs-linear form."""
    if args.anf:
        anf = load_anf(args.anf)
    elif args.plt:
        anf = plt_to_abs_normal(load_plt(args.plt))
    else:
        with open(args.cnf, encoding="utf-8") as file:
            anf = plt_to_abs_normal(sat_to_plt(parse_dimacs(file.read())))
    incompatible = anft_check(anf)
    _emit({"switches": anf.n_switches, "anft": incompatible, "fom": not incompatible})
    return EXIT_OK


def cmd_oracle_compare(args: argparse.Namespace) -> int:
    """Compare the brute-force Clarke distance with the chain-rule value."""
    net, data, loss = _load_problem(args)
    formula = exact_test("clarke", net, data, loss)
    _emit(
        {
            "oracle_distance": clarke_oracle_distance(net, data, loss),
            "formula_distance": _number(formula.epsilon),
            "sq": formula.sq.holds,
            "vertices_in_hull": formula_vertices_in_hull(net, data, loss),
        }
    )
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    """Train with the subgradient method until the robust test certifies the iterate."""
    if args.net or args.data or args.loss:
        if not (args.net and args.data and args.loss):
            raise StattestError("Training from files needs --net, --data and --loss together.")
        net, data, loss = _load_problem(args)
    else:
        net, data, loss = demo_fixture()
    config = TrainConfig(
        max_iters=args.max_iters,
        step_scale=args.step_scale,
        probe_every=args.probe_every,
        target_epsilon=args.target_epsilon,
        target_delta=args.target_delta,
        kind=args.kind,
    )
    result = subgradient_descent(net, data, loss, config)
    best = result.best
    _emit(
        {
            "iterations": result.iterations,
            "certified": result.certified,
            "probes": [
                f"iteration={probe.iteration} loss={probe.loss:.6e} "
                f"epsilon={None if probe.best is None else probe.best.result.epsilon}"
                for probe in result.probes
            ],
            "certificate": None
            if best is None
            else {"epsilon": best.result.epsilon, "delta": best.delta},
            "params": result.net.flat().tolist(),
        }
    )
    return EXIT_OK if result.certified else EXIT_CAP


def _problem_arguments(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--net", required=required, help="network JSON file")
    parser.add_argument("--data", required=required, help="dataset JSON file")
    parser.add_argument("--loss", required=required, help="loss JSON file")


def build_parser() -> argparse.ArgumentParser:
    """Parser with all subcommands; each sets `handler`."""
    parser = argparse.ArgumentParser(
        prog="stattest", description="Stationarity tests for two-layer ReLU network losses."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    parser.add_argument("--format", choices=("text", "json"), help="output format")
    parser.add_argument("--seed", type=int, help="seed of randomized commands")
    parser.add_argument("--tol-rank", type=float, help="relative rank tolerance")
    parser.add_argument("--tol-qp", type=float, help="KKT tolerance of QP solves")
    parser.add_argument("--tol-feas", type=float, help="feasibility tolerance")
    parser.add_argument("--tol-margin", type=float, help="strict feasibility margin")
    commands = parser.add_subparsers(dest="command", required=True)

    exact = commands.add_parser("exact", help="exact Clarke or Fréchet test")
    exact.add_argument("--kind", choices=TEST_KINDS, default="clarke")
    _problem_arguments(exact)
    exact.set_defaults(handler=cmd_exact)

    robust = commands.add_parser("robust", help="robust test with radius line search")
    robust.add_argument("--kind", choices=TEST_KINDS, default="clarke")
    _problem_arguments(robust)
    robust.add_argument("--delta0", type=float, default=1.0, help="initial rounding radius")
    robust.add_argument("--max-iters", type=int, default=30, help="line search length")
    robust.set_defaults(handler=cmd_robust)

    hardness = commands.add_parser("hardness", help="satisfiability reductions")
    hardness_commands = hardness.add_subparsers(dest="hardness_command", required=True)
    gen = hardness_commands.add_parser("gen", help="write the test instance of a formula")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--cnf", help="DIMACS CNF file")
    source.add_argument("--random", type=int, nargs=2, metavar=("VARS", "CLAUSES"))
    gen.add_argument("--out", required=True, help="test instance JSON file to write")
    gen.add_argument("--anf-out", help="also write the abs-linear form")
    gen.set_defaults(handler=cmd_hardness_gen)
    check = hardness_commands.add_parser("check", help="decide stationarity at the origin")
    instance = check.add_mutually_exclusive_group(required=True)
    instance.add_argument("--cnf", help="DIMACS CNF file")
    instance.add_argument("--plt", help="test instance JSON file")
    check.add_argument("--epsilon", type=float, default=0.0)
    check.add_argument("--mode", choices=("exhaustive", "certificate"), default="exhaustive")
    check.set_defaults(handler=cmd_hardness_check)
    anft = hardness_commands.add_parser("anft", help="first-order minimality of an abs-linear form")
    form = anft.add_mutually_exclusive_group(required=True)
    form.add_argument("--anf", help="abs-linear form JSON file")
    form.add_argument("--plt", help="test instance JSON file")
    form.add_argument("--cnf", help="DIMACS CNF file")
    anft.set_defaults(handler=cmd_hardness_anft)

    oracle = commands.add_parser("oracle", help="brute-force ground truth")
    oracle_commands = oracle.add_subparsers(dest="oracle_command", required=True)
    compare = oracle_commands.add_parser("compare", help="oracle against chain-rule value")
    _problem_arguments(compare)
    compare.set_defaults(handler=cmd_oracle_compare)

    train = commands.add_parser("train", help="subgradient training with certificates")
    _problem_arguments(train, required=False)
    train.add_argument("--kind", choices=TEST_KINDS, default="clarke")
    train.add_argument("--max-iters", type=int, default=1000)
    train.add_argument("--step-scale", type=float, default=0.1)
    train.add_argument("--probe-every", type=int, default=10)
    train.add_argument("--target-epsilon", type=float, default=1e-6)
    train.add_argument("--target-delta", type=float, default=0.05)
    train.set_defaults(handler=cmd_train)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    names = {
        "format": "output",
        "seed": "seed",
        "tol_rank": "rank_tol",
        "tol_qp": "qp_tol",
        "tol_feas": "feas_tol",
        "tol_margin": "margin_tol",
    }
    return {
        setting: getattr(args, option)
        for option, setting in names.items()
        if getattr(args, option) is not None
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `stattest` command."""
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    handler: Handler = args.handler
    try:
        with Config.override(**_overrides(args)):
            return handler(args)
    except GuardExceededError as exc:
        logger.error("%s", exc)
        return EXIT_GUARD
    except (OSError, StattestError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
