"""Batch command-line front-end.

Subcommands:

* ``solve``        - exact distributed solve (satisfiable systems)
* ``solve-approx`` - truncated-consensus solve, requires ``--T``
* ``sat``          - distributed satisfiability verification
* ``oracle``       - centralized exhaustive reference solver
* ``trace``        - dump the per-round node states of one projection
  consensus run as CSV (columns: round, node, coordinate, value)

The result document is JSON on stdout (or ``--output``).  Exit status:
0 on success, 2 when ``sat`` returns unsatisfiable, 1 on input errors.
Identical problem files and seeds produce byte-identical documents.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .formula import FormulaSyntaxError
from .network import build_weights, make_run, step_projection_consensus
from .problem import ProblemError, ProblemFile, load_problem, merge_config
from .solver import (
    RunConfig,
    SolveOutcome,
    lift_system,
    oracle_solve,
    solve_approximate,
    solve_exact,
    verify_satisfiability,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; status 2 is reserved for the unsatisfiable verdict
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("problem", help="problem file (JSON)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--k-star", type=int, default=None, dest="k_star")
    p.add_argument("--chi0-prior", type=int, default=None, dest="chi0_prior")
    p.add_argument("--T", type=int, default=None, dest="T")
    p.add_argument("--c-star", type=float, default=None, dest="c_star")
    p.add_argument("--gamma-star", type=float, default=None, dest="gamma_star")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-rounds", type=int, default=None, dest="max_rounds")
    p.add_argument("--trace", type=str, default=None, metavar="PATH.csv",
                   help="also dump one consensus trajectory as CSV")
    p.add_argument("--output", type=str, default=None, help="write the result document here instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netbool",
                     description="Solve systems of Boolean equations distributed over a network.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="exact distributed solve")
    _add_common(p_solve)
    p_solve.add_argument("--verify", action="store_true",
                         help="cross-check the solution set against the oracle")

    p_approx = sub.add_parser("solve-approx", help="solve with T-round consensus")
    _add_common(p_approx)

    p_sat = sub.add_parser("sat", help="verify satisfiability")
    _add_common(p_sat)

    p_oracle = sub.add_parser("oracle", help="centralized brute-force solve")
    p_oracle.add_argument("problem")
    p_oracle.add_argument("--output", type=str, default=None)

    p_trace = sub.add_parser("trace", help="dump a consensus trajectory")
    _add_common(p_trace)
    p_trace.add_argument("--rounds", type=int, default=50)
    return parser


def _config_from_args(problem: ProblemFile, args: argparse.Namespace) -> RunConfig:
    overrides = {
        key: getattr(args, key, None)
        for key in (
            "seed", "epsilon", "k_star", "chi0_prior", "T",
            "c_star", "gamma_star", "tol", "max_rounds",
        )
    }
    return merge_config(problem, overrides)


def _bits(assignment: Sequence[int]) -> str:
    return "".join(str(b) for b in assignment)


def _json_safe(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    return value


def _document(problem: ProblemFile, config: RunConfig, outcome: SolveOutcome) -> dict:
    doc = {
        "mode": outcome.mode,
        "m": problem.m,
        "n": problem.n,
        "seed": config.seed,
        "solutions": [_bits(x) for x in outcome.solutions],
        "diagnostics": _json_safe(outcome.diagnostics),
    }
    if outcome.per_node_solutions is not None:
        doc["per_node_solutions"] = [
            [_bits(x) for x in node_set] for node_set in outcome.per_node_solutions
        ]
    if outcome.verdict is not None:
        doc["verdict"] = outcome.verdict
        doc["stage"] = outcome.stage
    return doc


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _write_trace(problem: ProblemFile, config: RunConfig, path: str | None, rounds: int) -> None:
    """Record one projection-consensus run (round 0 = initial states) in
    long CSV form: round, node, coordinate, value."""
    system = problem.system()
    graph = problem.graph()
    eqs = lift_system(system)
    rng = np.random.default_rng(config.seed)
    weights = build_weights(graph, config.effective_epsilon(graph.n))
    run = make_run(graph, weights, rng.random((graph.n, 2**system.m)))

    out = sys.stdout if path is None else open(path, "w", newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(["round", "node", "coordinate", "value"])
        for t in range(rounds + 1):
            for node in range(1, graph.n + 1):
                for coord, value in enumerate(run.states[node - 1], start=1):
                    writer.writerow([t, node, coord, repr(float(value))])
            if t < rounds:
                run = step_projection_consensus(run, eqs)
    finally:
        if path is not None:
            out.close()


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse help/usage paths
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ProblemError, FormulaSyntaxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    problem = load_problem(args.problem)

    if args.command == "oracle":
        system = problem.system()
        solutions = sorted(oracle_solve(system))
        _emit(
            {
                "mode": "oracle",
                "m": problem.m,
                "n": problem.n,
                "solutions": [_bits(x) for x in solutions],
            },
            args.output,
        )
        return 0

    config = _config_from_args(problem, args)
    system = problem.system()
    graph = problem.graph()

    if args.command == "trace":
        _write_trace(problem, config, args.trace, args.rounds)
        return 0
    if args.trace is not None:
        # side-channel trajectory for plotting: one 50-round recursion from
        # the same seed as the first solver run
        _write_trace(problem, config, args.trace, 50)

    if args.command == "solve":
        outcome = solve_exact(system, graph, config)
        doc = _document(problem, config, outcome)
        if args.verify:
            expected = {tuple(x) for x in oracle_solve(system)}
            doc["verify"] = "ok" if set(outcome.solutions) == expected else "mismatch"
        _emit(doc, args.output)
        if args.verify and doc["verify"] != "ok":
            print("error: solution set does not match the oracle", file=sys.stderr)
            return 1
        return 0

    if args.command == "solve-approx":
        if config.T is None:
            print("error: solve-approx requires --T (or config.T)", file=sys.stderr)
            return 1
        outcome = solve_approximate(system, graph, config)
        _emit(_document(problem, config, outcome), args.output)
        return 0

    if args.command == "sat":
        outcome = verify_satisfiability(system, graph, config)
        _emit(_document(problem, config, outcome), args.output)
        return 2 if outcome.verdict == "unsatisfiable" else 0

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
