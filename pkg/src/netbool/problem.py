"""Problem files: the on-disk form of a Boolean equation system plus its
network.

A problem file is JSON shaped like::

    {
      "m": 3,
      "equations": [{"formula": "x1 | x2 | !x3", "rhs": 1}, ...],
      "edges": [[1, 2], [2, 3]],
      "config": {"epsilon": 0.2, "seed": 7}
    }

Node ids are 1-based; node i holds equation i, so the node count is the
number of equations.  The optional ``config`` object carries run-parameter
overrides; command-line flags take precedence over it.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .formula import BooleanSystem, FormulaSyntaxError
from .network import Graph
from .solver import RunConfig

__all__ = ["ProblemFile", "ProblemError", "load_problem", "merge_config"]

_CONFIG_KEYS = {f.name for f in dataclasses.fields(RunConfig)}


class ProblemError(ValueError):
    """Invalid problem file content."""


@dataclass(frozen=True)
class ProblemFile:
    m: int
    equations: tuple[tuple[str, int], ...]  # (formula text, right-hand side)
    edges: tuple[tuple[int, int], ...]
    config: dict[str, Any]

    @property
    def n(self) -> int:
        return len(self.equations)

    def system(self) -> BooleanSystem:
        try:
            return BooleanSystem.from_texts(self.m, self.equations)
        except (FormulaSyntaxError, ValueError) as exc:
            raise ProblemError(str(exc)) from exc

    def graph(self) -> Graph:
        try:
            return Graph.from_edge_list(self.n, self.edges)
        except ValueError as exc:
            raise ProblemError(str(exc)) from exc


def load_problem(path: str | Path) -> ProblemFile:
    """Read and structurally validate a problem file."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: not valid JSON: {exc}") from exc

    if not isinstance(raw, dict):
        raise ProblemError(f"{path}: expected a JSON object at top level")
    for key in ("m", "equations", "edges"):
        if key not in raw:
            raise ProblemError(f"{path}: missing required field {key!r}")

    m = raw["m"]
    if not isinstance(m, int) or m < 1:
        raise ProblemError(f"{path}: 'm' must be a positive integer")

    equations = []
    if not isinstance(raw["equations"], list) or not raw["equations"]:
        raise ProblemError(f"{path}: 'equations' must be a non-empty list")
    for k, entry in enumerate(raw["equations"]):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("formula"), str)
            or entry.get("rhs") not in (0, 1)
        ):
            raise ProblemError(
                f"{path}: equation {k + 1} must be {{\"formula\": str, \"rhs\": 0|1}}"
            )
        equations.append((entry["formula"], int(entry["rhs"])))

    edges = []
    if not isinstance(raw["edges"], list):
        raise ProblemError(f"{path}: 'edges' must be a list of [i, j] pairs")
    for pair in raw["edges"]:
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, int) for v in pair)
        ):
            raise ProblemError(f"{path}: bad edge entry {pair!r}")
        edges.append((pair[0], pair[1]))

    config = raw.get("config", {})
    if not isinstance(config, dict):
        raise ProblemError(f"{path}: 'config' must be an object")
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise ProblemError(f"{path}: unknown config keys {sorted(unknown)}")

    problem = ProblemFile(m, tuple(equations), tuple(edges), dict(config))
    # fail fast on formulas and graph structure
    problem.system()
    problem.graph()
    return problem


def merge_config(problem: ProblemFile, overrides: dict[str, Any]) -> RunConfig:
    """RunConfig from defaults, then the problem file, then CLI overrides."""
    merged = dict(problem.config)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**merged)
