"""Graph model and the synchronous round engine.

Each node holds a state vector; one round is a simultaneous update in
which every node mixes its own state with its neighbors' round-t states
and, in the projection variant, projects the mix onto its local affine
solution set.  Rounds are deterministic: neighbor sums run in sorted node
order, so identical inputs give bit-identical trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import LocalLinearEquation, project_affine

__all__ = [
    "Graph",
    "ConsensusWeights",
    "NetworkRun",
    "build_weights",
    "make_run",
    "step_average_consensus",
    "step_projection_consensus",
    "run_to_convergence",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected connected graph on nodes 1..n."""

    n: int
    edges: frozenset[tuple[int, int]]  # pairs (i, j) with i < j

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one node")
        for i, j in self.edges:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"invalid edge ({i}, {j}) for n={self.n}")
        if not self._connected():
            raise ValueError("graph is not connected")

    @classmethod
    def from_edge_list(cls, n: int, pairs: Sequence[Sequence[int]]) -> "Graph":
        """Build from 1-based [i, j] pairs; orientation and duplicates are
        normalized away, self-loops rejected."""
        edges = set()
        for pair in pairs:
            i, j = int(pair[0]), int(pair[1])
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            edges.add((min(i, j), max(i, j)))
        return cls(n, frozenset(edges))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edge_list(n, [[i, i + 1] for i in range(1, n)])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edge_list(
            n, [[i, j] for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        )

    @cached_property
    def _neighbor_table(self) -> tuple[tuple[int, ...], ...]:
        table: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            table[a - 1].append(b)
            table[b - 1].append(a)
        return tuple(tuple(sorted(row)) for row in table)

    @cached_property
    def _neighbor_arrays(self) -> tuple[np.ndarray, ...]:
        # 0-based index arrays, one per node, for fast state gathering
        return tuple(
            np.array([j - 1 for j in row], dtype=np.intp)
            for row in self._neighbor_table
        )

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Sorted neighbor ids of node i."""
        return self._neighbor_table[i - 1]

    def degree(self, i: int) -> int:
        return len(self._neighbor_table[i - 1])

    def _connected(self) -> bool:
        if self.n == 1:
            return True
        adj: dict[int, list[int]] = {i: [] for i in range(1, self.n + 1)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {1}
        stack = [1]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.n


@dataclass(frozen=True)
class ConsensusWeights:
    """Symmetric row-stochastic mixing matrix: epsilon on every edge,
    1 - deg(i)*epsilon on the diagonal."""

    epsilon: float
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float))


def build_weights(graph: Graph, epsilon: float) -> ConsensusWeights:
    """Mixing weights for ``graph`` with step size ``epsilon`` in (0, 1/n)."""
    if not 0.0 < epsilon < 1.0 / graph.n:
        raise ValueError(
            f"epsilon must lie strictly between 0 and 1/n = {1.0 / graph.n}, got {epsilon}"
        )
    w = np.zeros((graph.n, graph.n))
    for i, j in graph.edges:
        w[i - 1, j - 1] = epsilon
        w[j - 1, i - 1] = epsilon
    for i in range(1, graph.n + 1):
        w[i - 1, i - 1] = 1.0 - graph.degree(i) * epsilon
    return ConsensusWeights(epsilon, w)


@dataclass(frozen=True)
class NetworkRun:
    """Snapshot of a synchronous run: per-node states stacked row-wise
    (row i-1 is node i) plus the round counter."""

    graph: Graph
    weights: ConsensusWeights
    states: np.ndarray  # (n, d)
    t: int = 0


def make_run(graph: Graph, weights: ConsensusWeights, states: np.ndarray) -> NetworkRun:
    states = np.asarray(states, dtype=float)
    if states.ndim != 2 or states.shape[0] != graph.n:
        raise ValueError(
            f"expected one state row per node, got shape {states.shape} for n={graph.n}"
        )
    return NetworkRun(graph, weights, states)


def _mix(run: NetworkRun) -> np.ndarray:
    """One simultaneous averaging update: x_i + eps * sum_j (x_j - x_i)."""
    states = run.states
    eps = run.weights.epsilon
    mixed = states.copy()
    for i, idx in enumerate(run.graph._neighbor_arrays):
        if idx.size:
            mixed[i] = states[i] + eps * (
                states[idx].sum(axis=0) - idx.size * states[i]
            )
    return mixed


def step_average_consensus(run: NetworkRun) -> NetworkRun:
    """One averaging round for every node simultaneously."""
    return replace(run, states=_mix(run), t=run.t + 1)


def step_projection_consensus(
    run: NetworkRun, eqs: Sequence[LocalLinearEquation]
) -> NetworkRun:
    """One averaging round followed by each node's local projection."""
    if len(eqs) != run.graph.n:
        raise ValueError(f"expected {run.graph.n} equations, got {len(eqs)}")
    mixed = _mix(run)
    for i in range(run.graph.n):
        mixed[i] = project_affine(eqs[i], mixed[i])
    return replace(run, states=mixed, t=run.t + 1)


def run_to_convergence(
    run: NetworkRun,
    eqs: Sequence[LocalLinearEquation] | None,
    tol: float,
    max_rounds: int,
) -> tuple[np.ndarray, int, bool]:
    """Iterate rounds until the largest per-node state change in one round
    drops below ``tol`` (sup norm), or until ``max_rounds``.

    ``eqs`` selects the update: per-node projections when given, plain
    averaging when None.  Returns (final states, rounds used, converged).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    for rounds in range(1, max_rounds + 1):
        nxt = (
            step_average_consensus(run)
            if eqs is None
            else step_projection_consensus(run, eqs)
        )
        shift = float(np.abs(nxt.states - run.states).max())
        run = nxt
        if shift < tol:
            return run.states, rounds, True
    return run.states, max_rounds, False
