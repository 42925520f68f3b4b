"""Shared fixtures: the four worked example systems, their published
sample data, and seeded random generators for systems, formulas, graphs."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from netbool.formula import And, BooleanSystem, Const, Iff, Implies, Not, Or, Var
from netbool.network import Graph

settings.register_profile(
    "suite",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


# --- the four worked examples -------------------------------------------

EX1_TEXTS = [("x1 | x2 | !x3", 1), ("x1 & (x1 <-> x2)", 0), ("x2 & x3", 0)]
EX2_TEXTS = [("(x1 | x2) & !x3", 1), ("(x1 -> x2) | x3", 0), ("x1 & x3", 0)]
EX3_TEXTS = [("x1 & x2 & x3", 1), ("!x1 | (x2 <-> x3)", 1), ("x1 & (x2 | x3)", 0)]
EX4_TEXTS = [("(x1 | x2) & !x3", 0), ("(x1 -> x2) | x3", 0), ("x1 & x3", 1)]

EX1_SOLUTIONS = {(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 0, 1)}
EX2_SOLUTIONS = {(1, 0, 0)}

EX1_MATRICES = [
    [[0, 1, 0, 0, 0, 0, 0, 0], [1, 0, 1, 1, 1, 1, 1, 1]],
    [[1, 1, 1, 1, 1, 1, 0, 0], [0, 0, 0, 0, 0, 0, 1, 1]],
    [[1, 1, 1, 0, 1, 1, 1, 0], [0, 0, 0, 1, 0, 0, 0, 1]],
]
EX2_MATRICES = [
    [[1, 1, 0, 1, 0, 1, 0, 1], [0, 0, 1, 0, 1, 0, 1, 0]],
    [[0, 0, 0, 0, 1, 0, 0, 0], [1, 1, 1, 1, 0, 1, 1, 1]],
    [[1, 1, 1, 1, 1, 0, 1, 0], [0, 0, 0, 0, 0, 1, 0, 1]],
]

# Published sample outputs of nine randomized consensus solves (columns),
# printed to four decimals; usable at tolerance 1e-3.
EX1_SAMPLE_OUTPUTS = np.array(
    [
        [0.3837, 0.0299, -0.0509, 0.4616, 0.2897, 0.1139, 0.1043, 0.3578, 0.0277],
        [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000],
        [0.1019, 0.4064, 0.2581, 0.1935, 0.3299, 0.2565, 0.4819, 0.3105, 0.1353],
        [0.0640, 0.0604, 0.1110, 0.1157, 0.0974, 0.0806, 0.1506, 0.0511, 0.0300],
        [0.0944, 0.1918, 0.3854, 0.2492, -0.1419, 0.1938, 0.0559, 0.2378, 0.3244],
        [0.3561, 0.3116, 0.2964, -0.0201, 0.4249, 0.3551, 0.2073, 0.0429, 0.4827],
        [0.0640, 0.0604, 0.1110, 0.1157, 0.0974, 0.0806, 0.1506, 0.0511, 0.0300],
        [-0.0640, -0.0604, -0.1110, -0.1157, -0.0974, -0.0806, -0.1506, -0.0511, -0.0300],
    ]
).T  # nine points in R^8

EX2_SAMPLE_OUTPUTS = np.array(
    [
        [-0.1558, 0.0871, -0.1208, -0.0962, -0.1209],
        [0.1417, -0.1609, 0.1522, 0.1201, -0.0082],
        [-0.0003, 0.0835, 0.0835, -0.1127, 0.1244],
        [0.0141, 0.0738, -0.0314, -0.0239, 0.1292],
        [1.0000, 1.0000, 1.0000, 1.0000, 1.0000],
        [-0.0813, 0.0717, -0.1067, 0.1856, -0.0769],
        [0.0003, -0.0835, -0.0835, 0.1127, -0.1244],
        [0.0813, -0.0717, 0.1067, -0.1856, 0.0769],
    ]
).T  # five points in R^8


@pytest.fixture
def ex1() -> BooleanSystem:
    return BooleanSystem.from_texts(3, EX1_TEXTS)


@pytest.fixture
def ex2() -> BooleanSystem:
    return BooleanSystem.from_texts(3, EX2_TEXTS)


@pytest.fixture
def ex3() -> BooleanSystem:
    return BooleanSystem.from_texts(3, EX3_TEXTS)


@pytest.fixture
def ex4() -> BooleanSystem:
    return BooleanSystem.from_texts(3, EX4_TEXTS)


@pytest.fixture
def path3() -> Graph:
    return Graph.path(3)


# --- seeded random generators -------------------------------------------


def random_formula(rng: np.random.Generator, m: int, depth: int = 3):
    """Random formula over x1..xm; leaves are mostly variables."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.08:
            return Const(int(rng.integers(0, 2)))
        return Var(int(rng.integers(1, m + 1)))
    op = rng.integers(0, 5)
    if op == 0:
        return Not(random_formula(rng, m, depth - 1))
    left = random_formula(rng, m, depth - 1)
    right = random_formula(rng, m, depth - 1)
    return (And, Or, Implies, Iff)[op - 1](left, right)


def random_satisfiable_system(
    rng: np.random.Generator, m: int, n: int
) -> BooleanSystem:
    """System with at least the planted random assignment as a solution."""
    from netbool.formula import evaluate

    target = [int(b) for b in rng.integers(0, 2, size=m)]
    equations = []
    for _ in range(n):
        f = random_formula(rng, m)
        equations.append((f, evaluate(f, target)))
    return BooleanSystem(m, tuple(equations))


def random_connected_graph(rng: np.random.Generator, n: int) -> Graph:
    """Random spanning tree plus a few extra edges."""
    edges = set()
    order = list(rng.permutation(np.arange(1, n + 1)))
    for k in range(1, n):
        parent = order[int(rng.integers(0, k))]
        edges.add((min(parent, order[k]), max(parent, order[k])))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i, j) not in edges and rng.random() < 0.3:
                edges.add((i, j))
    return Graph(n, frozenset((int(a), int(b)) for a, b in edges))


# --- hypothesis strategies ----------------------------------------------


def formula_strategy(m: int, max_leaves: int = 12):
    leaf = st.one_of(
        st.builds(Var, st.integers(1, m)),
        st.builds(Const, st.sampled_from((0, 1))),
    )
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Implies, inner, inner),
            st.builds(Iff, inner, inner),
        ),
        max_leaves=max_leaves,
    )
