"""Bijections between assignments and unit vectors, and the unit-column
matrix representation of a Boolean mapping.

Conventions, used everywhere downstream:

* assignments are 0/1 vectors ``[x1, ..., xm]`` with x1 most significant;
* unit-vector indices are 1-based: index i corresponds to the i-th column
  of the 2^m identity matrix;
* ``btoi([x1..xm]) = sum_k xk * 2^(m-k) + 1``, so the all-zero assignment
  maps to index 1 and the all-one assignment to 2^m.

A Boolean mapping g over m variables is represented by a 2 x 2^m matrix
whose i-th column is the unit vector indexed ``g(itob(i)) + 1``; applying
it to the unit vector of an assignment yields the unit vector of the
output bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .formula import BooleanFormula, BooleanSystem, evaluate, truth_table

__all__ = [
    "btoi",
    "itob",
    "theta",
    "upsilon",
    "unit_vector",
    "BooleanMatrix",
    "boolean_matricization",
    "chi0",
]


def btoi(x: Sequence[int]) -> int:
    """Index in 1..2^m of the assignment ``x`` (m = len(x))."""
    if len(x) == 0:
        raise ValueError("empty assignment")
    i = 0
    for bit in x:
        i = (i << 1) | int(bit)
    return i + 1


def itob(i: int, m: int) -> list[int]:
    """Assignment in {0,1}^m whose index is ``i``; inverse of btoi."""
    if not 1 <= i <= 2**m:
        raise ValueError(f"index {i} out of range 1..{2**m}")
    return [(i - 1) >> (m - 1 - k) & 1 for k in range(m)]


def theta(x: Sequence[int]) -> int:
    """Map an assignment to its unit-vector index (1-based).

    Numerically equal to btoi; semantically this is the Kronecker-product
    embedding of the assignment into the unit vectors of R^(2^m).
    """
    return btoi(x)


def upsilon(i: int, m: int) -> list[int]:
    """Map a unit-vector index back to its assignment; inverse of theta."""
    return itob(i, m)


def unit_vector(i: int, dim: int) -> np.ndarray:
    """Dense i-th column (1-based) of the dim x dim identity matrix."""
    if not 1 <= i <= dim:
        raise ValueError(f"index {i} out of range 1..{dim}")
    e = np.zeros(dim)
    e[i - 1] = 1.0
    return e


@dataclass(frozen=True)
class BooleanMatrix:
    """Unit-column representation of a Boolean mapping over m variables.

    ``tags[i-1]`` in {1, 2} names the unit column at position i: 1 for the
    mapping value 0, 2 for the value 1.  The dense 2 x 2^m realization is
    materialized on demand.
    """

    m: int
    tags: tuple[int, ...]

    def __post_init__(self):
        if len(self.tags) != 2**self.m:
            raise ValueError(
                f"expected {2**self.m} columns for m={self.m}, got {len(self.tags)}"
            )
        if any(t not in (1, 2) for t in self.tags):
            raise ValueError("column tags must be 1 or 2")

    def dense(self) -> np.ndarray:
        """Dense 2 x 2^m float matrix with one 1 per column."""
        out = np.zeros((2, len(self.tags)))
        for col, tag in enumerate(self.tags):
            out[tag - 1, col] = 1.0
        return out

    def apply_index(self, i: int) -> int:
        """Image of the unit vector indexed ``i`` as a unit index in {1, 2}."""
        return self.tags[i - 1]


def boolean_matricization(f: BooleanFormula, m: int) -> BooleanMatrix:
    """Unit-column matrix of the mapping defined by ``f`` over x1..xm.

    Column i is the unit vector indexed ``f(itob(i)) + 1``, computed by
    enumerating the truth table.  The result is unique: it depends only on
    the mapping, not on the particular formula.
    """
    values = truth_table(f, m)
    return BooleanMatrix(m, tuple(v + 1 for v in values))


def chi0(system: BooleanSystem) -> int:
    """Number of distinct output tuples (f_1(x), ..., f_n(x)) over all x.

    Always between 1 and min(2^m, 2^n); bounds the rank of the stacked
    lifted system and lets the exact solver run fewer randomized rounds.
    """
    images = {
        tuple(evaluate(f, itob(i, system.m)) for f, _ in system.equations)
        for i in range(1, 2**system.m + 1)
    }
    return len(images)
