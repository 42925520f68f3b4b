"""Boolean formula AST, text parser, and truth-table utilities.

A formula is a tree of variables ``x1 .. xm``, the constants ``0``/``1``,
and the connectives NOT, AND, OR, IMPLIES, IFF.  Concrete syntax::

    formula := iff
    iff     := impl ("<->" impl)?          # non-associative, chains rejected
    impl    := or ("->" impl)?             # right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := ("!" | "~") unary | atom
    atom    := "x" digits | "0" | "1" | "(" formula ")"

Whitespace is insignificant.  Precedence, tightest first: NOT, AND, OR,
IMPLIES, IFF.  ``x -> y`` has the truth table of ``!x | y`` and
``x <-> y`` that of ``(!x | y) & (!y | x)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

__all__ = [
    "Var",
    "Const",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "BooleanFormula",
    "BooleanSystem",
    "FormulaSyntaxError",
    "parse_formula",
    "evaluate",
    "truth_table",
    "format_formula",
    "max_var_index",
]


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Not:
    child: "BooleanFormula"


@dataclass(frozen=True)
class And:
    left: "BooleanFormula"
    right: "BooleanFormula"


@dataclass(frozen=True)
class Or:
    left: "BooleanFormula"
    right: "BooleanFormula"


@dataclass(frozen=True)
class Implies:
    left: "BooleanFormula"
    right: "BooleanFormula"


@dataclass(frozen=True)
class Iff:
    left: "BooleanFormula"
    right: "BooleanFormula"


BooleanFormula = Union[Var, Const, Not, And, Or, Implies, Iff]


class FormulaSyntaxError(ValueError):
    """Parse failure, carrying the 0-based offset into the source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(r"x(\d+)|[01]|<->|->|[|&!~()]")


def _tokenize(text: str) -> Iterator[tuple[str, int]]:
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        yield match.group(0), pos
        pos = match.end()
    yield "", n  # end marker


class _Parser:
    def __init__(self, text: str, m: int):
        self.text = text
        self.m = m
        self.tokens = list(_tokenize(text))
        self.i = 0

    @property
    def current(self) -> tuple[str, int]:
        return self.tokens[self.i]

    def advance(self) -> None:
        self.i += 1

    def accept(self, token: str) -> bool:
        if self.current[0] == token:
            self.advance()
            return True
        return False

    def expect(self, token: str) -> None:
        found, pos = self.current
        if found != token:
            shown = repr(found) if found else "end of input"
            raise FormulaSyntaxError(f"expected {token!r}, found {shown}", pos)
        self.advance()

    def parse(self) -> BooleanFormula:
        node = self.iff()
        found, pos = self.current
        if found:
            raise FormulaSyntaxError(f"unexpected trailing token {found!r}", pos)
        return node

    def iff(self) -> BooleanFormula:
        node = self.impl()
        if self.accept("<->"):
            node = Iff(node, self.impl())
            if self.current[0] == "<->":
                raise FormulaSyntaxError(
                    "chained '<->' is ambiguous, parenthesize", self.current[1]
                )
        return node

    def impl(self) -> BooleanFormula:
        node = self.or_()
        if self.accept("->"):
            return Implies(node, self.impl())  # right-associative
        return node

    def or_(self) -> BooleanFormula:
        node = self.and_()
        while self.accept("|"):
            node = Or(node, self.and_())
        return node

    def and_(self) -> BooleanFormula:
        node = self.unary()
        while self.accept("&"):
            node = And(node, self.unary())
        return node

    def unary(self) -> BooleanFormula:
        if self.accept("!") or self.accept("~"):
            return Not(self.unary())
        return self.atom()

    def atom(self) -> BooleanFormula:
        token, pos = self.current
        if token == "(":
            self.advance()
            node = self.iff()
            self.expect(")")
            return node
        if token in ("0", "1"):
            self.advance()
            return Const(int(token))
        if token.startswith("x"):
            index = int(token[1:])
            if not 1 <= index <= self.m:
                raise FormulaSyntaxError(
                    f"variable x{index} out of range 1..{self.m}", pos
                )
            self.advance()
            return Var(index)
        shown = repr(token) if token else "end of input"
        raise FormulaSyntaxError(f"expected a variable, constant or '(', found {shown}", pos)


def parse_formula(text: str, m: int) -> BooleanFormula:
    """Parse ``text`` into a formula over the variables x1..xm."""
    if m < 1:
        raise ValueError(f"variable count must be >= 1, got {m}")
    return _Parser(text, m).parse()


def evaluate(f: BooleanFormula, x: Sequence[int]) -> int:
    """Truth value (0 or 1) of ``f`` at the assignment ``x = [x1, ..., xm]``."""
    match f:
        case Var(index):
            if index > len(x):
                raise ValueError(
                    f"assignment of length {len(x)} has no variable x{index}"
                )
            return int(x[index - 1])
        case Const(value):
            return value
        case Not(child):
            return 1 - evaluate(child, x)
        case And(left, right):
            return evaluate(left, x) & evaluate(right, x)
        case Or(left, right):
            return evaluate(left, x) | evaluate(right, x)
        case Implies(left, right):
            return (1 - evaluate(left, x)) | evaluate(right, x)
        case Iff(left, right):
            return int(evaluate(left, x) == evaluate(right, x))
    raise TypeError(f"not a formula node: {f!r}")


def truth_table(f: BooleanFormula, m: int) -> list[int]:
    """All 2^m truth values of ``f``, entry i (1-based) at the assignment
    whose bits are the base-2 digits of i-1, x1 most significant."""
    return [
        evaluate(f, [(i >> (m - 1 - k)) & 1 for k in range(m)])
        for i in range(2**m)
    ]


def max_var_index(f: BooleanFormula) -> int:
    """Largest variable index referenced by ``f`` (0 for constant formulas)."""
    match f:
        case Var(index):
            return index
        case Const(_):
            return 0
        case Not(child):
            return max_var_index(child)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            return max(max_var_index(l), max_var_index(r))
    raise TypeError(f"not a formula node: {f!r}")


# Precedence levels used by the printer; parse_formula(format_formula(f), m)
# reproduces f structurally.
_LEVEL_IFF, _LEVEL_IMPL, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY = range(5)


def format_formula(f: BooleanFormula) -> str:
    """Render ``f`` in the concrete syntax with minimal parentheses."""
    return _format(f, _LEVEL_IFF)


def _format(f: BooleanFormula, level: int) -> str:
    match f:
        case Var(index):
            return f"x{index}"
        case Const(value):
            return str(value)
        case Not(child):
            return "!" + _format(child, _LEVEL_UNARY)
        case And(left, right):
            # left-associative: parenthesize a same-operator right child
            text = f"{_format(left, _LEVEL_AND)} & {_format(right, _LEVEL_AND + 1)}"
            own = _LEVEL_AND
        case Or(left, right):
            text = f"{_format(left, _LEVEL_OR)} | {_format(right, _LEVEL_OR + 1)}"
            own = _LEVEL_OR
        case Implies(left, right):
            # right-associative: the right child may be another implication
            text = f"{_format(left, _LEVEL_OR)} -> {_format(right, _LEVEL_IMPL)}"
            own = _LEVEL_IMPL
        case Iff(left, right):
            text = f"{_format(left, _LEVEL_IMPL)} <-> {_format(right, _LEVEL_IMPL)}"
            own = _LEVEL_IFF
        case _:
            raise TypeError(f"not a formula node: {f!r}")
    return f"({text})" if own < level else text


@dataclass(frozen=True)
class BooleanSystem:
    """A system of Boolean equations f_i(x) = rhs_i over m shared variables."""

    m: int
    equations: tuple[tuple[BooleanFormula, int], ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"variable count must be >= 1, got {self.m}")
        if len(self.equations) < 1:
            raise ValueError("a system needs at least one equation")
        for k, (f, rhs) in enumerate(self.equations):
            if rhs not in (0, 1):
                raise ValueError(f"right-hand side of equation {k + 1} must be 0 or 1")
            top = max_var_index(f)
            if top > self.m:
                raise ValueError(
                    f"equation {k + 1} references x{top}, but m = {self.m}"
                )

    @property
    def n(self) -> int:
        return len(self.equations)

    @classmethod
    def from_texts(cls, m: int, equations: Sequence[tuple[str, int]]) -> "BooleanSystem":
        """Build a system from (formula text, right-hand side) pairs."""
        return cls(m, tuple((parse_formula(text, m), rhs) for text, rhs in equations))

    def satisfies(self, x: Sequence[int]) -> bool:
        """True when the assignment ``x`` solves every equation."""
        return all(evaluate(f, x) == rhs for f, rhs in self.equations)
