"""Utility functions as small expression trees.

Utilities are written as s-expressions over the objectives ``p1 .. pd``::

    (* p1 p2)
    (+ (pow p1 2) p2)
    (+ (* 0.1 p1) (* (max 0 p1) (max 0 p2)))

Forms: ``(+ e...)``, ``(- e e)``, ``(* e...)``, ``(pow e k)`` with an integer
``k >= 0``, ``(max e e...)``, ``(min e e...)`` and ``(neg e)``. Atoms are
decimal literals or ``p<k>`` with ``k >= 1``. There is no division, so a
utility is finite wherever its inputs are.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from monfg import kernels
from monfg.errors import InvalidInputError, ParseError
from monfg.kernels import _opcodes as op


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based objective index


@dataclass(frozen=True)
class Neg:
    arg: "UtilityExpr"


@dataclass(frozen=True)
class Add:
    args: tuple


@dataclass(frozen=True)
class Sub:
    left: "UtilityExpr"
    right: "UtilityExpr"


@dataclass(frozen=True)
class Mul:
    args: tuple


@dataclass(frozen=True)
class Pow:
    base: "UtilityExpr"
    exponent: int


@dataclass(frozen=True)
class Max:
    args: tuple


@dataclass(frozen=True)
class Min:
    args: tuple


UtilityExpr = Union[Const, Var, Neg, Add, Sub, Mul, Pow, Max, Min]

_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z")
_VARIABLE = re.compile(r"p([1-9]\d*)\Z")
_INTEGER = re.compile(r"\d+\Z")
_TOKEN = re.compile(r"\(|\)|[^\s()]+")

# operator -> (node class, min args, max args); None means unbounded
_FORMS = {
    "+": (Add, 1, None),
    "*": (Mul, 1, None),
    "-": (Sub, 2, 2),
    "max": (Max, 2, None),
    "min": (Min, 2, None),
    "neg": (Neg, 1, 1),
    "pow": (Pow, 2, 2),
}


def _tokenize(text):
    pos = 0
    for m in _TOKEN.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip():
            raise ParseError(f"unexpected character {gap.strip()[0]!r}", pos)
        yield m.group(), m.start()
        pos = m.end()


def parse_utility(text: str) -> UtilityExpr:
    if not text or not text.strip():
        raise ParseError("empty utility expression", 0)
    tokens = list(_tokenize(text))
    expr, nxt = _parse(tokens, 0, len(text))
    if nxt != len(tokens):
        raise ParseError(f"trailing input {tokens[nxt][0]!r}", tokens[nxt][1])
    return expr


def _parse(tokens, k, end):
    if k >= len(tokens):
        raise ParseError("unexpected end of input", end)
    tok, pos = tokens[k]
    if tok == ")":
        raise ParseError("unexpected ')'", pos)
    if tok != "(":
        return _atom(tok, pos), k + 1
    if k + 1 >= len(tokens):
        raise ParseError("unexpected end of input", end)
    name, name_pos = tokens[k + 1]
    if name not in _FORMS:
        raise ParseError(f"unknown operator {name!r}", name_pos)
    cls, lo, hi = _FORMS[name]
    k += 2
    args = []
    while True:
        if k >= len(tokens):
            raise ParseError(f"unclosed '(' for {name!r}", pos)
        if tokens[k][0] == ")":
            break
        if cls is Pow and len(args) == 1:
            exp_tok, exp_pos = tokens[k]
            if not _INTEGER.match(exp_tok):
                raise ParseError(f"pow exponent must be a non-negative integer, got {exp_tok!r}", exp_pos)
            args.append(int(exp_tok))
            k += 1
            continue
        sub, k = _parse(tokens, k, end)
        args.append(sub)
    if len(args) < lo or (hi is not None and len(args) > hi):
        want = f"{lo}" if lo == hi else f"at least {lo}"
        raise ParseError(f"{name!r} takes {want} argument(s), got {len(args)}", pos)
    k += 1
    if cls is Neg:
        return Neg(args[0]), k
    if cls is Sub:
        return Sub(args[0], args[1]), k
    if cls is Pow:
        return Pow(args[0], args[1]), k
    return cls(tuple(args)), k


def _atom(tok, pos):
    m = _VARIABLE.match(tok)
    if m:
        return Var(int(m.group(1)))
    if _NUMBER.match(tok):
        value = float(tok)
        if not np.isfinite(value):
            raise ParseError(f"literal {tok!r} is not finite", pos)
        return Const(value)
    raise ParseError(f"unrecognised atom {tok!r}", pos)


def to_sexpr(u: UtilityExpr) -> str:
    match u:
        case Const(value):
            return repr(float(value))
        case Var(index):
            return f"p{index}"
        case Neg(arg):
            return f"(neg {to_sexpr(arg)})"
        case Sub(left, right):
            return f"(- {to_sexpr(left)} {to_sexpr(right)})"
        case Pow(base, exponent):
            return f"(pow {to_sexpr(base)} {exponent})"
        case Add(args) | Mul(args) | Max(args) | Min(args):
            name = {Add: "+", Mul: "*", Max: "max", Min: "min"}[type(u)]
            return f"({name} {' '.join(to_sexpr(a) for a in args)})"
    raise TypeError(f"not a utility expression: {u!r}")


def max_variable(u: UtilityExpr) -> int:
    """Largest objective index used, 0 for a constant utility."""
    match u:
        case Const():
            return 0
        case Var(index):
            return index
        case Neg(arg) | Pow(arg, _):
            return max_variable(arg)
        case Sub(left, right):
            return max(max_variable(left), max_variable(right))
        case Add(args) | Mul(args) | Max(args) | Min(args):
            return max(max_variable(a) for a in args)
    raise TypeError(f"not a utility expression: {u!r}")


def eval_utility(u: UtilityExpr, x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    need = max_variable(u)
    if need > x.shape[0]:
        raise InvalidInputError(f"utility uses p{need} but the payoff vector has length {x.shape[0]}")
    return float(_eval(u, x))


def _eval(u, x):
    # fold order and pow-by-multiplication match the compiled kernels exactly
    match u:
        case Const(value):
            return value
        case Var(index):
            return float(x[index - 1])
        case Neg(arg):
            return -_eval(arg, x)
        case Sub(left, right):
            return _eval(left, x) - _eval(right, x)
        case Pow(base, exponent):
            b = _eval(base, x)
            if exponent == 0:
                return 1.0
            r = b
            for _ in range(exponent - 1):
                r = r * b
            return r
        case Add(args):
            acc = _eval(args[0], x)
            for a in args[1:]:
                acc = acc + _eval(a, x)
            return acc
        case Mul(args):
            acc = _eval(args[0], x)
            for a in args[1:]:
                acc = acc * _eval(a, x)
            return acc
        case Max(args):
            acc = _eval(args[0], x)
            for a in args[1:]:
                v = _eval(a, x)
                acc = acc if acc >= v else v
            return acc
        case Min(args):
            acc = _eval(args[0], x)
            for a in args[1:]:
                v = _eval(a, x)
                acc = acc if acc <= v else v
            return acc
    raise TypeError(f"not a utility expression: {u!r}")


def linear_utility(weights: Sequence[float]) -> UtilityExpr:
    w = [float(v) for v in weights]
    if not w or not all(np.isfinite(w)):
        raise InvalidInputError("linear utility needs at least one finite weight")
    return Add(tuple(Mul((Const(wo), Var(o + 1))) for o, wo in enumerate(w)))


@dataclass(frozen=True, eq=False)
class Program:
    """A utility compiled to postfix form for the kernels."""

    code: np.ndarray  # (L, 2) int64 rows of (opcode, argument)
    consts: np.ndarray
    num_vars: int

    def __call__(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] < self.num_vars:
            raise InvalidInputError(
                f"utility uses p{self.num_vars} but points have length {X.shape[1]}")
        return kernels.eval_program(self.code, self.consts, X)


@functools.lru_cache(maxsize=1024)
def compile_program(u: UtilityExpr) -> Program:
    code, consts = [], []

    def emit(node):
        match node:
            case Const(value):
                consts.append(float(value))
                code.append((op.CONST, len(consts) - 1))
            case Var(index):
                code.append((op.VAR, index - 1))
            case Neg(arg):
                emit(arg)
                code.append((op.NEG, 0))
            case Sub(left, right):
                emit(left)
                emit(right)
                code.append((op.SUB, 0))
            case Pow(base, exponent):
                emit(base)
                code.append((op.POW, exponent))
            case Add(args) | Mul(args) | Max(args) | Min(args):
                opcode = {Add: op.ADD, Mul: op.MUL, Max: op.MAX, Min: op.MIN}[type(node)]
                emit(args[0])
                for a in args[1:]:
                    emit(a)
                    code.append((opcode, 0))
            case _:
                raise TypeError(f"not a utility expression: {node!r}")

    emit(u)
    return Program(np.array(code, dtype=np.int64).reshape(-1, 2),
                   np.array(consts, dtype=np.float64), max_variable(u))


def as_utility(u) -> UtilityExpr:
    """Accept an expression tree or its s-expression text."""
    if isinstance(u, str):
        return parse_utility(u)
    if isinstance(u, (Const, Var, Neg, Add, Sub, Mul, Pow, Max, Min)):
        return u
    raise InvalidInputError(f"not a utility: {u!r}")


def check_utilities(utilities, num_players: int, num_objectives: int) -> tuple:
    us = tuple(as_utility(u) for u in utilities)
    if len(us) != num_players:
        raise InvalidInputError(f"{len(us)} utilities given for {num_players} players")
    for i, u in enumerate(us):
        if max_variable(u) > num_objectives:
            raise InvalidInputError(
                f"utility of player {i} uses p{max_variable(u)} but the game has "
                f"{num_objectives} objective(s)")
    return us
