"""Structural-equation expressions over binary values.

The algebra is deliberately small: constants 0/1, references to parent
variables, a reference to the variable's own noise (written ``N_<var>``),
``min``, ``max``, complement (``1 - x`` or ``not(x)``) and a truth-table
escape hatch ``table(in1, in2, ...: bits)`` where ``bits`` lists the output
for every input assignment, first input most significant.

Every expression evaluates to a 0/1 array, so binary-valuedness of a model
holds by construction.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from ..errors import InvalidModel

NOISE_PREFIX = "N_"


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise InvalidModel(f"constant must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Noise:
    owner: str


@dataclass(frozen=True)
class Min:
    args: tuple


@dataclass(frozen=True)
class Max:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class Table:
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        if not all(isinstance(i, (Ref, Noise)) for i in self.inputs):
            raise InvalidModel("table inputs must be variable or noise references")
        if len(self.outputs) != 2 ** len(self.inputs):
            raise InvalidModel(
                f"table over {len(self.inputs)} inputs needs {2 ** len(self.inputs)} "
                f"output bits, got {len(self.outputs)}"
            )
        if any(b not in (0, 1) for b in self.outputs):
            raise InvalidModel("table outputs must be bits")


Expr = Union[Const, Ref, Noise, Min, Max, Not, Table]


def refs(expr: Expr) -> set[str]:
    """Endogenous variables referenced by ``expr``."""
    if isinstance(expr, Ref):
        return {expr.name}
    if isinstance(expr, (Min, Max)):
        return set().union(*(refs(a) for a in expr.args))
    if isinstance(expr, Not):
        return refs(expr.arg)
    if isinstance(expr, Table):
        return set().union(set(), *(refs(a) for a in expr.inputs))
    return set()


def noise_refs(expr: Expr) -> set[str]:
    """Owners of the noise terms referenced by ``expr``."""
    if isinstance(expr, Noise):
        return {expr.owner}
    if isinstance(expr, (Min, Max)):
        return set().union(*(noise_refs(a) for a in expr.args))
    if isinstance(expr, Not):
        return noise_refs(expr.arg)
    if isinstance(expr, Table):
        return set().union(set(), *(noise_refs(a) for a in expr.inputs))
    return set()


def evaluate(
    expr: Expr,
    values: Mapping[str, np.ndarray],
    noise: Mapping[str, np.ndarray],
    size: int,
) -> np.ndarray:
    """Evaluate ``expr`` elementwise over ``size`` configurations."""
    if isinstance(expr, Const):
        return np.full(size, expr.value, dtype=np.uint8)
    if isinstance(expr, Ref):
        return values[expr.name]
    if isinstance(expr, Noise):
        return noise[expr.owner]
    if isinstance(expr, Min):
        out = evaluate(expr.args[0], values, noise, size)
        for a in expr.args[1:]:
            out = np.minimum(out, evaluate(a, values, noise, size))
        return out
    if isinstance(expr, Max):
        out = evaluate(expr.args[0], values, noise, size)
        for a in expr.args[1:]:
            out = np.maximum(out, evaluate(a, values, noise, size))
        return out
    if isinstance(expr, Not):
        return (1 - evaluate(expr.arg, values, noise, size)).astype(np.uint8)
    if isinstance(expr, Table):
        idx = np.zeros(size, dtype=np.int64)
        for a in expr.inputs:
            idx = (idx << 1) | evaluate(a, values, noise, size).astype(np.int64)
        return np.asarray(expr.outputs, dtype=np.uint8)[idx]
    raise TypeError(f"not an expression: {expr!r}")


def to_text(expr: Expr) -> str:
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Noise):
        return NOISE_PREFIX + expr.owner
    if isinstance(expr, Min):
        return "min(" + ", ".join(to_text(a) for a in expr.args) + ")"
    if isinstance(expr, Max):
        return "max(" + ", ".join(to_text(a) for a in expr.args) + ")"
    if isinstance(expr, Not):
        inner = to_text(expr.arg)
        if isinstance(expr.arg, Not):
            inner = f"({inner})"
        return f"1 - {inner}"
    if isinstance(expr, Table):
        ins = ", ".join(to_text(a) for a in expr.inputs)
        bits = "".join(str(b) for b in expr.outputs)
        return f"table({ins}: {bits})"
    raise TypeError(f"not an expression: {expr!r}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[(),:\-]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise InvalidModel(f"cannot parse expression {text!r} at offset {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            want = value if value is not None else "a token"
            raise InvalidModel(f"expected {want!r} in expression {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        expr = self.expr()
        if self.pos != len(self.tokens):
            raise InvalidModel(f"trailing input in expression {self.text!r}")
        return expr

    def expr(self) -> Expr:
        kind, value = self.peek()
        if kind == "num" and value == "1":
            nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else (None, None)
            if nxt == ("op", "-"):
                self.pos += 2
                return Not(self.atom())
        return self.atom()

    def atom(self) -> Expr:
        kind, value = self.take()
        if kind == "num":
            return Const(int(value))
        if kind == "op" and value == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if kind != "name":
            raise InvalidModel(f"unexpected {value!r} in expression {self.text!r}")
        if self.peek() != ("op", "("):
            if value.startswith(NOISE_PREFIX):
                return Noise(value[len(NOISE_PREFIX):])
            return Ref(value)
        self.take("(")
        func = value.lower()
        if func == "table":
            return self.table_body()
        args = [self.expr()]
        while self.peek() == ("op", ","):
            self.take(",")
            args.append(self.expr())
        self.take(")")
        if func == "min":
            return Min(tuple(args))
        if func == "max":
            return Max(tuple(args))
        if func == "not":
            if len(args) != 1:
                raise InvalidModel("not() takes exactly one argument")
            return Not(args[0])
        raise InvalidModel(f"unknown function {value!r} in expression {self.text!r}")

    def table_body(self) -> Table:
        inputs = []
        while True:
            node = self.atom()
            if not isinstance(node, (Ref, Noise)):
                raise InvalidModel("table inputs must be references")
            inputs.append(node)
            if self.peek() == ("op", ","):
                self.take(",")
                continue
            break
        self.take(":")
        kind, bits = self.take()
        if kind != "num" or set(bits) - {"0", "1"}:
            raise InvalidModel(f"table outputs must be a bit string, got {bits!r}")
        self.take(")")
        return Table(tuple(inputs), tuple(int(b) for b in bits))


def parse_expr(text: str) -> Expr:
    """Parse prefix notation such as ``min(A, max(U, N_Y))``."""
    return _Parser(text).parse()
