"""Plain-text model files.

A model file is an INI-style document::

    [model]
    name = M1
    variables = U, A, Y

    [params]
    p = 0.5

    [noise]
    N_U = p
    N_A = p
    N_Y = p

    [equations]
    U = N_U
    A = max(U, N_A)
    Y = min(A, max(U, N_Y))

Noise parameters are arithmetic expressions over ``[params]`` entries
(``+ - * / **`` and parentheses), so a parametric family such as M2 can be
written once and evaluated at any ``p``.  An optional ``[parents]`` section
declares parent lists explicitly, e.g. ``Y = A`` for a declared-but-unused
parent.
"""
from __future__ import annotations

import ast
import configparser
import operator
from importlib import resources
from pathlib import Path
from typing import Mapping

from ..errors import InvalidModel
from .expr import NOISE_PREFIX, parse_expr, refs, to_text
from .model import ScmSpec

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def eval_arith(text: str, params: Mapping[str, float]) -> float:
    """Evaluate a numeric expression without ``eval``."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise InvalidModel(f"unknown parameter {node.id!r} in {text!r}")
            return float(params[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        raise InvalidModel(f"unsupported syntax in numeric expression {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise InvalidModel(f"cannot parse numeric expression {text!r}") from exc
    try:
        return walk(tree)
    except ZeroDivisionError as exc:
        raise InvalidModel(f"division by zero in {text!r}") from exc


def _split(value: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in value.split(",") if s.strip())


def parse_model(text: str, params: Mapping[str, float] | None = None) -> ScmSpec:
    cp = configparser.ConfigParser(interpolation=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidModel(f"malformed model file: {exc}") from exc
    known = {"model", "params", "noise", "parents", "equations"}
    unknown = set(cp.sections()) - known
    if unknown:
        raise InvalidModel(f"unknown section(s) {sorted(unknown)}")
    for required in ("model", "equations"):
        if not cp.has_section(required):
            raise InvalidModel(f"missing [{required}] section")

    values = {k: eval_arith(v, {}) for k, v in cp["params"].items()} if cp.has_section("params") else {}
    for k, v in (params or {}).items():
        if k not in values:
            raise InvalidModel(f"parameter {k!r} is not declared in [params]")
        values[k] = float(v)

    header = cp["model"]
    extra = set(header) - {"name", "variables"}
    if extra:
        raise InvalidModel(f"unknown key(s) in [model]: {sorted(extra)}")
    equations = {k: parse_expr(v) for k, v in cp["equations"].items()}
    variables = _split(header.get("variables", "")) or tuple(equations)

    noise = {}
    if cp.has_section("noise"):
        for key, expr in cp["noise"].items():
            owner = key[len(NOISE_PREFIX):] if key.startswith(NOISE_PREFIX) else key
            noise[owner] = eval_arith(expr, values)
    parents = {k: _split(v) for k, v in cp["parents"].items()} if cp.has_section("parents") else {}
    return ScmSpec(variables, equations, noise, parents, header.get("name", ""))


def load_model(path: str | Path, params: Mapping[str, float] | None = None) -> ScmSpec:
    return parse_model(Path(path).read_text(encoding="utf-8"), params)


def load_bundled(name: str, params: Mapping[str, float] | None = None) -> ScmSpec:
    """Load a model shipped with the package, e.g. ``"m1"`` or ``"m2"``."""
    res = resources.files("expertaudit.data").joinpath(f"{name.lower()}.scm")
    if not res.is_file():
        raise InvalidModel(f"no bundled model named {name!r}")
    return parse_model(res.read_text(encoding="utf-8"), params)


def dump_model(model: ScmSpec) -> str:
    lines = ["[model]"]
    if model.name:
        lines.append(f"name = {model.name}")
    lines.append("variables = " + ", ".join(model.variables))
    if model.noise:
        lines += ["", "[noise]"]
        lines += [f"{NOISE_PREFIX}{v} = {p!r}" for v, p in model.noise.items()]
    implicit = {v for v in model.variables if model.parents[v] == _inferred_parents(model, v)}
    if len(implicit) < len(model.variables):
        lines += ["", "[parents]"]
        lines += [f"{v} = {', '.join(model.parents[v])}" for v in model.variables if v not in implicit]
    lines += ["", "[equations]"]
    lines += [f"{v} = {to_text(model.equations[v])}" for v in model.variables]
    return "\n".join(lines) + "\n"


def _inferred_parents(model: ScmSpec, v: str) -> tuple[str, ...]:
    used = refs(model.equations[v])
    return tuple(u for u in model.variables if u in used)
