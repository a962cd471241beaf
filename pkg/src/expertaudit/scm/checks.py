"""Causal minimality and faithfulness, checked numerically on the exact joint."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import TooManyVariables
from .graph import d_separated
from .inference import TOL, ci_discrepancy, enumerate_joint
from .model import ScmSpec

MAX_FAITHFULNESS_VARIABLES = 5


@dataclass(frozen=True)
class ParentCheck:
    variable: str
    parent: str
    dependent: bool
    discrepancy: float


@dataclass(frozen=True)
class MinimalityReport:
    checks: tuple[ParentCheck, ...]

    @property
    def minimal(self) -> bool:
        return all(c.dependent for c in self.checks)


def check_causal_minimality(model: ScmSpec, tol: float = TOL) -> MinimalityReport:
    """For each declared parent X of V, test X dependent on V given PA_V minus X.

    A model with no edges is minimal vacuously.
    """
    dist = enumerate_joint(model)
    checks = []
    for v in model.variables:
        pas = model.parents[v]
        for p in pas:
            rest = tuple(q for q in pas if q != p)
            gap = ci_discrepancy(dist, (p,), (v,), rest)
            checks.append(ParentCheck(v, p, gap > tol, gap))
    return MinimalityReport(tuple(checks))


@dataclass(frozen=True)
class CIStatement:
    x: tuple[str, ...]
    y: tuple[str, ...]
    z: tuple[str, ...]
    discrepancy: float

    def __str__(self):
        z = ", ".join(self.z) or "∅"
        return f"{{{', '.join(self.x)}}} ⊥ {{{', '.join(self.y)}}} | {{{z}}}"


@dataclass(frozen=True)
class FaithfulnessReport:
    violations: tuple[CIStatement, ...]
    n_statements: int

    @property
    def faithful(self) -> bool:
        return not self.violations


def ci_statements(variables: tuple[str, ...]):
    """All unordered disjoint (X, Y, Z) with X, Y nonempty.

    Each variable goes to X, Y, Z or nowhere; a statement and its mirror
    image are emitted once (X holds the lowest-indexed variable of X ∪ Y).
    """
    for roles in itertools.product(range(4), repeat=len(variables)):
        xs = tuple(v for v, r in zip(variables, roles) if r == 1)
        ys = tuple(v for v, r in zip(variables, roles) if r == 2)
        if not xs or not ys:
            continue
        if variables.index(xs[0]) > variables.index(ys[0]):
            continue
        zs = tuple(v for v, r in zip(variables, roles) if r == 3)
        yield xs, ys, zs


def check_faithfulness(
    model: ScmSpec,
    tol: float = TOL,
    max_variables: int = MAX_FAITHFULNESS_VARIABLES,
) -> FaithfulnessReport:
    """List every CI that holds numerically but is not implied by d-separation.

    The verdict is pointwise in the model's noise parameters.
    """
    if len(model.variables) > max_variables:
        raise TooManyVariables(
            f"faithfulness check enumerates all CI statements; "
            f"{len(model.variables)} variables exceed the limit of {max_variables}"
        )
    dist = enumerate_joint(model)
    violations = []
    n = 0
    for xs, ys, zs in ci_statements(model.variables):
        n += 1
        gap = ci_discrepancy(dist, xs, ys, zs)
        if gap <= tol and not d_separated(model, xs, ys, zs):
            violations.append(CIStatement(xs, ys, zs, gap))
    return FaithfulnessReport(tuple(violations), n)
