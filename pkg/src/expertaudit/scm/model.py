"""Binary structural causal models and do-interventions."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from ..errors import InvalidModel, UnknownVariable
from .expr import NOISE_PREFIX, Const, Expr, noise_refs, refs


def _frozen(mapping: Mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class ScmSpec:
    """A discrete SCM over binary endogenous variables.

    ``noise`` maps a variable to the Bernoulli parameter of its own
    exogenous noise ``N_<var>``; variables without an entry have no noise
    (e.g. after an intervention).  ``parents`` may declare more parents than
    the equation uses, which is how non-minimal models are expressed; when
    a variable has no entry its parents are read off its equation.
    """

    variables: tuple[str, ...]
    equations: Mapping[str, Expr]
    noise: Mapping[str, float] = field(default_factory=dict)
    parents: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise InvalidModel("duplicate variable names")
        for v in variables:
            if v.startswith(NOISE_PREFIX):
                raise InvalidModel(f"variable name {v!r} clashes with the noise prefix")
        known = set(variables)
        for mapping, what in ((self.equations, "equation"), (self.noise, "noise"), (self.parents, "parents")):
            extra = set(mapping) - known
            if extra:
                raise UnknownVariable(f"{what} given for undeclared variable(s) {sorted(extra)}")
        missing = [v for v in variables if v not in self.equations]
        if missing:
            raise InvalidModel(f"no equation for {missing}")

        parents = {}
        for v in variables:
            used = refs(self.equations[v])
            if v in self.parents:
                declared = tuple(self.parents[v])
                if len(set(declared)) != len(declared):
                    raise InvalidModel(f"duplicate parent of {v}")
            else:
                declared = tuple(u for u in variables if u in used)
            unknown = set(declared) - known
            if unknown:
                raise UnknownVariable(f"parents of {v} include undeclared {sorted(unknown)}")
            if not used <= set(declared):
                raise InvalidModel(
                    f"equation of {v} references non-parents {sorted(used - set(declared))}"
                )
            owners = noise_refs(self.equations[v])
            if owners - {v}:
                raise InvalidModel(f"equation of {v} references foreign noise {sorted(owners - {v})}")
            if owners and v not in self.noise:
                raise InvalidModel(f"equation of {v} uses N_{v} but no noise parameter is given")
            if not owners and v in self.noise:
                raise InvalidModel(f"noise parameter given for {v} but N_{v} is unused")
            parents[v] = declared

        for v, p in self.noise.items():
            if not 0.0 < float(p) < 1.0:
                raise InvalidModel(f"noise parameter of {v} must lie in (0, 1), got {p}")

        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "parents", _frozen(parents))
        object.__setattr__(self, "equations", _frozen(self.equations))
        object.__setattr__(self, "noise", _frozen({v: float(self.noise[v]) for v in variables if v in self.noise}))
        object.__setattr__(self, "_order", self._topological_order())

    def _topological_order(self) -> tuple[str, ...]:
        remaining = {v: set(self.parents[v]) for v in self.variables}
        order: list[str] = []
        while remaining:
            ready = [v for v in self.variables if v in remaining and not remaining[v]]
            if not ready:
                raise InvalidModel(f"parent relation is cyclic among {sorted(remaining)}")
            v = ready[0]
            order.append(v)
            del remaining[v]
            for deps in remaining.values():
                deps.discard(v)
        return tuple(order)

    @property
    def topological_order(self) -> tuple[str, ...]:
        return self._order

    @property
    def noise_variables(self) -> tuple[str, ...]:
        """Owners of noise terms, in variable order."""
        return tuple(v for v in self.variables if v in self.noise)

    def children(self, v: str) -> tuple[str, ...]:
        self.require(v)
        return tuple(c for c in self.variables if v in self.parents[c])

    def edges(self) -> list[tuple[str, str]]:
        return [(p, v) for v in self.variables for p in self.parents[v]]

    def require(self, *names: str) -> None:
        for n in names:
            if n not in self.parents:
                raise UnknownVariable(f"unknown variable {n!r}")

    def with_noise(self, **params: float) -> "ScmSpec":
        self.require(*params)
        noise = dict(self.noise)
        noise.update(params)
        return ScmSpec(self.variables, self.equations, noise, self.parents, self.name)

    def __contains__(self, name: str) -> bool:
        return name in self.parents


@dataclass(frozen=True)
class DoAssignment:
    assignments: Mapping[str, int]

    def __post_init__(self):
        for v, val in self.assignments.items():
            if val not in (0, 1):
                raise InvalidModel(f"do({v}={val!r}): value must be 0 or 1")
        object.__setattr__(self, "assignments", _frozen(self.assignments))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "DoAssignment":
        out: dict[str, int] = {}
        for v, val in pairs:
            if v in out:
                raise InvalidModel(f"variable {v!r} assigned twice")
            out[v] = val
        return cls(out)

    def validate(self, model: ScmSpec) -> None:
        model.require(*self.assignments)


def intervene(model: ScmSpec, do: DoAssignment | Mapping[str, int]) -> ScmSpec:
    """Graph mutilation: intervened variables become constants with no parents."""
    if not isinstance(do, DoAssignment):
        do = DoAssignment(do)
    do.validate(model)
    equations = dict(model.equations)
    parents = dict(model.parents)
    noise = dict(model.noise)
    for v, val in do.assignments.items():
        equations[v] = Const(val)
        parents[v] = ()
        noise.pop(v, None)
    label = ",".join(f"{v}={val}" for v, val in do.assignments.items())
    return ScmSpec(model.variables, equations, noise, parents, f"{model.name}|do({label})")
