"""Expertise checks evaluated exactly on a structural causal model.

Role names default to ``A`` (action), ``Y`` (outcome) and ``U`` (hidden
context); every other endogenous variable is treated as algorithm-visible
context X unless ``features`` is given.  All interventional quantities are
computed by graph mutilation, never by conditioning.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import ConditioningOnNullEvent, UnknownVariable
from .scm.inference import TOL, ci_discrepancy, conditional_probability, enumerate_joint
from .scm.model import ScmSpec, intervene

U_ABSENT = "U absent"


@dataclass(frozen=True)
class Roles:
    action: str = "A"
    outcome: str = "Y"
    context: str = "U"
    features: tuple[str, ...] | None = None

    def resolve(self, model: ScmSpec) -> "Roles":
        model.require(self.action, self.outcome)
        if self.features is None:
            skip = {self.action, self.outcome, self.context}
            feats = tuple(v for v in model.variables if v not in skip)
        else:
            feats = tuple(self.features)
            model.require(*feats)
        return Roles(self.action, self.outcome, self.context, feats)

    def has_context(self, model: ScmSpec) -> bool:
        return self.context in model


@dataclass(frozen=True)
class ComponentResult:
    holds: bool
    margin: float
    reason: str | None = None

    def __iter__(self):
        # allows ``holds, margin = check_...(...)``
        return iter((self.holds, self.margin))


@dataclass(frozen=True)
class ExpertiseVerdict:
    effective: bool
    targeted: bool
    heterogeneous: bool
    x: Mapping[str, int]
    u: int
    margins: tuple[float, float, float]
    reasons: tuple[str, ...] = field(default=())

    @property
    def expertly_targeted(self) -> bool:
        return self.effective and self.targeted and self.heterogeneous

    def as_dict(self) -> dict:
        return {
            "effective": self.effective,
            "targeted": self.targeted,
            "heterogeneous": self.heterogeneous,
            "expertly_targeted": self.expertly_targeted,
            "evaluated_at": {"x": dict(self.x), "u": self.u},
            "margins": {
                "effective": _json_float(self.margins[0]),
                "targeted": _json_float(self.margins[1]),
                "heterogeneous": _json_float(self.margins[2]),
            },
            "reasons": list(self.reasons),
        }


def _json_float(v: float):
    return None if math.isnan(v) else v


def _x_dict(x, roles: Roles) -> dict[str, int]:
    if x is None:
        x = {}
    elif not isinstance(x, Mapping):
        x = dict(zip(roles.features, x))
    unknown = set(x) - set(roles.features)
    if unknown:
        raise UnknownVariable(f"{sorted(unknown)} are not algorithm-visible features")
    return dict(x)


def _p(model: ScmSpec, do: Mapping[str, int], event: Mapping[str, int], given: Mapping[str, int]) -> float:
    return conditional_probability(enumerate_joint(intervene(model, do)), event, given)


def _result(margin: float, tol: float, reason: str | None = None) -> ComponentResult:
    return ComponentResult(margin > tol, margin, reason)


def check_effective_action(model, x=None, u=1, roles: Roles = Roles(), tol=TOL) -> ComponentResult:
    """P(Y=1 | do(A=1), x, u) - P(Y=1 | do(A=0), x, u)."""
    roles = roles.resolve(model)
    given = _x_dict(x, roles)
    if roles.has_context(model):
        given[roles.context] = u
    a, y = roles.action, roles.outcome
    margin = _p(model, {a: 1}, {y: 1}, given) - _p(model, {a: 0}, {y: 1}, given)
    return _result(margin, tol)


def check_targeted_action(model, x=None, u=1, roles: Roles = Roles(), tol=TOL) -> ComponentResult:
    """P(A=1 | do(U=u), x) - P(A=1 | do(U=1-u), x)."""
    roles = roles.resolve(model)
    if not roles.has_context(model):
        return ComponentResult(False, math.nan, U_ABSENT)
    given = _x_dict(x, roles)
    c, a = roles.context, roles.action
    margin = _p(model, {c: u}, {a: 1}, given) - _p(model, {c: 1 - u}, {a: 1}, given)
    return _result(margin, tol)


def check_heterogeneous_action(model, x=None, u=1, roles: Roles = Roles(), tol=TOL) -> ComponentResult:
    """Effect of the action at U=u minus its effect at U=1-u, both under do(U, A)."""
    roles = roles.resolve(model)
    if not roles.has_context(model):
        return ComponentResult(False, math.nan, U_ABSENT)
    given = _x_dict(x, roles)
    c, a, y = roles.context, roles.action, roles.outcome

    def lift(uu: int) -> float:
        return _p(model, {c: uu, a: 1}, {y: 1}, given) - _p(model, {c: uu, a: 0}, {y: 1}, given)

    return _result(lift(u) - lift(1 - u), tol)


def check_expertly_targeted(model, x=None, u=1, roles: Roles = Roles(), tol=TOL) -> ExpertiseVerdict:
    roles = roles.resolve(model)
    xd = _x_dict(x, roles)
    eff = check_effective_action(model, xd, u, roles, tol)
    tgt = check_targeted_action(model, xd, u, roles, tol)
    het = check_heterogeneous_action(model, xd, u, roles, tol)
    reasons = tuple(dict.fromkeys(r for r in (eff.reason, tgt.reason, het.reason) if r))
    return ExpertiseVerdict(
        eff.holds, tgt.holds, het.holds, xd, u, (eff.margin, tgt.margin, het.margin), reasons
    )


def _x_grid(features: Sequence[str]) -> Iterator[dict[str, int]]:
    for bits in itertools.product((0, 1), repeat=len(features)):
        yield dict(zip(features, bits))


# u = 1 is searched first: the favourable-context case is the one the
# expertise definition is usually read against.
_U_ORDER = (1, 0)


@dataclass(frozen=True)
class Existence:
    holds: bool
    witness: Mapping[str, int] | None
    reason: str | None = None

    def __iter__(self):
        return iter((self.holds, self.witness))


def check_impactful_action(model, roles: Roles = Roles(), tol=TOL) -> Existence:
    """Search all (x, u) for a nonzero interventional effect of the action."""
    roles = roles.resolve(model)
    us = _U_ORDER if roles.has_context(model) else (None,)
    for xd in _x_grid(roles.features):
        for u in us:
            try:
                r = check_effective_action(model, xd, u if u is not None else 1, roles, tol)
            except ConditioningOnNullEvent:
                continue
            if abs(r.margin) > tol:
                witness = dict(xd)
                if u is not None:
                    witness[roles.context] = u
                return Existence(True, witness)
    return Existence(False, None)


def check_non_algorithmic_action(model, roles: Roles = Roles(), tol=TOL) -> Existence:
    """Search all x for an interventional effect of U on the action."""
    roles = roles.resolve(model)
    if not roles.has_context(model):
        return Existence(False, None, U_ABSENT)
    for xd in _x_grid(roles.features):
        try:
            r = check_targeted_action(model, xd, 1, roles, tol)
        except ConditioningOnNullEvent:
            continue
        if abs(r.margin) > tol:
            return Existence(True, dict(xd))
    return Existence(False, None)


def action_outcome_dependence(model, roles: Roles = Roles()) -> float:
    """Largest deviation from A ⊥ Y | X on the observational joint."""
    roles = roles.resolve(model)
    dist = enumerate_joint(model)
    return ci_discrepancy(dist, (roles.action,), (roles.outcome,), roles.features)


@dataclass(frozen=True)
class ImplicationCheck:
    """``antecedent ⇒ consequent``; vacuous when the antecedent is false."""

    antecedent: bool
    consequent: bool
    details: Mapping[str, object] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return (not self.antecedent) or self.consequent


def verify_dependence_implies_weak_expertise(model, roles: Roles = Roles(), tol=TOL) -> ImplicationCheck:
    """A ⊥̸ Y | X  ⇒  impactful ∨ non-algorithmic."""
    dependent = action_outcome_dependence(model, roles) > tol
    impactful = check_impactful_action(model, roles, tol)
    nonalg = check_non_algorithmic_action(model, roles, tol)
    return ImplicationCheck(
        dependent,
        impactful.holds or nonalg.holds,
        {"impactful": impactful.holds, "non_algorithmic": nonalg.holds},
    )


def verify_expertise_implies_dependence(model, roles: Roles = Roles(), tol=TOL) -> ImplicationCheck:
    """Expertly targeted at some (x, u)  ⇒  A ⊥̸ Y | X (meaningful on faithful models)."""
    roles = roles.resolve(model)
    witness = None
    if roles.has_context(model):
        for xd in _x_grid(roles.features):
            for u in _U_ORDER:
                try:
                    v = check_expertly_targeted(model, xd, u, roles, tol)
                except ConditioningOnNullEvent:
                    continue
                if v.expertly_targeted:
                    witness = {**xd, roles.context: u}
                    break
            if witness:
                break
    gap = action_outcome_dependence(model, roles)
    return ImplicationCheck(witness is not None, gap > tol, {"witness": witness, "dependence": gap})
