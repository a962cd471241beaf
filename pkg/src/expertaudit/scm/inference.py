"""Exact joint distributions by enumeration of exogenous noise."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import ConditioningOnNullEvent, InvalidModel, TooManyNoiseVariables, UnknownVariable
from .expr import evaluate
from .model import ScmSpec

TOL = 1e-9
NULL_EVENT = 1e-15
MAX_NOISE = 20


@dataclass(frozen=True)
class JointDistribution:
    """Probability table over binary variables, stored as a ``(2,)*k`` array."""

    variables: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        k = len(self.variables)
        if len(set(self.variables)) != k:
            raise InvalidModel("duplicate variables in joint distribution")
        if probs.shape != (2,) * k:
            raise InvalidModel(f"table shape {probs.shape} does not match {k} binary variables")
        if (probs < 0).any():
            raise InvalidModel("negative probability")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise InvalidModel(f"probabilities sum to {probs.sum()!r}")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "probs", probs)

    @property
    def table(self) -> dict[tuple[int, ...], float]:
        return {a: float(self.probs[a]) for a in itertools.product((0, 1), repeat=len(self.variables))}

    def axis(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def marginal(self, names: Sequence[str]) -> "JointDistribution":
        names = tuple(names)
        axes = [self.axis(n) for n in names]
        drop = tuple(i for i in range(len(self.variables)) if i not in axes)
        summed = self.probs.sum(axis=drop) if drop else self.probs
        # remaining axes are in original order; permute to requested order
        kept = sorted(axes)
        perm = [kept.index(a) for a in axes]
        return JointDistribution(names, np.transpose(summed, perm) if names else np.asarray(summed))

    def probability(self, event: Mapping[str, int]) -> float:
        index: list = [slice(None)] * len(self.variables)
        for name, value in event.items():
            i = self.axis(name)
            if value not in (0, 1):
                raise InvalidModel(f"{name}={value!r} is not binary")
            if index[i] != slice(None) and index[i] != value:
                return 0.0
            index[i] = value
        return float(self.probs[tuple(index)].sum())


def enumerate_joint(model: ScmSpec, max_noise: int = MAX_NOISE) -> JointDistribution:
    """Exact joint over all endogenous variables of ``model``."""
    owners = model.noise_variables
    m = len(owners)
    if m > max_noise:
        raise TooManyNoiseVariables(f"{m} noise variables exceed the enumeration limit of {max_noise}")
    size = 1 << m
    codes = np.arange(size, dtype=np.int64)
    weights = np.ones(size)
    noise = {}
    for j, owner in enumerate(owners):
        bits = ((codes >> (m - 1 - j)) & 1).astype(np.uint8)
        p = model.noise[owner]
        noise[owner] = bits
        weights *= np.where(bits == 1, p, 1.0 - p)
    values: dict[str, np.ndarray] = {}
    for v in model.topological_order:
        values[v] = np.broadcast_to(evaluate(model.equations[v], values, noise, size), (size,))
    k = len(model.variables)
    flat = np.zeros(size, dtype=np.int64)
    for v in model.variables:
        flat = (flat << 1) | values[v].astype(np.int64)
    probs = np.bincount(flat, weights=weights, minlength=1 << k).reshape((2,) * k)
    return JointDistribution(model.variables, probs)


def conditional_probability(
    dist: JointDistribution,
    event: Mapping[str, int],
    given: Mapping[str, int] | None = None,
) -> float:
    """P(event | given) on an exact table."""
    given = dict(given or {})
    for name in list(event) + list(given):
        dist.axis(name)
    denom = dist.probability(given)
    if denom < NULL_EVENT:
        raise ConditioningOnNullEvent(f"P({_fmt(given)}) = {denom!r}")
    for name, value in event.items():
        if name in given and given[name] != value:
            return 0.0
    joint = dist.probability({**given, **event})
    return joint / denom


def ci_discrepancy(
    dist: JointDistribution,
    xs: Iterable[str],
    ys: Iterable[str],
    zs: Iterable[str] = (),
) -> float:
    """Largest |P(x,y|z) - P(x|z)P(y|z)| over assignments with P(z) > 0."""
    xs, ys, zs = tuple(xs), tuple(ys), tuple(zs)
    if set(xs) & set(ys) or set(xs) & set(zs) or set(ys) & set(zs):
        raise ValueError("variable sets must be disjoint")
    if not xs or not ys:
        return 0.0
    sub = dist.marginal(zs + xs + ys).probs
    nz, nx, ny = 1 << len(zs), 1 << len(xs), 1 << len(ys)
    sub = sub.reshape(nz, nx, ny)
    pz = sub.sum(axis=(1, 2))
    keep = pz > NULL_EVENT
    if not keep.any():
        return 0.0
    cond = sub[keep] / pz[keep, None, None]
    px = cond.sum(axis=2, keepdims=True)
    py = cond.sum(axis=1, keepdims=True)
    return float(np.abs(cond - px * py).max())


def is_independent(dist, xs, ys, zs=(), tol: float = TOL) -> bool:
    return ci_discrepancy(dist, xs, ys, zs) <= tol


def _fmt(assignment: Mapping[str, int]) -> str:
    return ", ".join(f"{k}={v}" for k, v in assignment.items()) or "∅"
