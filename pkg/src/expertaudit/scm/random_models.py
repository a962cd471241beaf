"""Random binary SCMs on the single-stage decision template.

Roots X (algorithm-visible) and U (hidden context); the action A may
depend on X and U; the outcome Y always depends on U and may depend on
X and A.  Each equation is a uniformly random truth table over its parents
and its own noise bit.
"""
from __future__ import annotations

import numpy as np

from .expr import Noise, Ref, Table
from .model import ScmSpec

OPTIONAL_EDGES = (("X", "A"), ("U", "A"), ("X", "Y"), ("A", "Y"))


def random_decision_model(
    rng: np.random.Generator,
    edge_prob: float = 0.6,
    noise_range: tuple[float, float] = (0.1, 0.9),
) -> ScmSpec:
    parents: dict[str, list[str]] = {"X": [], "U": [], "A": [], "Y": ["U"]}
    for src, dst in OPTIONAL_EDGES:
        if rng.random() < edge_prob:
            parents[dst].append(src)
    order = ("X", "U", "A", "Y")
    equations = {}
    noise = {}
    for v in order:
        pas = tuple(p for p in order if p in parents[v])
        inputs = tuple(Ref(p) for p in pas) + (Noise(v),)
        bits = tuple(int(b) for b in rng.integers(0, 2, size=2 ** len(inputs)))
        equations[v] = Table(inputs, bits)
        noise[v] = float(rng.uniform(*noise_range))
        parents[v] = list(pas)
    return ScmSpec(order, equations, noise, {v: tuple(ps) for v, ps in parents.items()}, "random")
