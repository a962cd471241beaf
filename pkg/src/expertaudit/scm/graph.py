"""d-separation on the DAG induced by a model's parent sets."""
from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

from ..errors import UnknownVariable
from .model import ScmSpec


def _parent_map(graph: ScmSpec | Mapping[str, Iterable[str]]) -> dict[str, tuple[str, ...]]:
    if isinstance(graph, ScmSpec):
        return dict(graph.parents)
    return {v: tuple(ps) for v, ps in graph.items()}


def ancestors(parents: Mapping[str, Iterable[str]], nodes: Iterable[str]) -> set[str]:
    """``nodes`` together with all their ancestors."""
    seen = set(nodes)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for p in parents.get(v, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def d_separated(
    graph: ScmSpec | Mapping[str, Iterable[str]],
    x: Iterable[str],
    y: Iterable[str],
    z: Iterable[str] = (),
) -> bool:
    """True iff every path between ``x`` and ``y`` is blocked by ``z``.

    Uses the moralized ancestral graph: restrict to ancestors of x ∪ y ∪ z,
    marry co-parents, drop edge directions, delete z and test reachability.
    """
    parents = _parent_map(graph)
    x, y, z = set(x), set(y), set(z)
    for v in x | y | z:
        if v not in parents:
            raise UnknownVariable(f"unknown variable {v!r}")
    if x & y or x & z or y & z:
        raise ValueError("x, y and z must be disjoint")
    if not x or not y:
        return True

    keep = ancestors(parents, x | y | z)
    adj: dict[str, set[str]] = {v: set() for v in keep}
    for v in keep:
        ps = [p for p in parents[v] if p in keep]
        for p in ps:
            adj[v].add(p)
            adj[p].add(v)
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)

    seen = set(x)
    queue = deque(x)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w in z or w in seen:
                continue
            if w in y:
                return False
            seen.add(w)
            queue.append(w)
    return True
