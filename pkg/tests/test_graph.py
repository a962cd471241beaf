import itertools

import networkx as nx
import numpy as np
import pytest

from expertaudit.errors import UnknownVariable
from expertaudit.scm import m1
from expertaudit.scm.graph import ancestors, d_separated
from expertaudit.scm.inference import enumerate_joint, is_independent
from expertaudit.scm.checks import check_faithfulness, ci_statements
from expertaudit.scm.random_models import random_decision_model


def _nx_dsep(parents, x, y, z):
    g = nx.DiGraph()
    g.add_nodes_from(parents)
    g.add_edges_from((p, v) for v, ps in parents.items() for p in ps)
    fn = getattr(nx, "is_d_separator", None) or nx.d_separated
    return fn(g, set(x), set(y), set(z))


FIG1 = {"X": (), "U": (), "A": ("X", "U"), "Y": ("X", "U", "A")}


def test_direct_edge_never_blocked():
    assert not d_separated(FIG1, {"A"}, {"Y"}, {"X"})
    assert not d_separated(FIG1, {"A"}, {"Y"}, {"X", "U"})


def test_chain():
    g = {"A": (), "B": ("A",), "C": ("B",)}
    assert d_separated(g, {"A"}, {"C"}, {"B"})
    assert not d_separated(g, {"A"}, {"C"})


def test_collider():
    g = {"A": (), "B": (), "C": ("A", "B")}
    assert d_separated(g, {"A"}, {"B"})
    assert not d_separated(g, {"A"}, {"B"}, {"C"})


def test_descendant_of_collider_opens_path():
    g = {"A": (), "B": (), "C": ("A", "B"), "D": ("C",)}
    assert not d_separated(g, {"A"}, {"B"}, {"D"})


def test_unknown_and_overlapping():
    with pytest.raises(UnknownVariable):
        d_separated(FIG1, {"Q"}, {"Y"})
    with pytest.raises(ValueError):
        d_separated(FIG1, {"A"}, {"A"})


def test_ancestors_includes_self():
    assert ancestors(FIG1, {"A"}) == {"A", "X", "U"}


def _random_dag(rng, n):
    names = [f"V{i}" for i in range(n)]
    return {v: tuple(names[j] for j in range(i) if rng.random() < 0.4) for i, v in enumerate(names)}


def test_agrees_with_networkx_on_random_dags():
    rng = np.random.default_rng(3)
    for _ in range(60):
        g = _random_dag(rng, int(rng.integers(3, 7)))
        names = tuple(g)
        for xs, ys, zs in ci_statements(names):
            assert d_separated(g, xs, ys, zs) == _nx_dsep(g, xs, ys, zs), (g, xs, ys, zs)


def test_dsep_implies_numeric_independence():
    # global Markov property: holds for every model, faithful or not
    rng = np.random.default_rng(5)
    for _ in range(50):
        model = random_decision_model(rng)
        dist = enumerate_joint(model)
        for xs, ys, zs in ci_statements(model.variables):
            if d_separated(model, xs, ys, zs):
                assert is_independent(dist, xs, ys, zs)


def test_numeric_ci_matches_dsep_on_faithful_models():
    rng = np.random.default_rng(6)
    seen = 0
    while seen < 40:
        model = random_decision_model(rng)
        if not check_faithfulness(model).faithful:
            continue
        seen += 1
        dist = enumerate_joint(model)
        for xs, ys, zs in ci_statements(model.variables):
            assert d_separated(model, xs, ys, zs) == is_independent(dist, xs, ys, zs)


def test_m1_graph_has_no_separations_between_adjacent_pairs():
    model = m1()
    for a, b in itertools.combinations(model.variables, 2):
        rest = [v for v in model.variables if v not in (a, b)]
        assert not d_separated(model, {a}, {b}, rest)
