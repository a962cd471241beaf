import numpy as np
import pandas as pd
import pytest
from hypothesis import given, strategies as st

from expertaudit.errors import SingleClass
from expertaudit.hte.actionpred import action_auc_grid, auc, compare_action_models
from expertaudit.hte.synthetic import SEMESTERS, synthetic_meetings, synthetic_students

ACTIONS = ("Intervention 2", "Intervention 4", "Intervention 16", "Intervention 17", "Intervention 20")


def _pairwise_auc(s, y):
    pos = [a for a, b in zip(s, y) if b == 1]
    neg = [a for a, b in zip(s, y) if b == 0]
    return sum((p > n) + 0.5 * (p == n) for p in pos for n in neg) / (len(pos) * len(neg))


def test_auc_examples():
    assert auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    assert auc([0.1, 0.2, 0.3], [0, 1, 1]) == 1.0
    assert auc([0.5] * 4, [0, 1, 0, 1]) == 0.5
    with pytest.raises(SingleClass):
        auc([0.1, 0.2], [1, 1])


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 1)), min_size=2, max_size=40))
def test_auc_matches_pairwise_and_monotone_invariant(rows):
    s = np.array([r[0] for r in rows], dtype=float)
    y = np.array([r[1] for r in rows])
    if y.min() == y.max():
        return
    a = auc(s, y)
    assert a == pytest.approx(_pairwise_auc(s, y), abs=1e-12)
    assert auc(np.exp(s) * 3 - 7, y) == pytest.approx(a, abs=1e-12)


@pytest.fixture(scope="module")
def meetings():
    students = synthetic_students(400, seed=3)
    students["act"] = students["act"].fillna(students["act"].mean())
    return synthetic_meetings(students, seed=3)


def test_race_independent_action(meetings):
    res = compare_action_models(meetings, "Intervention 2", ["act", "efc", "hours_other"], ["gender"])
    assert res.with_race >= res.without_race  # nested model, in-sample
    assert abs(res.with_race - res.without_race) < 0.05
    assert res.n == len(meetings)


def test_constant_race_gives_identical_auc(meetings):
    m = meetings.assign(race="White")
    res = compare_action_models(m, "Intervention 4", ["act", "efc"])
    assert res.with_race == res.without_race


def test_single_class_cell_is_missing(meetings):
    m = meetings.assign(**{"Intervention 2": 0})
    res = compare_action_models(m, "Intervention 2", ["act"])
    assert res.cell() == "-/-" and res.reason == "single class"


def test_grid_format(meetings):
    m = meetings.copy()
    m.loc[m["semester"] == "2017-Su", "Intervention 16"] = 0
    grid = action_auc_grid(m, ACTIONS, "semester", ["act", "efc", "hours_other"], strata_order=SEMESTERS)
    assert grid.shape == (5, 11)
    assert list(grid.columns) == list(SEMESTERS)
    assert grid.loc["Intervention 16", "2017-Su"] == "-/-"
    cells = [c for c in grid.to_numpy().ravel() if c != "-/-"]
    assert len(cells) == 54
    assert all(len(c) == 11 and c[1] == "." and c[5] == "/" for c in cells)
