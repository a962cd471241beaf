"""Synthetic student and meeting tables in the documented schema.

Used for demos, tests and format checks; the generating logit models are
known, so fitted coefficients can be compared against the truth.
"""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np
import pandas as pd
from scipy import special

from ..rng import stream

RACES = ("White", "Black", "Hispanic", "Asian", "Multiracial", "Nonresident Alien")
RACE_SHARES = (0.2, 0.47, 0.18, 0.1, 0.03, 0.02)
SEMESTERS = ("2016-Fa", "2017-Sp", "2017-Su", "2017-Fa", "2018-Sp", "2018-Su",
             "2018-Fa", "2019-Sp", "2019-Su", "2019-Fa", "2020-Sp")


def synthetic_students(
    n: int,
    seed: int,
    n_advisors: int = 4,
    treated: float = 0.526,
    coef: Mapping[str, float] | None = None,
    sat_only: float = 0.1,
) -> pd.DataFrame:
    """One row per student; ``coef`` overrides the true graduation logit terms.

    Keys of ``coef``: intercept, treatment, gender, act, efc, hours_other and
    ``advisor:<label>`` / ``race:<label>`` / ``t_race:<label>`` effects.
    """
    g = stream(seed, "synthetic/students")
    truth = {"intercept": -0.5, "treatment": 0.1, "gender": -0.6, "act": 0.18,
             "efc": 0.0, "hours_other": 0.08}
    truth.update(coef or {})
    t = (g.random(n) < treated).astype(int)
    gender = (g.random(n) < 0.4).astype(int)
    act = np.clip(np.round(g.normal(20, 4, n)), 1, 36)
    efc = np.round(np.exp(g.normal(8, 1.2, n)))
    hours = np.round(np.clip(g.normal(6, 5, n), 0, None))
    race = np.array(RACES)[g.choice(len(RACES), size=n, p=RACE_SHARES)]
    labels = [str(i + 1) for i in range(n_advisors)]
    advisor = np.where(t == 1, np.array(labels)[g.integers(0, n_advisors, n)], None)

    def z(v):
        return (v - v.mean()) / v.std()

    eta = (truth["intercept"] + truth["treatment"] * t + truth["gender"] * gender
           + truth["act"] * z(act) + truth["efc"] * z(efc) + truth["hours_other"] * z(hours))
    for key, val in truth.items():
        kind, _, lab = key.partition(":")
        if kind == "advisor":
            eta = eta + val * (advisor == lab)
        elif kind == "race":
            eta = eta + val * (race == lab)
        elif kind == "t_race":
            eta = eta + val * t * (race == lab)
    graduated = (g.random(n) < special.expit(eta)).astype(int)

    # some students only report SAT; a rough linear map stands in for a concordance
    sat = np.round((act * 36 + 360) / 10) * 10
    act_col = act.astype(float)
    act_col[g.random(n) < sat_only] = np.nan
    return pd.DataFrame({
        "student_id": [f"S{i:05d}" for i in range(n)],
        "treatment": t,
        "graduated": graduated,
        "gender": gender,
        "act": act_col,
        "sat": sat,
        "efc": efc,
        "hours_other": hours,
        "race": race,
        "advisor": pd.array(advisor, dtype="string"),
    })


def synthetic_interactions(students: pd.DataFrame, seed: int, mean_meetings: float = 4.0) -> pd.DataFrame:
    """Meeting log (student_id, advisor) for treated students, mostly with their own advisor."""
    g = stream(seed, "synthetic/interactions")
    treated = students[students["treatment"] == 1]
    advisors = sorted(treated["advisor"].dropna().unique())
    rows = []
    for sid, adv in zip(treated["student_id"], treated["advisor"]):
        for _ in range(1 + g.poisson(mean_meetings - 1)):
            other = advisors[g.integers(len(advisors))]
            rows.append((sid, adv if g.random() < 0.8 else other))
    return pd.DataFrame(rows, columns=["student_id", "advisor"])


def synthetic_meetings(
    students: pd.DataFrame,
    seed: int,
    actions: Sequence[str] = ("Intervention 2", "Intervention 4", "Intervention 16",
                              "Intervention 17", "Intervention 20"),
    semesters: Sequence[str] = SEMESTERS,
    rate: float = 0.2,
) -> pd.DataFrame:
    """Meeting rows with one 0/1 column per action; actions ignore race by construction."""
    g = stream(seed, "synthetic/meetings")
    rows = []
    for sem in semesters:
        take = students[g.random(len(students)) < 0.6]
        for _, s in take.iterrows():
            rows.append({"semester": sem, "student_id": s["student_id"], "treatment": s["treatment"],
                         "gender": s["gender"], "act": s["act"], "efc": s["efc"],
                         "hours_other": s["hours_other"], "race": s["race"]})
    frame = pd.DataFrame(rows)
    act = frame["act"].fillna(frame["act"].mean()).to_numpy()
    base = special.logit(rate) + 0.3 * (act - act.mean()) / act.std()
    for a in actions:
        frame[a] = (g.random(len(frame)) < special.expit(base)).astype(int)
    return frame
