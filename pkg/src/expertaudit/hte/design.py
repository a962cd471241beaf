"""Design matrices for the advisor and race/ethnicity heterogeneity models.

Student table schema (one row per student):

    student_id, treatment (0/1), graduated (0/1), gender (0/1),
    act (ACT composite, may be empty when sat is given), sat, efc,
    hours_other, race (label), advisor (label; empty for control students)

Numeric controls are standardized to mean 0 and unit standard deviation;
indicator columns are left as 0/1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from ..errors import MissingColumn, RankDeficient, ValidationError
from .logistic import INTERCEPT, DesignMatrix, RegressionFit, combined_effect, fit_logistic

TREATMENT = "Assigned Group"
CONTROLS = (("gender", "Gender", False), ("act", "ACT Composite", True),
            ("efc", "EFC", True), ("hours_other", "Hours Other", True))
RACE_GROUPS = ("Hispanic", "Asian", "Black")
RACE_REFERENCE = "White"
RACE_EXCLUDED = ("Multiracial", "Nonresident Alien")


def require_columns(frame: pd.DataFrame, columns: Iterable[str]) -> None:
    for c in columns:
        if c not in frame.columns:
            raise MissingColumn(f"missing required column {c!r}")


def standardize(values: pd.Series) -> np.ndarray:
    v = values.to_numpy(dtype=np.float64)
    sd = v.std()
    if sd == 0:
        return np.zeros_like(v)
    return (v - v.mean()) / sd


def modal_advisor(interactions: pd.DataFrame, student: str = "student_id", advisor: str = "advisor") -> pd.Series:
    """Advisor each student met most often; ties go to the smallest label."""
    require_columns(interactions, (student, advisor))
    counts = interactions.groupby([student, advisor]).size().rename("n").reset_index()
    counts = counts.sort_values([student, "n", advisor], ascending=[True, False, True], kind="mergesort")
    return counts.drop_duplicates(student).set_index(student)[advisor]


def load_concordance(path) -> pd.DataFrame:
    """SAT->ACT concordance CSV with columns ``sat`` (lower bound of band) and ``act``."""
    table = pd.read_csv(path)
    require_columns(table, ("sat", "act"))
    return table.sort_values("sat").reset_index(drop=True)


def apply_concordance(frame: pd.DataFrame, concordance: pd.DataFrame) -> pd.DataFrame:
    """Fill missing ``act`` from ``sat`` using the band whose lower bound is at or below the score."""
    require_columns(frame, ("act", "sat"))
    out = frame.copy()
    need = out["act"].isna() & out["sat"].notna()
    if need.any():
        bounds = concordance["sat"].to_numpy(dtype=float)
        pos = np.searchsorted(bounds, out.loc[need, "sat"].to_numpy(dtype=float), side="right") - 1
        if (pos < 0).any():
            raise ValidationError("SAT score below the concordance table range")
        out.loc[need, "act"] = concordance["act"].to_numpy(dtype=float)[pos]
    return out


def _controls(frame: pd.DataFrame) -> tuple[list[str], list[np.ndarray]]:
    labels, cols = [], []
    for col, label, numeric in CONTROLS:
        labels.append(label)
        cols.append(standardize(frame[col]) if numeric else frame[col].to_numpy(dtype=np.float64))
    return labels, cols


def _check_complete(frame: pd.DataFrame, columns: Sequence[str]) -> None:
    bad = frame[list(columns)].isna().any(axis=1)
    if bad.any():
        raise ValidationError(f"{int(bad.sum())} rows have missing values in {list(columns)}")


def build_advisor_design(
    students: pd.DataFrame,
    outcome: str = "graduated",
    reference: str | None = None,
    treatment_only: bool = False,
) -> DesignMatrix:
    """Constant, Assigned Group, one indicator per non-reference advisor, then controls.

    Control students have every advisor indicator at 0.  The reference
    advisor defaults to the last label in sorted order.
    """
    needed = ["treatment", outcome, "advisor"] + [c for c, _, _ in CONTROLS]
    require_columns(students, needed)
    frame = students
    if treatment_only:
        frame = frame[frame["treatment"] == 1]
    frame = frame.reset_index(drop=True)
    _check_complete(frame, [c for c in needed if c != "advisor"])
    treated = frame["treatment"].to_numpy(dtype=np.float64)
    advisors = sorted(str(a) for a in frame.loc[treated == 1, "advisor"].dropna().unique())
    if not advisors:
        raise ValidationError("no treated students with an advisor")
    ref = advisors[-1] if reference is None else str(reference)
    if ref not in advisors:
        raise ValidationError(f"reference advisor {ref!r} not present")

    labels = [INTERCEPT]
    cols = [np.ones(len(frame))]
    if not treatment_only:
        labels.append(TREATMENT)
        cols.append(treated)
    adv = frame["advisor"].astype("string").fillna("")
    adv_labels = []
    for a in advisors:
        if a == ref:
            continue
        lab = f"Advisor {a}"
        adv_labels.append(lab)
        labels.append(lab)
        cols.append(((adv == a).to_numpy() & (treated == 1)).astype(np.float64))
    c_labels, c_cols = _controls(frame)
    labels += c_labels
    cols += c_cols
    return DesignMatrix(
        tuple(labels),
        np.column_stack(cols),
        frame[outcome].to_numpy(),
        {"treatment": (TREATMENT,) if not treatment_only else (), "advisors": tuple(adv_labels),
         "controls": tuple(c_labels)},
    )


def build_race_design(
    students: pd.DataFrame,
    outcome: str = "graduated",
    groups: Sequence[str] = RACE_GROUPS,
) -> DesignMatrix:
    """Constant, Assigned Group, then (Is_g, T x g) for each group, then controls.

    White is the omitted category.  Students outside ``groups`` and White
    (multiracial, nonresident alien, missing) are excluded.
    """
    needed = ["treatment", outcome, "race"] + [c for c, _, _ in CONTROLS]
    require_columns(students, needed)
    keep = students["race"].isin(list(groups) + [RACE_REFERENCE])
    frame = students[keep].reset_index(drop=True)
    _check_complete(frame, needed)
    t = frame["treatment"].to_numpy(dtype=np.float64)
    labels = [INTERCEPT, TREATMENT]
    cols = [np.ones(len(frame)), t]
    inter = []
    for g in groups:
        ind = (frame["race"] == g).to_numpy(dtype=np.float64)
        labels += [f"Is_{g}", f"T x {g}"]
        cols += [ind, ind * t]
        inter.append(f"T x {g}")
    c_labels, c_cols = _controls(frame)
    labels += c_labels
    cols += c_cols
    X = np.column_stack(cols)
    design = DesignMatrix(
        tuple(labels), X, frame[outcome].to_numpy(),
        {"treatment": (TREATMENT,), "interactions": tuple(inter), "controls": tuple(c_labels)},
    )
    for lab in inter:
        if not design.column(lab).any():
            raise RankDeficient(f"interaction column {lab!r} is identically zero")
    return design


@dataclass(frozen=True)
class CombinedEffect:
    group: str
    coef1: float
    p1: float
    coef2: float
    se2: float
    p2: float


def combined_effects(fit: RegressionFit, groups: Sequence[str] = RACE_GROUPS) -> list[CombinedEffect]:
    """Interaction coefficient and treatment + interaction sum per group."""
    out = []
    for g in groups:
        lab = f"T x {g}"
        est, se, p = combined_effect(fit, (TREATMENT, lab))
        i = fit.index(lab)
        out.append(CombinedEffect(g, float(fit.coef[i]), float(fit.p_values[i]), est, se, p))
    return out


def fit_advisor_model(students: pd.DataFrame, **kwargs) -> RegressionFit:
    return fit_logistic(build_advisor_design(students, **kwargs))


def fit_race_model(students: pd.DataFrame, **kwargs) -> RegressionFit:
    return fit_logistic(build_race_design(students, **kwargs))
