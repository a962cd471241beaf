"""Action-prediction models with and without race indicators, scored by AUC."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd
from scipy import special, stats

from ..errors import SingleClass, StatisticalError, ValidationError
from .design import require_columns, standardize
from .logistic import INTERCEPT, DesignMatrix, fit_logistic


def auc(scores, labels) -> float:
    """P(score+ > score-) + P(tie)/2, via midranks."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ValidationError("scores and labels must be 1-D and aligned")
    if not np.isin(y, (0, 1)).all():
        raise ValidationError("labels must be 0/1")
    n1 = int(y.sum())
    n0 = len(y) - n1
    if n1 == 0 or n0 == 0:
        raise SingleClass("AUC is undefined when only one class is present")
    ranks = stats.rankdata(s)
    return float((ranks[y == 1].sum() - n1 * (n1 + 1) / 2) / (n1 * n0))


def independent_columns(X: np.ndarray, labels: Sequence[str]) -> list[int]:
    """Greedy left-to-right selection of linearly independent columns."""
    keep: list[int] = []
    for j in range(X.shape[1]):
        trial = keep + [j]
        if np.linalg.matrix_rank(X[:, trial]) == len(trial):
            keep.append(j)
    return keep


def _one_hot(frame: pd.DataFrame, column: str, prefix: str) -> tuple[list[str], list[np.ndarray]]:
    values = frame[column].astype("string").fillna("missing")
    cats = sorted(values.unique())
    # first category is the reference
    return ([f"{prefix}_{c}" for c in cats[1:]],
            [(values == c).to_numpy(dtype=np.float64) for c in cats[1:]])


def action_design(
    frame: pd.DataFrame,
    action: str,
    numeric: Sequence[str],
    categorical: Sequence[str] = (),
    race: str | None = "race",
    treatment: str = "treatment",
) -> DesignMatrix:
    require_columns(frame, [action, treatment, *numeric, *categorical] + ([race] if race else []))
    labels = [INTERCEPT, "T"]
    cols = [np.ones(len(frame)), frame[treatment].to_numpy(dtype=np.float64)]
    if race:
        lab, col = _one_hot(frame, race, "race")
        labels += lab
        cols += col
    for c in categorical:
        lab, col = _one_hot(frame, c, c)
        labels += lab
        cols += col
    for c in numeric:
        labels.append(c)
        cols.append(standardize(frame[c]))
    X = np.column_stack(cols)
    keep = independent_columns(X, labels)
    return DesignMatrix(tuple(labels[j] for j in keep), X[:, keep], frame[action].to_numpy())


@dataclass(frozen=True)
class ActionAUC:
    with_race: float | None
    without_race: float | None
    n: int
    reason: str | None = None

    def cell(self, digits: int = 3) -> str:
        if self.with_race is None:
            return "-/-"
        return f"{self.with_race:.{digits}f}/{self.without_race:.{digits}f}"


def _fitted_auc(design: DesignMatrix) -> float:
    fit = fit_logistic(design)
    return auc(special.expit(design.X @ fit.coef), design.y)


def compare_action_models(
    frame: pd.DataFrame,
    action: str,
    numeric: Sequence[str],
    categorical: Sequence[str] = (),
    race: str = "race",
    treatment: str = "treatment",
) -> ActionAUC:
    """In-sample AUC of the logit action model with and without race indicators.

    Both fits use identical rows.  A single-class or otherwise unfittable
    cell is reported as missing with a reason.
    """
    rows = frame.dropna(subset=[action, treatment, *numeric]).reset_index(drop=True)
    y = rows[action].to_numpy()
    if len(rows) == 0 or y.min() == y.max():
        return ActionAUC(None, None, len(rows), "single class")
    try:
        a1 = _fitted_auc(action_design(rows, action, numeric, categorical, race, treatment))
        a2 = _fitted_auc(action_design(rows, action, numeric, categorical, None, treatment))
    except StatisticalError as exc:
        return ActionAUC(None, None, len(rows), type(exc).__name__)
    return ActionAUC(a1, a2, len(rows))


def action_auc_grid(
    frame: pd.DataFrame,
    actions: Sequence[str],
    stratum: str,
    numeric: Sequence[str],
    categorical: Sequence[str] = (),
    race: str = "race",
    treatment: str = "treatment",
    strata_order: Sequence[str] | None = None,
) -> pd.DataFrame:
    """Interventions x strata table of "with/without" AUC cells, "-/-" when undefined."""
    require_columns(frame, [stratum])
    strata = list(strata_order) if strata_order is not None else sorted(frame[stratum].astype(str).unique())
    out = pd.DataFrame(index=pd.Index(list(actions), name="Intervention"), columns=strata, dtype=object)
    key = frame[stratum].astype(str)
    for a in actions:
        for s in strata:
            res = compare_action_models(frame[key == s], a, numeric, categorical, race, treatment)
            out.loc[a, s] = res.cell()
    return out
