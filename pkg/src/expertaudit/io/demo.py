"""Synthetic audit tables in the ingestion schema, drawn from bundled SCMs.

``expert``: action ``A_other`` follows the expert model (targeted on hidden
context, effective); ``A_schedule`` and ``A_progress`` depend on the
features only.  ``null``: every action depends on features only, so each
satisfies A ⊥ Y | X.
"""
from __future__ import annotations

import numpy as np
import pandas as pd

from ..rng import stream
from ..scm.spec_file import load_bundled
from .sampling import sample_table

SEMESTERS = ("2017-Fa", "2018-Sp", "2018-Su", "2018-Fa")


def _gpa(bits: np.ndarray, g: np.random.Generator) -> np.ndarray:
    hi = g.uniform(3.5, 4.0, len(bits))
    lo = g.uniform(1.5, 3.49, len(bits))
    return np.round(np.where(bits == 1, hi, lo), 2)


def demo_frame(kind: str, n: int = 1200, seed: int = 2024) -> pd.DataFrame:
    if kind == "expert":
        model = load_bundled("expert")
        table = sample_table(model, n, seed, label="demo")
        feats = {"x1": table["X"].to_numpy()}
        expert_action = table["A"].to_numpy()
    elif kind == "null":
        model = load_bundled("null")
        table = sample_table(model, n, seed, label="demo")
        feats = {"x1": table["X1"].to_numpy(), "x2": table["X2"].to_numpy()}
        expert_action = table["A"].to_numpy()
    else:
        raise ValueError(f"unknown demo kind {kind!r}")
    g = stream(seed, f"demo/{kind}")
    x = np.column_stack(list(feats.values())).sum(axis=1)
    frame = pd.DataFrame({"student_id": [f"S{i:05d}" for i in range(n)],
                          "semester": np.array(SEMESTERS)[g.integers(0, len(SEMESTERS), n)]})
    for name, col in feats.items():
        frame[name] = col
    frame["A_other"] = expert_action
    frame["A_schedule"] = (g.random(n) < 0.2 + 0.2 * x).astype(int)
    frame["A_progress"] = (g.random(n) < 0.5 - 0.1 * x).astype(int)
    frame["gpa"] = _gpa(table["Y"].to_numpy(), g)
    frame["transfer_status"] = np.where(g.random(n) < 0.03, "", "0")
    frame["hs_gpa"] = np.where(g.random(n) < 0.02, "", np.round(g.uniform(2.0, 4.0, n), 2).astype(str))
    frame["EFC"] = np.where(g.random(n) < 0.02, "", g.integers(0, 20000, n).astype(str))
    return frame
