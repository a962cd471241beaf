"""Synthetic records drawn from a structural causal model."""
from __future__ import annotations

from typing import Sequence

import numpy as np
import pandas as pd

from ..errors import ValidationError
from ..matching import AuditDataset
from ..scm.expr import evaluate
from ..scm.model import ScmSpec
from ..rng import stream


def sample_table(model: ScmSpec, n: int, seed: int, label: str = "sample") -> pd.DataFrame:
    """``n`` i.i.d. draws of every endogenous variable, one column each."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    g = stream(seed, f"{label}/{model.name}")
    noise = {}
    for owner in model.noise_variables:
        noise[owner] = (g.random(n) < model.noise[owner]).astype(np.uint8)
    values: dict[str, np.ndarray] = {}
    for v in model.topological_order:
        values[v] = np.broadcast_to(evaluate(model.equations[v], values, noise, n), (n,)).copy()
    return pd.DataFrame({v: values[v] for v in model.variables})


def sample_from_scm(
    model: ScmSpec,
    n: int,
    seed: int,
    action: str = "A",
    outcome: str = "Y",
    hidden: Sequence[str] = ("U",),
    features: Sequence[str] | None = None,
    label: str = "sample",
) -> AuditDataset:
    """Audit dataset whose features are the observed non-action, non-outcome variables.

    Variables in ``hidden`` (U by default) are left out of the features.
    """
    model.require(action, outcome)
    table = sample_table(model, n, seed, label)
    if features is None:
        skip = {action, outcome, *hidden}
        features = [v for v in model.variables if v not in skip]
    else:
        model.require(*features)
    feats = table[list(features)].to_numpy(dtype=np.float64) if features else np.zeros((n, 0))
    return AuditDataset(
        ids=np.arange(n),
        features=feats,
        actions=table[action].to_numpy(),
        outcomes=table[outcome].to_numpy(),
        feature_names=tuple(features),
    )
