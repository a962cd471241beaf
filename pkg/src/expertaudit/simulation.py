"""Monte Carlo operating characteristics of the swap test on SCM-sampled data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expert_test import Direction, TestConfig, run_expert_test
from .io.sampling import sample_from_scm
from .matching import greedy_pair
from .scm.model import ScmSpec


@dataclass(frozen=True)
class RejectionRate:
    model: str
    replicates: int
    pairs: int
    K: int
    alpha: float
    rejections: int
    p_values: tuple[float, ...]

    @property
    def rate(self) -> float:
        return self.rejections / self.replicates

    def to_dict(self) -> dict:
        return {"model": self.model, "replicates": self.replicates, "pairs": self.pairs, "K": self.K,
                "alpha": self.alpha, "rejection_rate": self.rate,
                "mean_p": float(np.mean(self.p_values))}


def rejection_rate(
    model: ScmSpec,
    n: int,
    pairs: int,
    K: int,
    replicates: int,
    seed: int = 0,
    alpha: float = 0.05,
    direction: Direction | str = Direction.POSITIVE,
    label: str = "simulate",
) -> RejectionRate:
    """Sample ``replicates`` datasets of ``n`` records, pair on the observed features, test each.

    Replicate r uses seed ``seed + r`` for both sampling and the test.
    """
    ps = []
    for r in range(replicates):
        data = sample_from_scm(model, n, seed + r, label=label)
        ps_ = greedy_pair(data, pairs, stratum_constraint=False)
        res = run_expert_test(data, ps_, TestConfig(K=K, seed=seed + r, direction=direction,
                                                    alpha=alpha, label=label))
        ps.append(res.raw_p)
    rejections = sum(p < alpha for p in ps)
    return RejectionRate(model.name, replicates, pairs, K, alpha, rejections, tuple(ps))
