"""Minimum detectable effect and sample-size calculus for a treatment x subgroup interaction.

The reference model is the saturated linear probability model

    P(Z = 1) = b0 + b1 T + b2 S + b3 T S

whose interaction estimate is the differences-in-differences of cell means.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import special

from ..errors import ValidationError
from ..rng import stream

N_PARAMS = 4
# The published MDE table is consistent with an outcome variance of about
# 0.193 per cell, i.e. a base rate near 0.26; it is a default, not a target.
DEFAULT_BASE_RATE = 0.26


@dataclass(frozen=True)
class PowerConfig:
    alpha: float = 0.05
    power: float = 0.80
    decimals: int | None = None  # round quantiles, e.g. 2 gives 1.96 and 0.84

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValidationError("alpha must lie in (0, 1)")
        if not 0 < self.power < 1:
            raise ValidationError("power must lie in (0, 1)")

    def _round(self, v: float) -> float:
        return round(v, self.decimals) if self.decimals is not None else v

    @property
    def z_alpha(self) -> float:
        return self._round(float(special.ndtri(1 - self.alpha / 2)))

    @property
    def z_beta(self) -> float:
        return self._round(float(special.ndtri(self.power)))

    @property
    def multiplier(self) -> float:
        return self.z_alpha + self.z_beta


def mde(se_beta3: float, cfg: PowerConfig = PowerConfig()) -> float:
    if not se_beta3 > 0:
        raise ValidationError("standard error must be positive")
    return cfg.multiplier * se_beta3


def required_sample_size(
    target_mde: float,
    residual_sum_squares: float,
    gram_inverse_33: float,
    cfg: PowerConfig = PowerConfig(),
    p_params: int = N_PARAMS,
) -> int:
    """ceil(p + RSS * (z_a + z_b)^2 * (X'X)^-1_33 / MDE^2)."""
    for name, v in (("target_mde", target_mde), ("residual_sum_squares", residual_sum_squares),
                    ("gram_inverse_33", gram_inverse_33)):
        if not v > 0:
            raise ValidationError(f"{name} must be positive")
    if p_params < 1:
        raise ValidationError("p_params must be positive")
    n = p_params + residual_sum_squares * cfg.multiplier ** 2 * gram_inverse_33 / target_mde ** 2
    # guard against 1000.0000000001 style float noise before the ceiling
    return int(math.ceil(round(n, 9)))


_CELLS = ((1, 1), (0, 1), (1, 0), (0, 0))


def did_beta3(cell_means) -> float:
    """(E[Z|T=1,S=1] - E[Z|T=0,S=1]) - (E[Z|T=1,S=0] - E[Z|T=0,S=0]).

    Accepts a mapping keyed by (t, s) or a 4-sequence ordered
    (1,1), (0,1), (1,0), (0,0).
    """
    if isinstance(cell_means, Mapping):
        vals = [float(cell_means[c]) for c in _CELLS]
    else:
        vals = [float(v) for v in cell_means]
        if len(vals) != 4:
            raise ValidationError("expected four cell means")
    if any(not 0 <= v <= 1 for v in vals):
        raise ValidationError("cell means must lie in [0, 1]")
    e11, e01, e10, e00 = vals
    return (e11 - e01) - (e10 - e00)


@dataclass(frozen=True)
class LinearFit:
    coef: np.ndarray
    residual_sum_squares: float
    gram_inverse: np.ndarray
    n: int

    @property
    def p(self) -> int:
        return len(self.coef)

    @property
    def sigma2(self) -> float:
        return self.residual_sum_squares / (self.n - self.p)

    @property
    def se(self) -> np.ndarray:
        return np.sqrt(self.sigma2 * np.diag(self.gram_inverse))

    @property
    def beta3(self) -> float:
        return float(self.coef[3])

    @property
    def se_beta3(self) -> float:
        return float(self.se[3])


def lpm_design(t: np.ndarray, s: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    return np.column_stack([np.ones_like(t), t, s, t * s])


def fit_lpm(t, s, z) -> LinearFit:
    """OLS of Z on (1, T, S, T*S)."""
    X = lpm_design(t, s)
    z = np.asarray(z, dtype=np.float64)
    gram_inv = np.linalg.inv(X.T @ X)
    coef = gram_inv @ (X.T @ z)
    resid = z - X @ coef
    return LinearFit(coef, float(resid @ resid), gram_inv, len(z))


def _allocate(total: int, shares: Sequence[float]) -> list[int]:
    """Largest-remainder rounding of ``total * shares`` to integers summing to ``total``."""
    raw = np.asarray(shares, dtype=np.float64) * total
    base = np.floor(raw).astype(int)
    short = total - base.sum()
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:short]] += 1
    return base.tolist()


def synthetic_power_sample(
    N: int,
    treated: float = 0.526,
    subgroup: float = 0.47,
    base_rate: float = DEFAULT_BASE_RATE,
    effect: float = 0.0,
    seed: int | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(T, S, Z) for a two-by-two design.

    With ``seed=None`` cell sizes and outcome counts are allocated exactly
    (largest-remainder rounding), so the result is a deterministic function
    of N.  With a seed, T, S and Z are Bernoulli draws.
    """
    if N < 8:
        raise ValidationError("N must be at least 8")
    rates = {(1, 1): base_rate + effect, (0, 1): base_rate, (1, 0): base_rate, (0, 0): base_rate}
    if any(not 0 <= r <= 1 for r in rates.values()):
        raise ValidationError("cell outcome rates must lie in [0, 1]")
    if seed is not None:
        g = stream(seed, "power/sample")
        t = (g.random(N) < treated).astype(np.uint8)
        s = (g.random(N) < subgroup).astype(np.uint8)
        p = np.array([rates[(int(a), int(b))] for a, b in zip(t, s)])
        z = (g.random(N) < p).astype(np.uint8)
        return t, s, z
    shares = [treated * subgroup, (1 - treated) * subgroup, treated * (1 - subgroup),
              (1 - treated) * (1 - subgroup)]
    sizes = _allocate(N, shares)
    ts, ss, zs = [], [], []
    for (ti, si), m in zip(_CELLS, sizes):
        ones = int(round(rates[(ti, si)] * m))
        ts.append(np.full(m, ti))
        ss.append(np.full(m, si))
        zs.append(np.r_[np.ones(ones), np.zeros(m - ones)])
    return (np.concatenate(ts).astype(np.uint8), np.concatenate(ss).astype(np.uint8),
            np.concatenate(zs).astype(np.uint8))


@dataclass(frozen=True)
class PowerRow:
    N: int
    treated: float
    subgroup: float
    se_beta3: float
    mde: float


def simulate_mde(
    N: int,
    treated: float = 0.526,
    subgroup: float = 0.47,
    base_rate: float = DEFAULT_BASE_RATE,
    cfg: PowerConfig = PowerConfig(),
    seed: int | None = None,
) -> PowerRow:
    t, s, z = synthetic_power_sample(N, treated, subgroup, base_rate, 0.0, seed)
    fit = fit_lpm(t, s, z)
    return PowerRow(N, treated, subgroup, fit.se_beta3, mde(fit.se_beta3, cfg))
