"""Maximum-likelihood logistic regression by Newton steps with step-halving."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import special, stats

from ..errors import NoConvergence, RankDeficient, SeparationDetected, ValidationError

INTERCEPT = "Constant"
Z_CI = 1.96
GRAD_TOL = 1e-8
MAX_ITER = 100
COEF_LIMIT = 30.0
SATURATION = 1e-10


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    labels: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    roles: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y)
        labels = tuple(self.labels)
        if X.ndim != 2 or X.shape[1] != len(labels):
            raise ValidationError("design matrix width does not match its labels")
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate column labels")
        if labels.count(INTERCEPT) != 1:
            raise ValidationError(f"exactly one {INTERCEPT!r} column is required")
        if not np.all(X[:, labels.index(INTERCEPT)] == 1.0):
            raise ValidationError(f"{INTERCEPT!r} column must be all ones")
        if y.shape != (X.shape[0],):
            raise ValidationError("outcome length does not match the number of rows")
        if not np.isin(y, (0, 1)).all():
            raise ValidationError("outcome must be 0/1")
        if not np.isfinite(X).all():
            raise ValidationError("design matrix contains missing or infinite values")
        for role, cols in self.roles.items():
            missing = set(cols) - set(labels)
            if missing:
                raise ValidationError(f"role {role!r} names unknown columns {sorted(missing)}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y.astype(np.float64))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "roles", {k: tuple(v) for k, v in self.roles.items()})

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def column(self, label: str) -> np.ndarray:
        return self.X[:, self.labels.index(label)]


def log_likelihood(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    eta = X @ beta
    # y*eta - log(1 + e^eta), written to stay finite for large |eta|
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def score(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    return X.T @ (y - special.expit(X @ beta))


def information(beta: np.ndarray, X: np.ndarray) -> np.ndarray:
    mu = special.expit(X @ beta)
    w = mu * (1.0 - mu)
    return (X * w[:, None]).T @ X


@dataclass(frozen=True)
class RegressionFit:
    labels: tuple[str, ...]
    coef: np.ndarray
    cov: np.ndarray
    loglik: float
    loglik_null: float
    n_obs: int
    iterations: int

    @property
    def se(self) -> np.ndarray:
        return np.sqrt(np.diag(self.cov))

    @property
    def z(self) -> np.ndarray:
        return self.coef / self.se

    @property
    def p_values(self) -> np.ndarray:
        return 2.0 * stats.norm.sf(np.abs(self.z))

    @property
    def ci(self) -> np.ndarray:
        half = Z_CI * self.se
        return np.column_stack([self.coef - half, self.coef + half])

    @property
    def pseudo_r2(self) -> float:
        """McFadden: 1 - loglik / loglik of the intercept-only model."""
        return 1.0 - self.loglik / self.loglik_null

    @property
    def llr_p_value(self) -> float:
        df = len(self.coef) - 1
        if df == 0:
            return float("nan")
        return float(stats.chi2.sf(2.0 * (self.loglik - self.loglik_null), df))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def __getitem__(self, label: str) -> float:
        return float(self.coef[self.index(label)])

    def table(self):
        import pandas as pd

        ci = self.ci
        return pd.DataFrame(
            {
                "Coef.": self.coef,
                "Std. Err.": self.se,
                "z-value": self.z,
                "P>|z|": self.p_values,
                "CI low": ci[:, 0],
                "CI high": ci[:, 1],
            },
            index=pd.Index(self.labels, name="Variable"),
        )


def _null_loglik(y: np.ndarray) -> float:
    ybar = y.mean()
    return float(len(y) * (ybar * np.log(ybar) + (1 - ybar) * np.log1p(-ybar)))


def fit_logistic(design: DesignMatrix, max_iter: int = MAX_ITER, tol: float = GRAD_TOL) -> RegressionFit:
    X, y = design.X, design.y
    n, k = X.shape
    if n == 0:
        raise ValidationError("design has no rows")
    if y.min() == y.max():
        raise SeparationDetected("outcome takes a single value; the likelihood has no maximum")
    if np.linalg.matrix_rank(X) < k:
        raise RankDeficient(f"design matrix with {k} columns has rank {np.linalg.matrix_rank(X)}")

    beta = np.zeros(k)
    ybar = y.mean()
    beta[design.labels.index(INTERCEPT)] = np.log(ybar / (1 - ybar))
    ll = log_likelihood(beta, X, y)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = score(beta, X, y)
        if np.max(np.abs(g)) < tol:
            converged = True
            it -= 1
            break
        H = information(beta, X)
        try:
            step = np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, g, rcond=None)[0]
        # near the optimum the predicted gain is below the rounding error of
        # the log-likelihood; take the full Newton step then
        tiny = float(g @ step) < 1e-10 * (1.0 + abs(ll))
        t = 1.0
        while True:
            cand = beta + t * step
            ll_new = log_likelihood(cand, X, y)
            if tiny:
                ll_new = max(ll_new, ll)
            if ll_new >= ll or t < 1e-10:
                break
            t *= 0.5
        if ll_new < ll:
            break  # no ascent direction left; judged below
        beta, ll = cand, ll_new
        if np.max(np.abs(beta)) > COEF_LIMIT:
            break
    else:
        converged = np.max(np.abs(score(beta, X, y))) < tol

    mu = special.expit(X @ beta)
    saturated = np.min(np.minimum(mu, 1 - mu)) < SATURATION
    if np.max(np.abs(beta)) > COEF_LIMIT or saturated:
        raise SeparationDetected(
            "fitted probabilities reach 0 or 1 (complete or quasi-complete separation)"
        )
    if not converged:
        raise NoConvergence(f"gradient did not fall below {tol:g} within {max_iter} iterations")
    cov = np.linalg.inv(information(beta, X))
    cov = (cov + cov.T) / 2
    return RegressionFit(design.labels, beta, cov, ll, _null_loglik(y), n, it)


def combined_effect(fit: RegressionFit, labels: Sequence[str]) -> tuple[float, float, float]:
    """Estimate, SE and two-sided p of the sum of the named coefficients."""
    idx = [fit.index(lab) for lab in labels]
    w = np.zeros(len(fit.coef))
    w[idx] = 1.0
    est = float(w @ fit.coef)
    se = float(np.sqrt(w @ fit.cov @ w))
    p = float(2.0 * stats.norm.sf(abs(est / se)))
    return est, se, p
