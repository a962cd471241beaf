import numpy as np
import pytest
import statsmodels.api as sm

from expertaudit.errors import NoConvergence, RankDeficient, SeparationDetected, ValidationError
from expertaudit.hte.logistic import (INTERCEPT, DesignMatrix, combined_effect, fit_logistic,
                                      information, log_likelihood, score)


def _saturated():
    x = np.r_[np.zeros(20), np.ones(20)]
    y = np.r_[np.ones(10), np.zeros(10), np.ones(15), np.zeros(5)]
    return DesignMatrix((INTERCEPT, "x"), np.column_stack([np.ones(40), x]), y)


def test_saturated_two_by_two():
    fit = fit_logistic(_saturated())
    assert fit.coef[0] == pytest.approx(0.0, abs=1e-6)
    assert fit.coef[1] == pytest.approx(np.log(3), abs=1e-6)
    # closed-form SE of a log-odds difference: sqrt(sum of 1/cell counts)
    assert fit.se[1] == pytest.approx(np.sqrt(1 / 10 + 1 / 10 + 1 / 15 + 1 / 5), rel=1e-8)
    assert fit["x"] == fit.coef[1]
    assert np.allclose(fit.ci[:, 0], fit.coef - 1.96 * fit.se)


def test_separation_and_rank():
    X = np.column_stack([np.ones(6), np.arange(6.0)])
    with pytest.raises(SeparationDetected):
        fit_logistic(DesignMatrix((INTERCEPT, "x"), X, np.zeros(6)))
    with pytest.raises(SeparationDetected):
        fit_logistic(DesignMatrix((INTERCEPT, "x"), X, np.array([0, 0, 0, 1, 1, 1])))
    dup = np.column_stack([np.ones(6), np.arange(6.0), np.arange(6.0)])
    with pytest.raises(RankDeficient):
        fit_logistic(DesignMatrix((INTERCEPT, "x", "x_copy"), dup, np.array([0, 1, 0, 1, 1, 0])))


def test_no_convergence_when_iterations_exhausted():
    rng = np.random.default_rng(0)
    X = np.column_stack([np.ones(200), rng.normal(size=200)])
    y = (rng.random(200) < 0.4).astype(int)
    with pytest.raises(NoConvergence):
        fit_logistic(DesignMatrix((INTERCEPT, "x"), X, y), max_iter=1)


def test_design_validation():
    X = np.column_stack([np.ones(3), np.arange(3.0)])
    with pytest.raises(ValidationError):
        DesignMatrix(("a", "x"), X, np.array([0, 1, 0]))
    with pytest.raises(ValidationError):
        DesignMatrix((INTERCEPT, INTERCEPT), X, np.array([0, 1, 0]))
    with pytest.raises(ValidationError):
        DesignMatrix((INTERCEPT, "x"), X, np.array([0, 2, 0]))
    with pytest.raises(ValidationError):
        DesignMatrix((INTERCEPT, "x"), np.column_stack([np.full(3, 2.0), np.arange(3.0)]), np.array([0, 1, 0]))


def _random_design(rng):
    n = int(rng.integers(80, 400))
    k = int(rng.integers(1, 6))
    Z = rng.normal(size=(n, k))
    beta = rng.normal(scale=0.7, size=k + 1)
    X = np.column_stack([np.ones(n), Z])
    y = (rng.random(n) < 1 / (1 + np.exp(-X @ beta))).astype(int)
    return DesignMatrix((INTERCEPT, *(f"z{i}" for i in range(k))), X, y)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    for _ in range(50):
        d = _random_design(rng)
        fit = fit_logistic(d)
        # gradient is zero at the optimum: compare at a perturbed point too
        for beta in (fit.coef, fit.coef + rng.normal(scale=0.1, size=len(fit.coef))):
            g = score(beta, d.X, d.y)
            h = 1e-5
            fd = np.array([(log_likelihood(beta + h * e, d.X, d.y) - log_likelihood(beta - h * e, d.X, d.y))
                           / (2 * h) for e in np.eye(len(beta))])
            scale = max(1.0, np.max(np.abs(g)))
            assert np.max(np.abs(fd - g)) / scale < 1e-5
        assert np.max(np.abs(score(fit.coef, d.X, d.y))) < 1e-8


def test_covariance_is_inverse_information():
    d = _random_design(np.random.default_rng(2))
    fit = fit_logistic(d)
    assert np.allclose(fit.cov @ information(fit.coef, d.X), np.eye(len(fit.coef)), atol=1e-8)
    assert np.allclose(fit.cov, fit.cov.T)
    assert np.all(np.linalg.eigvalsh(fit.cov) > 0)


def test_matches_statsmodels():
    rng = np.random.default_rng(3)
    for _ in range(10):
        d = _random_design(rng)
        ours = fit_logistic(d)
        ref = sm.Logit(d.y, d.X).fit(disp=0, method="newton", tol=1e-14, maxiter=100)
        assert np.allclose(ours.coef, ref.params, atol=1e-8)
        assert np.allclose(ours.se, ref.bse, rtol=1e-6)
        assert np.allclose(ours.p_values, ref.pvalues, rtol=1e-5, atol=1e-12)
        assert ours.loglik == pytest.approx(ref.llf, abs=1e-8)
        # the null model is closed-form here and iterative in statsmodels
        assert ours.loglik_null >= ref.llnull - 1e-12
        ybar = d.y.mean()
        assert ours.loglik_null == pytest.approx(len(d.y) * (ybar * np.log(ybar) + (1 - ybar) * np.log(1 - ybar)))
        assert ours.pseudo_r2 == pytest.approx(ref.prsquared, abs=1e-8)
        assert ours.llr_p_value == pytest.approx(ref.llr_pvalue, rel=1e-5, abs=1e-300)


def test_likelihood_monotone_over_iterations():
    rng = np.random.default_rng(4)
    for _ in range(10):
        d = _random_design(rng)
        lls = []
        for it in range(1, 30):
            try:
                fit = fit_logistic(d, max_iter=it)
            except NoConvergence:
                continue
            lls.append(fit.loglik)
        # every truncated run that converged reports the same optimum or better
        assert all(b >= a - 1e-9 for a, b in zip(lls, lls[1:]))


def test_combined_effect_variance():
    d = _random_design(np.random.default_rng(5))
    if len(d.labels) < 3:
        d = _random_design(np.random.default_rng(6))
    fit = fit_logistic(d)
    a, b = d.labels[1], d.labels[2]
    est, se, p = combined_effect(fit, (a, b))
    i, j = fit.index(a), fit.index(b)
    assert est == pytest.approx(fit.coef[i] + fit.coef[j])
    assert se == pytest.approx(np.sqrt(fit.cov[i, i] + fit.cov[j, j] + 2 * fit.cov[i, j]))
    assert 0 < p <= 1
