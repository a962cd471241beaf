"""Heterogeneous-effect regressions, power calculus and action-prediction scoring."""
from .actionpred import ActionAUC, action_auc_grid, auc, compare_action_models
from .design import (
    CombinedEffect,
    apply_concordance,
    build_advisor_design,
    build_race_design,
    combined_effects,
    load_concordance,
    modal_advisor,
)
from .logistic import DesignMatrix, RegressionFit, fit_logistic, log_likelihood, score
from .power import (
    PowerConfig,
    did_beta3,
    fit_lpm,
    mde,
    required_sample_size,
    simulate_mde,
    synthetic_power_sample,
)

__all__ = [
    "ActionAUC", "CombinedEffect", "DesignMatrix", "PowerConfig", "RegressionFit",
    "action_auc_grid", "apply_concordance", "auc", "build_advisor_design", "build_race_design",
    "combined_effects", "compare_action_models", "did_beta3", "fit_logistic", "fit_lpm",
    "load_concordance", "log_likelihood", "mde", "modal_advisor", "required_sample_size",
    "score", "simulate_mde", "synthetic_power_sample",
]
