import numpy as np
import pandas as pd
import pytest

from expertaudit.errors import MissingColumn, RankDeficient
from expertaudit.hte.design import (apply_concordance, build_advisor_design, build_race_design,
                                    combined_effects, fit_advisor_model, fit_race_model, load_concordance,
                                    modal_advisor, standardize)
from expertaudit.hte.synthetic import synthetic_interactions, synthetic_students

CONCORDANCE = pd.DataFrame({"sat": [400, 800, 1000, 1200, 1400], "act": [9, 15, 19, 25, 31]})


@pytest.fixture(scope="module")
def students():
    return apply_concordance(synthetic_students(3000, seed=5), CONCORDANCE)


def test_advisor_layout(students):
    d = build_advisor_design(students)
    assert d.labels == ("Constant", "Assigned Group", "Advisor 1", "Advisor 2", "Advisor 3",
                        "Gender", "ACT Composite", "EFC", "Hours Other")
    fit = fit_advisor_model(students)
    assert len(fit.table()) == 9
    # advisor indicators only fire for treated students
    assert not d.column("Advisor 1")[d.column("Assigned Group") == 0].any()


def test_treatment_only_advisor_design(students):
    d = build_advisor_design(students, treatment_only=True, reference="1")
    assert "Assigned Group" not in d.labels and "Advisor 1" not in d.labels
    assert d.n == int(students["treatment"].sum())


def test_controls_standardized_indicators_untouched(students):
    d = build_advisor_design(students)
    for lab in ("ACT Composite", "EFC", "Hours Other"):
        col = d.column(lab)
        assert abs(col.mean()) < 1e-12 and col.std() == pytest.approx(1.0)
    assert set(np.unique(d.column("Gender"))) <= {0.0, 1.0}
    assert standardize(pd.Series([3.0, 3.0])).tolist() == [0.0, 0.0]


def test_race_layout_and_exclusions(students):
    d = build_race_design(students)
    assert d.labels == ("Constant", "Assigned Group", "Is_Hispanic", "T x Hispanic", "Is_Asian",
                        "T x Asian", "Is_Black", "T x Black", "Gender", "ACT Composite", "EFC",
                        "Hours Other")
    kept = students["race"].isin(["White", "Hispanic", "Asian", "Black"]).sum()
    assert d.n == kept < len(students)


def test_only_white_is_rank_deficient(students):
    with pytest.raises(RankDeficient):
        build_race_design(students[students["race"] == "White"])


def test_combined_effect_is_sum(students):
    fit = fit_race_model(students)
    for ce in combined_effects(fit):
        assert ce.coef2 == pytest.approx(fit["Assigned Group"] + fit[f"T x {ce.group}"])
        assert ce.coef1 == fit[f"T x {ce.group}"]


def test_recovers_planted_interaction():
    # no SAT-only students, so the fitted model is the generating one
    est = []
    for seed in range(8):
        s = synthetic_students(20000, seed=seed, coef={"t_race:Black": 0.8}, sat_only=0.0)
        fit = fit_race_model(s)
        est.append((fit["Assigned Group"], fit["T x Black"], fit["T x Asian"]))
    mean = np.mean(est, axis=0)
    # per-fit SEs are about 0.05, 0.06 and 0.12; allow 3.5 SE of the 8-fit mean
    assert mean == pytest.approx([0.1, 0.8, 0.0], abs=3.5 * 0.12 / np.sqrt(8))


def test_modal_advisor():
    log = pd.DataFrame({"student_id": ["a"] * 5 + ["b"] * 2,
                        "advisor": ["x", "y", "x", "y", "x", "q", "p"]})
    modal = modal_advisor(log)
    assert modal["a"] == "x"
    assert modal["b"] == "p"  # tie goes to the smallest label


def test_modal_advisor_on_synthetic_log(students):
    log = synthetic_interactions(students, seed=1)
    modal = modal_advisor(log)
    own = students.set_index("student_id")["advisor"]
    agree = np.mean([modal[s] == own[s] for s in modal.index])
    assert agree > 0.95


def test_concordance(tmp_path):
    frame = pd.DataFrame({"act": [np.nan, 22.0, np.nan], "sat": [1210, 1000, 800]})
    out = apply_concordance(frame, CONCORDANCE)
    assert out["act"].tolist() == [25.0, 22.0, 15.0]
    assert frame["act"].isna().sum() == 2  # input untouched
    path = tmp_path / "conc.csv"
    CONCORDANCE.iloc[::-1].to_csv(path, index=False)
    assert load_concordance(path)["sat"].is_monotonic_increasing


def test_missing_column(students):
    with pytest.raises(MissingColumn):
        build_advisor_design(students.drop(columns=["efc"]))
