import hashlib

import numpy as np
import pytest

from expertaudit.errors import MalformedRow, MissingColumn, ValidationError
from expertaudit.io.demo import demo_frame
from expertaudit.io.ingest import (IngestionPolicy, is_summer, load_audit_csv, load_audit_frame,
                                   write_audit_csv, write_exclusion_log)

HEADER = "student_id,semester,x1,A_other,gpa,transfer_status,hs_gpa,EFC\n"


def _write(tmp_path, body, name="in.csv"):
    p = tmp_path / name
    p.write_text(HEADER + body)
    return p


def test_missing_efc_row_dropped(tmp_path):
    p = _write(tmp_path, "s1,2018-Fa,1,1,3.9,0,3.1,100\n"
                         "s2,2018-Fa,0,0,2.0,0,3.4,\n"
                         "s3,2018-Fa,1,0,3.0,0,2.9,5000\n")
    data, dropped, log = load_audit_csv(p)
    assert len(data) == 2 and dropped == 1
    assert [(e.line, e.id, e.reason) for e in log] == [(3, "s2", "missing:EFC")]
    assert data.ids.tolist() == ["s1", "s3"]


def test_threshold_inclusive(tmp_path):
    p = _write(tmp_path, "s1,2018-Fa,1,1,3.5,0,3.1,1\ns2,2018-Fa,1,1,3.49,0,3.1,1\n")
    data, _, _ = load_audit_csv(p)
    assert data.outcomes.tolist() == [1, 0]


def test_summer_excluded(tmp_path):
    p = _write(tmp_path, "s1,2018-Su,1,1,3.9,0,3.1,1\ns2,2018-Fa,1,1,3.9,0,3.1,1\ns3,Summer 2019,0,0,3,0,3,1\n")
    data, dropped, log = load_audit_csv(p)
    assert len(data) == 1 and {e.reason for e in log} == {"summer"}
    kept, _, _ = load_audit_csv(p, IngestionPolicy(exclude_summer=False))
    assert len(kept) == 3


@pytest.mark.parametrize("label,summer", [("2018-Su", True), ("2018-Summer", True), ("Summer", True),
                                          ("2018-Fa", False), ("2018-Sp", False), ("Sunday", False)])
def test_is_summer(label, summer):
    assert is_summer(label) == summer


def test_malformed_row_reports_line(tmp_path):
    p = _write(tmp_path, "s1,2018-Fa,1,1,3.9,0,3.1,1\ns2,2018-Fa,1,1\n")
    with pytest.raises(MalformedRow) as exc:
        load_audit_csv(p)
    assert exc.value.line == 3 and "line 3" in str(exc.value)
    p = _write(tmp_path, "s1,2018-Fa,abc,1,3.9,0,3.1,1\n")
    with pytest.raises(MalformedRow, match="line 2"):
        load_audit_csv(p)
    p = _write(tmp_path, "s1,2018-Fa,1,2,3.9,0,3.1,1\n")
    with pytest.raises(MalformedRow, match="0 or 1"):
        load_audit_csv(p)


def test_missing_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("student_id,semester,x1,A_other,gpa\ns1,2018-Fa,1,1,3\n")
    with pytest.raises(MissingColumn, match="transfer_status"):
        load_audit_csv(p)


def test_policy_validation():
    with pytest.raises(ValidationError):
        IngestionPolicy(gpa_threshold=5.0)


def test_binary_outcome_policy(tmp_path):
    p = _write(tmp_path, "s1,2018-Fa,1,1,1,0,3.1,1\ns2,2018-Fa,1,1,0,0,3.1,1\n")
    data, _, _ = load_audit_csv(p, IngestionPolicy(gpa_threshold=None))
    assert data.outcomes.tolist() == [1, 0]


def test_demo_file_conservation_and_no_mutation(tmp_path):
    p = tmp_path / "demo.csv"
    write_audit_csv(demo_frame("expert", n=500, seed=3), p)
    before = hashlib.sha256(p.read_bytes()).hexdigest()
    res = load_audit_frame(p)
    assert res.dropped_count + len(res.frame) == res.n_input == 500
    assert hashlib.sha256(p.read_bytes()).hexdigest() == before
    assert sum(res.exclusion_counts().values()) == res.dropped_count
    assert set(res.actions) == {"A_other", "A_schedule", "A_progress"}
    assert res.features == ("x1",)
    assert not res.frame["semester"].str.endswith("Su").any()
    # each dropped row is logged once even when several rules apply
    assert len({e.line for e in res.exclusions}) == res.dropped_count
    log = tmp_path / "log.csv"
    write_exclusion_log(res.exclusions, log)
    assert len(log.read_text().splitlines()) == res.dropped_count + 1


def test_strata_carried(tmp_path):
    p = tmp_path / "demo.csv"
    write_audit_csv(demo_frame("null", n=300, seed=1), p)
    data, _, _ = load_audit_csv(p, action="A_schedule")
    assert data.strata is not None and set(data.strata) <= {"2017-Fa", "2018-Sp", "2018-Fa"}
    assert data.feature_names == ("x1", "x2")
    assert np.isin(data.actions, (0, 1)).all()
