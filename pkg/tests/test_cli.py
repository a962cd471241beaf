import json
import os
import shutil
import subprocess
import sys
from importlib import resources

import pytest

from expertaudit.cli import main
from expertaudit.hte.synthetic import synthetic_meetings, synthetic_students

DATA = resources.files("expertaudit.data")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def expert_csv(tmp_path):
    p = tmp_path / "expert.csv"
    p.write_bytes(DATA.joinpath("expert_audit.csv").read_bytes())
    return p


def test_scm_audit_m1(capsys):
    code, out, _ = _run(capsys, "scm", "audit", "m1", "--u", "1")
    assert code == 0
    report = json.loads(out)
    v = report["verdict"]
    assert report["impactful"]["witness"] == {"U": 1}
    assert v["expertly_targeted"] is True
    assert v["margins"] == {"effective": 1.0, "targeted": 0.5, "heterogeneous": 0.5}


def test_scm_audit_m2_and_joint(capsys):
    code, out, _ = _run(capsys, "scm", "audit", "m2")
    assert code == 0 and json.loads(out)["verdict"]["reasons"] == ["U absent"]
    code, out, _ = _run(capsys, "scm", "joint", "m1", "--do", "A=1", "--vars", "Y")
    assert code == 0 and "0.75" in out


def test_scm_check_and_sample(capsys, tmp_path):
    assert _run(capsys, "scm", "check", "m1")[0] == 0
    out_file = tmp_path / "s.json"
    assert _run(capsys, "scm", "sample", "m1", "--n", "5", "--seed", "3", "--out", str(out_file))[0] == 0
    assert out_file.exists()


def test_validation_exit_codes(capsys, tmp_path):
    assert _run(capsys, "scm", "audit", "nosuchmodel")[0] == 2
    assert _run(capsys, "scm", "audit", "m1", "--x", "Q=1")[0] == 2
    assert _run(capsys, "ingest", str(tmp_path / "missing.csv"))[0] == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[ingest]\npath = x.csv\n[audit]\nkk = 1\n")
    code, _, err = _run(capsys, "pipeline", str(bad))
    assert code == 2 and "kk" in err


def test_statistical_exit_code(capsys, expert_csv):
    code, _, err = _run(capsys, "match", str(expert_csv), "--pairs", "100000")
    assert code == 3 and "pairs" in err


def test_ingest_match_audit(capsys, expert_csv, tmp_path):
    clean, log = tmp_path / "clean.csv", tmp_path / "log.csv"
    code, out, _ = _run(capsys, "ingest", str(expert_csv), "--clean", str(clean), "--log", str(log))
    summary = json.loads(out)
    assert code == 0 and summary["retained"] + summary["dropped"] == summary["rows"]
    code, out, _ = _run(capsys, "match", str(expert_csv), "--pairs", "50", "--features", "x1")
    assert code == 0 and len(json.loads(out)["pairs"]) == 50
    code, out, _ = _run(capsys, "audit", str(expert_csv), "--features", "x1", "--k", "200",
                        "--seed", "1", "--summary")
    assert code == 0 and "BH corrected p-value" in out


def test_power_commands(capsys):
    code, out, _ = _run(capsys, "power", "mde", "--se", "0.0646", "--decimals", "2")
    assert code == 0 and abs(json.loads(out)["mde"] - 0.180880) < 1e-5
    code, out, _ = _run(capsys, "power", "simulate")
    rows = json.loads(out)["rows"]
    assert [r["N"] for r in rows] == [745, 1000, 7000, 10000]
    code, out, _ = _run(capsys, "power", "samplesize", "--mde", "0.05", "--rss", "140", "--g33", "0.0092")
    assert code == 0 and json.loads(out)["required_n"] > 4


def test_hte_and_actionpred(capsys, tmp_path):
    students = synthetic_students(1500, seed=2, sat_only=0.0)
    sp = tmp_path / "students.csv"
    students.to_csv(sp, index=False)
    code, out, _ = _run(capsys, "hte", "race", str(sp))
    assert code == 0 and "T x Black" in out and "Pseudo R-squared" in out
    code, out, _ = _run(capsys, "hte", "advisor", str(sp), "--json")
    assert code == 0 and len(json.loads(out)["coefficients"]) == 9
    mp = tmp_path / "meetings.csv"
    synthetic_meetings(students.head(200), seed=2).to_csv(mp, index=False)
    code, out, _ = _run(capsys, "actionpred", str(mp), "--actions", "Intervention 2",
                        "--numeric", "act", "efc")
    assert code == 0 and "Intervention 2" in out


def test_simulate_command(capsys):
    code, out, _ = _run(capsys, "simulate", "null", "--replicates", "5", "--k", "50", "--seed", "2")
    assert code == 0 and json.loads(out)["replicates"] == 5


@pytest.mark.skipif(shutil.which("expertise-audit") is None, reason="console script not installed")
def test_console_script_uses_env_config(tmp_path, expert_csv):
    cfg = tmp_path / "run.ini"
    cfg.write_text(f"[ingest]\npath = {expert_csv.name}\nfeatures = x1\n[audit]\nk = 200\nseed = 3\n")
    env = {**os.environ, "EXPERTAUDIT_CONFIG": str(cfg)}
    proc = subprocess.run(["expertise-audit", "pipeline"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert "A_other" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "expertaudit.cli", "scm", "audit", "nope"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
