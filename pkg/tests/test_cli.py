import csv
import io
import json
import math
from pathlib import Path

import pytest

from mdthreshold.cli import run

DATA = Path(__file__).parent / "data"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    assert code == 0, text
    return json.loads(text)


def test_table_golden_file():
    code, text = call("table", "--paper-parity", "--format", "csv")
    assert code == 0
    assert text == (DATA / "table1_parity.csv").read_text()


def test_table_columns():
    rows = call_json("table", "--n-list", "100,100000")
    for r in rows:
        assert r["t_np"] == pytest.approx(1.959964, abs=1e-6)
        assert r["t_ev"] == pytest.approx(math.sqrt(2 * math.log(20)), rel=1e-15)
        assert r["p_at_rs"] == pytest.approx(math.erfc(r["t_rs"] / math.sqrt(2)), rel=1e-12)
    assert rows[0]["t_rs"] < rows[1]["t_rs"]


def test_table_csv_header_and_decimal_point():
    code, text = call("table", "--format", "csv", "--n-list", "1000")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["n", "t_rs", "t_np", "t_ev", "p_at_rs"]
    assert float(rows[0]["t_rs"]) == pytest.approx(2.7128, abs=1e-4)


def test_threshold_table_value():
    out = call_json("threshold", "--n", "1000", "--prior", "cauchy:0,1", "--sigma", "1")
    assert out["t_crit"] == pytest.approx(2.71, abs=0.005)
    assert set(out["terms"]) == {"log_n", "prior_term", "info_term", "odds_term"}


def test_odds_scale_invariance():
    a = call("threshold", "--n", "300", "--odds", "1:1")
    b = call("threshold", "--n", "300", "--odds", "2:2")
    assert a == b


def test_numeric_method_conjugate_root():
    out = call_json("threshold", "--n", "100", "--prior", "gaussian:0,1", "--method", "numeric")
    assert out["t_crit_sq"] == pytest.approx(1.01 * math.log(101), rel=1e-9)


@pytest.mark.parametrize("argv,key,value", [
    (("threshold", "--n", "1000", "--method", "horseshoe"), "t_crit_sq", 3.042466),
    (("threshold", "--n", "100", "--method", "thm2", "--family", "bernoulli:0.5", "--prior", "flat:1"),
     "t_crit_sq", 4.1536),
    (("threshold", "--n", "100", "--method", "rs"), "threshold", 0.2146),
])
def test_threshold_methods(argv, key, value):
    assert call_json(*argv)[key] == pytest.approx(value, abs=1e-4)


def test_rs_nuisance_note(capsys):
    code, _ = call("threshold", "--n", "100", "--method", "rs", "--m", "3")
    assert code == 0
    assert "does not enter" in capsys.readouterr().err


def test_lindley():
    out = call_json("lindley", "--n", "1000", "--t", "1.96")
    assert 5.7 <= out["bf01"] <= 5.9
    assert out["verdict"] == "below boundary"
    assert call_json("lindley", "--n", "5", "--t", "1.96")["verdict"] == "above boundary"


def test_lindley_at_boundary():
    t_crit = call_json("threshold", "--n", "1000")["t_crit"]
    out = call_json("lindley", "--n", "1000", "--t", repr(t_crit))
    assert out["bf01_leading"] == pytest.approx(1.0, rel=1e-12)
    assert out["bf01"] == pytest.approx(1.0, abs=0.05)


def test_risk_curve_csv(tmp_path):
    path = tmp_path / "curve.csv"
    code, _ = call("risk-curve", "--n", "100", "--grid", "0:6:25", "--format", "csv", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "c,alpha,beta,total"
    assert len(lines) == 27 and lines[-1].startswith("# c_star=")
    first = lines[1].split(",")
    assert float(first[1]) == 1.0 and float(first[3]) == 0.5


def test_risk_curve_json():
    out = call_json("risk-curve", "--n", "1000", "--prior", "gaussian:0,1")
    assert out["c_star"] ** 2 == pytest.approx(math.log(1000), abs=0.5)
    assert len(out["rows"]) == 60


def test_tails_deterministic_under_seed():
    argv = ("tails", "--n", "100", "--reps", "20000", "--seed", "7")
    assert call(*argv) == call(*argv)
    assert call_json(*argv)["regime"] == "MODERATE"
    assert call_json(*argv)["mc"] != call_json("tails", "--n", "100", "--reps", "20000", "--seed", "8")["mc"]


def test_seed_from_environment(monkeypatch):
    argv = ("tails", "--n", "100", "--reps", "20000")
    monkeypatch.setenv("MDTHRESHOLD_SEED", "7")
    env_run = call_json(*argv)
    assert env_run["seed"] == 7
    assert env_run == call_json(*argv, "--seed", "7")


def test_chernoff_commands():
    out = call_json("chernoff", "--n", "100", "--delta", "1")
    assert out["d_c"] == pytest.approx(0.125, abs=1e-9)
    assert 1.0 <= out["ratio"] <= 1.1
    out = call_json("chernoff", "--bernoulli", "0.2,0.8")
    assert out["d_c"] == pytest.approx(-math.log(0.8), abs=1e-9)


def test_lab_commands():
    out = call_json("lab", "bic", "--n-list", "100,1000,10000")
    assert [r["n"] for r in out] == [100, 1000, 10000]
    out = call_json("lab", "dawid", "--n", "100", "--reps", "500", "--seed", "1")
    assert "ks_p" in out and "pass" in out and "statistic_samples" not in out


def test_config_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nn = 1000\nprior = gaussian:0,1\nodds = 1:1\npaper-parity = yes\n")
    from_cfg = call_json("threshold", "--config", str(cfg))
    assert from_cfg["t_crit"] == round(math.sqrt(math.log(1000)), 2)
    overridden = call_json("threshold", "--config", str(cfg), "--prior", "cauchy:0,1")
    assert overridden["t_crit"] == 2.71


def test_config_bad_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n 1000\n")
    assert call("threshold", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize("argv", [
    ("threshold",),
    ("threshold", "--n", "1"),
    ("threshold", "--n", "100", "--prior", "bogus"),
    ("threshold", "--n", "100", "--odds", "1-1"),
    ("table", "--format", "xml"),
    ("nosuchcommand",),
])
def test_usage_errors(argv, capsys):
    code, out = call(*argv)
    assert code == 2 and out == ""
    assert capsys.readouterr().err


def test_numeric_failure_exit_code(capsys):
    code, out = call("threshold", "--n", "100", "--method", "numeric", "--odds", "1e12:1")
    assert code == 3 and out == ""
    assert "numeric failure" in capsys.readouterr().err


@pytest.mark.parametrize("cmd", ["threshold", "table", "risk-curve", "tails", "chernoff", "lindley", "lab"])
def test_common_flags_everywhere(cmd, capsys):
    code, _ = call(cmd, "--help")
    assert code == 0
    help_text = capsys.readouterr().out
    assert "--seed" in help_text and "--format" in help_text
