import csv
import io
import json

import pytest

from sdwave import report as R
from sdwave.cli import main
from sdwave.config import ConfigError, RunConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_symbols_default_passes(capsys):
    code, out, _ = run(capsys, "symbols", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == 1 and isinstance(doc["records"], list)
    assert {r["status"] for r in doc["records"]} == {"pass"}


def test_bad_dimension_exit_2(capsys):
    code, _, err = run(capsys, "symbols", "--dim", "4")
    assert code == 2 and "dimension" in err


@pytest.mark.parametrize("argv", [
    ["rates", "--tmin", "0.5"],
    ["rates", "--tmin", "100", "--tmax", "500"],
    ["rates", "--tpoints", "3"],
    ["rates", "--resolution", "100"],
    ["rates", "--u1", "{\"kind\": \"bump\"}"],
    ["rates", "--dim", "3", "--tmax", "1e6"],
    ["rates", "--config", "/nonexistent.json"],
    ["nonsense"],
])
def test_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_condition_violated_record(capsys):
    code, out, _ = run(capsys, "rates", "--dim", "1", "--gamma", "0.4", "--only", "thm31")
    doc = json.loads(out)
    assert code == 0
    (rec,) = doc["records"]
    assert rec["status"] == "not applicable" and rec["note"] == "condition (3.1) violated"


def test_rates_csv(capsys):
    code, out, _ = run(capsys, "rates", "--dim", "3", "--gamma", "0", "--format", "csv", "--only", "thm31.slope")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "value", "fit_slope", "anchor"]
    assert len(rows) == 8 and all(r[3] == "Thm 3.1 (3.2)" for r in rows[1:])
    assert code in (0, 1)


def test_only_filter(capsys):
    _, out, _ = run(capsys, "report", "--only", "Lemma 6.3")
    doc = json.loads(out)
    assert [r["id"] for r in doc["records"]] == ["lemma63.growth"]


def test_bounds_case_records(capsys):
    _, out, _ = run(capsys, "bounds", "--dim", "1", "--only", "thm34.lower")
    recs = {r["id"]: r for r in json.loads(out)["records"]}
    assert recs["thm34.lower.first-moment"]["measured"]["case"] == "first-moment"
    assert recs["thm34.lower.first-moment"]["measured"]["measured_constant"] > 0
    cfg = recs["thm34.lower.config"]["measured"]
    assert cfg["case"] == "mass-and-displacement"
    assert cfg["delta"] == pytest.approx(4.0)
    assert all(r["status"] == "pass" for r in recs.values())


def test_appendix_n2_record(capsys):
    _, out, _ = run(capsys, "bounds", "--dim", "2", "--only", "Lemma 6.2")
    (rec,) = json.loads(out)["records"]
    lo, hi = rec["measured"]["coefficient_bracket"]
    assert lo <= rec["measured"]["asymptotic_constant"] <= hi and rec["status"] == "pass"


def test_report_deterministic_and_journal(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code_a = main(["report", "--dim", "1", "--gamma", "1", "--out", str(a)])
    code_b = main(["report", "--dim", "1", "--gamma", "1", "--out", str(b), "--workers", "3"])
    assert code_a == code_b
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    for d in (da, db):
        d.pop("timestamp")
        d.pop("timing")
    assert json.dumps(da) == json.dumps(db)
    assert not (tmp_path / "a.json.partial.jsonl").exists()
    anchors = {r["anchor"] for r in da["records"]}
    assert {"Thm 3.1 (3.2)", "Thm 3.4 (3.7)", "Lemma 6.1 (6.1)", "Eq. (5.2)"} <= anchors
    assert all(r["provenance"] in R.PROVENANCE for r in da["records"])


def test_verify_alias(capsys):
    code, out, _ = run(capsys, "verify", "symbols")
    assert code == 0 and len(json.loads(out)["records"]) == 3


def test_config_file(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"dim": 2, "gamma": 1.0, "t_points": 5}))
    code, out, _ = run(capsys, "rates", "--config", str(p), "--only", "thm32.slope")
    doc = json.loads(out)
    assert doc["config"]["dim"] == 2 and doc["config"]["t_points"] == 5
    p.write_text(json.dumps({"dims": 2}))
    assert run(capsys, "rates", "--config", str(p))[0] == 2


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(dim=0)
    with pytest.raises(ConfigError):
        RunConfig(gamma=-1)
    cfg = RunConfig(dim=2, resolution=4e5)
    assert cfg.grid_base == 4e5 and len(cfg.t_grid) == 7


def test_anchor_table_and_records():
    with pytest.raises(KeyError):
        R.Record("unknown.check", "pass", {})
    with pytest.raises(ValueError):
        R.Record("thm31.slope", "maybe", {})
    assert R.Record("thm31.slope", "pass", {"x": float("nan")}).to_json()["measured"]["x"] == "nan"
