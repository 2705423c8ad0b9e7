import json

from greedylab.cli import main


def test_verify_writes_outputs(tmp_path):
    out, csv_path, svg = tmp_path / "r.json", tmp_path / "r.csv", tmp_path / "r.svg"
    code = main(["verify", "--suite", "m2,s6", "--norm", "lp:2", "--dim", "5", "--m-max", "2",
                 "--tau-grid", "0.5,1", "--trials", "40", "--out", str(out), "--csv", str(csv_path),
                 "--plot", str(svg)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["version"] == "1" and doc["reports"]
    assert len(csv_path.read_text().splitlines()) == len(doc["reports"]) + 1
    assert svg.read_text().lstrip().startswith("<?xml")


def test_verify_wrong_constant_exits_nonzero_and_replays(tmp_path):
    out = tmp_path / "bad.json"
    code = main(["verify", "--suite", "s6", "--norm", "lp:1", "--dim", "5", "--m-max", "1", "--tau-grid", "0.5",
                 "--trials", "50", "--constant", "C_w=0.01", "--out", str(out)])
    assert code == 1
    assert main(["replay", str(out)]) == 1


def test_empty_norm_list_exits_zero(tmp_path):
    out = tmp_path / "e.json"
    assert main(["verify", "--no-norms", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["reports"] == []


def test_counterexample_report(tmp_path):
    rep, svg, wcsv = tmp_path / "c.json", tmp_path / "c.svg", tmp_path / "w.csv"
    assert main(["counterexample", "--blocks", "6", "--trials", "200", "--report", str(rep), "--plot", str(svg),
                 "--weights-csv", str(wcsv), "--weights-limit", "50"]) == 0
    doc = json.loads(rep.read_text())
    assert doc["N"][0] == 11 and len(doc["b"]) == 6
    assert [r["K"] for r in doc["ratios"]] == [3, 4, 5, 6]
    assert doc["uniform_A"]["max_ratio"] <= 2
    assert doc["adversarial_uniform_A"]["max_ratio"] > 0
    assert len(wcsv.read_text().split()) >= 50
