from __future__ import annotations

import json
import xml.etree.ElementTree as ET

import pytest

from gossipsim.cli import main


def test_simulate_writes_records_and_summary(tmp_path, capsys):
    out = tmp_path / "records.csv"
    code = main(
        [
            "simulate",
            "--graph", "complete:16",
            "--protocol", "push",
            "--cred", "const:1",
            "--trials", "3",
            "--seed", "5",
            "--out", str(out),
        ]
    )
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["trials"] == 3
    assert summary["fraction_completed"] == 1.0
    assert out.read_text().startswith("trial,round,informed,q_t\n")


def test_simulate_jsonl_and_summary_out(tmp_path, capsys):
    out = tmp_path / "records.jsonl"
    summary_out = tmp_path / "summary.json"
    code = main(
        [
            "simulate",
            "--graph", "cycle:9",
            "--protocol", "push-pull",
            "--cred", "mult:0.1",
            "--trials", "2",
            "--max-rounds", "15",
            "--out", str(out),
            "--format", "jsonl",
            "--summary-out", str(summary_out),
        ]
    )
    assert code == 0
    capsys.readouterr()
    assert len(out.read_text().splitlines()) == 2
    assert json.loads(summary_out.read_text())["config"]["protocol"] == "push-pull"


def test_simulate_deterministic(tmp_path, capsys):
    argv = ["simulate", "--graph", "complete:12", "--protocol", "pull",
            "--cred", "const:0.5", "--trials", "2", "--seed", "9"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_predict_constant(capsys):
    code = main(
        ["predict", "--protocol", "push", "--cred", "const:0.5", "--n", "4096", "--lambda", "0.1"]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["fixed_q_runtime"] == pytest.approx(
        (1 / __import__("math").log(1.5) + 2.0) * __import__("math").log(4096)
    )
    assert len(out["phase_plan"]) == 6
    assert out["family"]["family"] == "constant"
    assert "general_strong_T" in out


def test_predict_from_graph_file(tmp_path, capsys):
    from gossipsim.graphs import generate_random_regular, save_graph

    path = tmp_path / "g.txt"
    save_graph(generate_random_regular(32, 4, seed=0), path)
    code = main(
        ["predict", "--protocol", "pull", "--cred", "power:2", "--n", "32",
         "--graph-file", str(path)]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert 0.0 < out["lambda"] <= 1.0
    assert out["family"]["expectation_bound"] > 1.0


def test_bounds_text_and_csv(capsys):
    code = main(["bounds", "--protocol", "push", "--q", "1", "--phi", "1", "--d", "2"])
    assert code == 0
    text = capsys.readouterr().out
    assert "growth-basic" in text and "shrink" in text

    code = main(
        ["bounds", "--protocol", "push-pull", "--q", "0.5", "--phi", "0.4",
         "--lambda", "0.0001", "--fraction", "0.0003", "--csv"]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "bound,lower,upper,source"
    assert any(line.startswith("growth-spectral-lower") for line in lines)


def test_verify_exit_codes(capsys):
    assert main(["verify", "--scope", "tiny"]) == 0
    capsys.readouterr()
    # the claims scope includes the known-false product inequality, so the
    # suite reports failure
    assert main(["verify", "--scope", "claims"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] predictor_claims/multiplicative_product" in out


def test_sweep_rows(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        [
            "sweep",
            "--graph", "complete:16",
            "--protocol", "push",
            "--cred", "mult:0.1",
            "--trials", "2",
            "--max-rounds", "20",
            "--param", "alpha", "--values", "0.05,0.3",
            "--param", "seed", "--values", "1,2",
            "--out", str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("alpha,seed,n,")
    assert len(lines) == 1 + 4


def test_plot_from_csv(tmp_path):
    records = tmp_path / "records.csv"
    chart = tmp_path / "chart.svg"
    assert main(
        ["simulate", "--graph", "complete:12", "--protocol", "push",
         "--cred", "const:1", "--trials", "2", "--out", str(records)]
    ) == 0
    assert main(
        ["plot", "--in", str(records), "--out", str(chart),
         "--protocol", "push", "--q", "1", "--n", "12"]
    ) == 0
    root = ET.parse(chart).getroot()
    assert root.tag.endswith("svg")


def test_usage_errors_exit_two(capsys):
    assert main(["simulate", "--graph", "torus:9", "--protocol", "push",
                 "--cred", "const:1"]) == 2
    capsys.readouterr()
    assert main(["bounds", "--protocol", "smoke", "--q", "1", "--phi", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--graph", "complete:16"])
    assert exc.value.code == 2
