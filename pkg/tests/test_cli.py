import numpy as np
import pytest

from biaswalk.cli import main
from biaswalk.graph import load_graph


def test_no_command_is_usage_error(capsys):
    assert main([]) == 1


def test_unknown_flag_is_usage_error(capsys):
    assert main(["generate", "--frobnicate"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_required_flag_is_usage_error():
    assert main(["generate", "-n", "100", "-o", "/tmp/x.edges"]) == 1


def test_missing_input_file_is_data_error(capsys):
    assert main(["simulate", "/nonexistent.edges", "-o", "/tmp/x.csv"]) == 2
    assert "error" in capsys.readouterr().err


def test_full_stage_chain(tmp_path, capsys):
    edges = tmp_path / "g.edges"
    assert main(["generate", "-n", "2500", "--theta", "0", "--seed", "3",
                 "-o", str(edges)]) == 0
    shuffled = tmp_path / "s.edges"
    assert main(["shuffle", str(edges), "--seed", "4", "-o",
                 str(shuffled)]) == 0
    comp = tmp_path / "c.edges"
    assert main(["component", str(shuffled), "-o", str(comp)]) == 0
    masses = tmp_path / "m.csv"
    assert main(["simulate", str(comp), "--model", "weighted", "-o",
                 str(masses)]) == 0
    pred = tmp_path / "p.csv"
    assert main(["predict", str(comp), "--model", "weighted", "-o",
                 str(pred)]) == 0
    knncsv = tmp_path / "knn.csv"
    assert main(["knn", str(comp), "--k-max", "none", "-o",
                 str(knncsv)]) == 0
    assert main(["analyze", str(knncsv), "--k-min", "4", "--k-max",
                 "none"]) == 0
    out = capsys.readouterr().out
    assert "converged" in out
    assert "knn slope" in out
    assert "exponent" in out
    g = load_graph(comp)
    assert g.node_count > 0


def test_simulate_reducible_input_is_data_error(tmp_path, capsys):
    p = tmp_path / "two.edges"
    p.write_text("0 1\n2 3\n", encoding="utf-8")
    assert main(["simulate", str(p), "-o", str(tmp_path / "m.csv")]) == 2
    assert "component" in capsys.readouterr().err


def test_simulate_non_convergence_exit_code(tmp_path):
    p = tmp_path / "g.edges"
    assert main(["generate", "-n", "2500", "--theta", "0", "--seed", "3",
                 "-o", str(p)]) == 0
    c = tmp_path / "c.edges"
    assert main(["component", str(p), "-o", str(c)]) == 0
    assert main(["simulate", str(c), "--max-iterations", "2", "-o",
                 str(tmp_path / "m.csv")]) == 3


def test_analyze_malformed_curve_is_data_error(tmp_path, capsys):
    p = tmp_path / "c.csv"
    p.write_text("x,y\n1.0\n", encoding="utf-8")
    assert main(["analyze", str(p)]) == 2
    p2 = tmp_path / "c2.csv"
    p2.write_text("x,y\n1.0,zap\n", encoding="utf-8")
    assert main(["analyze", str(p2)]) == 2


def test_run_and_report_round_trip(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "-n", "2500", "--theta", "0", "--seed", "11",
                 "-o", str(out)]) == 0
    assert (out / "manifest.txt").exists()
    capsys.readouterr()
    assert main(["report", str(out)]) == 0
    table = capsys.readouterr().out
    assert "beta_fitted" in table
    assert "weighted" in table

    # relaunch from the manifest into a fresh directory: same artifacts
    out2 = tmp_path / "run2"
    assert main(["run", "--config", str(out / "manifest.txt"), "-o",
                 str(out2)]) == 0
    a = (out / "xcurve.csv").read_bytes()
    b = (out2 / "xcurve.csv").read_bytes()
    assert a == b


def test_run_requires_a_mixing_knob(capsys):
    assert main(["run", "-n", "2500", "-o", "/tmp/nope"]) == 1
    assert "error" in capsys.readouterr().err


def test_run_gamma_flag_overrides_config_theta(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("nodes = 2500\ntheta = 0.0\nseed = 1\n", encoding="utf-8")
    out = tmp_path / "o"
    # switching the knob to gamma forces a calibration pass at this size
    code = main(["run", "--config", str(cfg), "--gamma", "-0.5",
                 "-o", str(out)])
    assert code == 0
    text = (out / "manifest.txt").read_text(encoding="utf-8")
    assert "result.gamma_target = -0.5" in text
