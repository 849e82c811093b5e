import json
import os
import subprocess

import pytest

import hypbayes


def test_preset_round_trip():
    cfg = json.loads(hypbayes.preset("exp1"))
    assert cfg["experiment"] == "exp1"
    assert cfg["chain"]["length"] == 2500
    assert cfg["prior"]["phi"] == 0.15


def test_solve_exp1_shock_position():
    sol = hypbayes.solve("exp1")
    x, w = sol["x"], sol["value"]
    assert len(x) == 128
    left = [v for xi, v in zip(x, w) if xi < 0.4]
    right = [v for xi, v in zip(x, w) if xi > 0.6]
    assert min(left) > 0.99
    assert max(right) < 0.01


def test_solve_exp3_has_three_components():
    sol = hypbayes.solve("exp3", cells=64)
    assert len(sol["rho"]) == len(sol["mom"]) == len(sol["ener"]) == 64


def test_forward_and_errors():
    y = hypbayes.forward("exp1", [0.0, 0.0, 0.0])
    assert y.shape == (5,)
    assert y[3] == pytest.approx(0.5, abs=0.1)
    with pytest.raises(hypbayes.ForwardError):
        hypbayes.forward("exp2", [0.0, -1.0])
    with pytest.raises(hypbayes.ConfigError):
        hypbayes.solve('{"cells": 0}')


def test_w1_matches_brute_force():
    a, b = [0.3, -1.2, 2.0], [1.0, 0.1, -0.4]
    assert hypbayes.w1(a, b) == pytest.approx(hypbayes.w1_brute(a, b), abs=1e-12)
    assert hypbayes.w1([0.0, 1.0, 2.0], [0.5, 1.5, 2.5]) == pytest.approx(0.5)


def test_rate_check():
    r = hypbayes.rate_check("shock", [16, 32, 64, 128])
    assert r["order"] >= 0.49


def test_small_run(tmp_path):
    cfg = json.dumps({"experiment": "exp2", "cells": 32, "chain": {"length": 100, "burn_in": 20, "thinning": 5}})
    r = hypbayes.run_experiment(cfg, str(tmp_path), 2)
    assert r["retained_samples"] == 17
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert set(["experiment", "params", "posterior_mean", "posterior_map", "acceptance_rate",
                "runtime_seconds", "seeds"]) <= set(summary)
    assert summary["params"] == ["delta", "a"]


@pytest.mark.skipif("HYPBAYES_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_reports_field_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"chain": {"burn_in": 99999}}))
    p = subprocess.run([os.environ["HYPBAYES_CLI"], "run", "--config", str(bad), "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert p.returncode != 0
    assert "chain.burn_in" in p.stderr
