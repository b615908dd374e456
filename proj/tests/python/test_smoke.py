import math
import os

import numpy as np
import pytest

import vqsim

CONFIGS = os.environ.get("VQSIM_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def small_hybrid(**extra):
    cfg = {
        "scenario": "ising-hybrid",
        "noise": {"eps2": 0.001},
        "integrator": {"dt_exponent": -2, "horizon_over_pi": 0.16, "bootstrap_steps": 1},
    }
    cfg.update(extra)
    return cfg


def test_version():
    assert vqsim.__version__ == "0.1.0"


def test_parse_fills_defaults():
    cfg = vqsim.parse_config(small_hybrid())
    assert cfg["evaluation"] == "noisy"
    assert cfg["noise"]["eps1"] == pytest.approx(1e-4)
    assert cfg["integrator"]["dt"] == pytest.approx(2 * math.pi * 1e-2)


def test_presets_parse():
    names = sorted(f for f in os.listdir(CONFIGS) if f.endswith(".json"))
    assert "ising-hybrid.json" in names
    for name in names:
        vqsim.parse_config(os.path.join(CONFIGS, name))


def test_config_error_names_field():
    with pytest.raises(vqsim.ConfigError, match="noise.eps2"):
        vqsim.parse_config(small_hybrid(noise={"eps2": 2.0}))


def test_trial_columns_and_seed_determinism():
    cfg = small_hybrid(evaluation="shots", shots=1000)
    a = vqsim.run_trial(cfg, trial=0, seed=3)
    b = vqsim.run_trial(cfg, trial=0, seed=3)
    c = vqsim.run_trial(cfg, trial=1, seed=3)
    assert a == b
    assert a["lambda_1"] != c["lambda_1"]
    assert a["t"][0] == 0.0
    assert len(a["t"]) == 9
    assert all(0.0 <= d <= 1.0 for d in a["trace_distance"])


def test_degenerate_start_raises():
    cfg = small_hybrid(evaluation="exact", noise={}, integrator={"dt_exponent": -2, "horizon_over_pi": 0.16, "bootstrap_steps": 0})
    with pytest.raises(vqsim.DegenerateSystemError):
        vqsim.run_trial(cfg)


def test_trace_distance():
    rho = np.diag([1.0, 0.0]).astype(complex)
    sigma = np.eye(2, dtype=complex) / 2
    assert vqsim.trace_distance(rho, sigma) == pytest.approx(0.5)
    assert vqsim.trace_distance(rho, rho) == pytest.approx(0.0)


def test_extrapolate_line():
    intercept, coef = vqsim.extrapolate([1.0, 2.0], [0.9, 0.8], 1)
    assert intercept == pytest.approx(1.0)
    assert coef[1] == pytest.approx(-0.1)


def test_grid_and_cost():
    grid = vqsim.default_trotter_grid()
    assert len(grid) == 17
    assert grid[0] == pytest.approx(2 * math.pi * 10 ** -2.2)
    assert vqsim.cost_estimate(2, 3, 6, 3, 2, 1, 1) == (72, 12, 864)


def test_trotter_scan_small_grid():
    out = vqsim.trotter_scan({
        "scenario": "trotter-scan",
        "noise": {"eps2": 0.001},
        "trotter": {"grid_exponents": [-1.6, -1.4, -1.2], "samples": 50},
    })
    assert set(out) == {"plain", "symmetric"}
    assert len(out["plain"]["dt"]) == 3


def test_run_writes_files(tmp_path):
    files = vqsim.run(small_hybrid(output=str(tmp_path / "run")))
    names = {os.path.basename(f) for f in files}
    assert {"trial_000.csv", "aggregate.csv", "manifest.json"} <= names
