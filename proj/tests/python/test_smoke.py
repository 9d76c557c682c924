"""Smoke tests for the _tumorlin extension module and the CLI binary."""

import json
import os
import subprocess
import tempfile

import pytest

import _tumorlin as tl


@pytest.fixture(scope="module")
def sol():
    params = tl.KineticParams(n=3, lam=1.0, k_B=3.0, k_D=2.0, k_P=2.0, k_Q=1.0)
    opts = tl.SolverOptions()
    opts.grid_n = 512
    return tl.solve_stationary(params, opts)


def test_kinetics_basics():
    params = tl.KineticParams()
    rates = tl.eval_rates(params, 1.0)
    assert rates.K_D == 0.0 and rates.K_M == params.k_B
    assert abs(tl.alpha_root(params, 1.0) - 1.0) < 1e-14
    fg = tl.eval_fg(params, 1.0, 1.0)
    assert abs(fg.f) < 1e-14 and abs(fg.g - params.k_B) < 1e-14
    rep = tl.check_conditions(params)
    assert rep["satisfies_1_25"]


def test_stationary_state(sol):
    assert sol.R_s > 0
    assert sol.shoot_residual <= 1e-8 * sol.R_s
    assert sol.series.theta > 2.0
    rep = tl.validate_stationary(sol)
    failed = [it["name"] for it in rep["items"] if not it["pass"]]
    assert rep["all_pass"], failed
    # p sits between alpha(c) and 1
    params = tl.KineticParams()
    for i in range(0, len(sol.p), 50):
        assert tl.alpha_root(params, sol.c[i]) - 1e-9 <= sol.p[i] <= 1.0


def test_mode_reduction(sol):
    m1 = tl.assemble_mode(sol, 1, 50.0)
    assert abs(m1.alpha_tilde_k) < 2e-5  # grid-limited at N=512
    m2 = tl.assemble_mode(sol, 2, 500.0)
    assert m2.alpha_tilde_k < 0.0  # stable above the threshold
    assert m2.mu_k < 0.0
    u1 = tl.solve_uk(sol, 1)
    r = sol.r
    for i in range(1, len(r), 64):
        assert abs(u1[i] * r[i] * sol.dc[-1] - sol.R_s * sol.dc[i]) < 1e-10
    tr = tl.translation_mode_residual(sol, 50.0)
    assert tr["res_alpha1"] < 2e-5


def test_evolution_decay(sol):
    dt = tl.cfl_dt(sol, 0.5)
    md = tl.assemble_mode(sol, 2, 500.0)
    traj = tl.evolve_coupled(sol, md, 500.0, [1.0] * len(sol.p), 1.0, 8.0, dt)
    fit = tl.fit_decay(traj, tl.NormChoice.Sup, 4.0, 8.0)
    assert fit.ok and fit.rate < -0.05
    sc = tl.spectral_constants(sol, 6)
    assert sc.kappa0 > 0 and sc.nu0 < 0


def test_harmonics():
    assert tl.eigenvalue_lambda(3, 1) == 2
    assert tl.dimension_d(3, 2) == 5
    assert abs(tl.sphere_area(3) - 4.0 * 3.141592653589793) < 1e-12
    y = tl.real_harmonic(3, 0, 1, [0.0, 0.0, 1.0])
    assert abs(y - (4.0 * 3.141592653589793) ** -0.5) < 1e-14


def test_cli_binary():
    bin_path = os.environ.get("TUMORLIN_BIN")
    if not bin_path:
        pytest.skip("TUMORLIN_BIN not set")
    with tempfile.TemporaryDirectory() as tmp:
        cfg = {
            "n": 3, "lambda": 1.0, "k_B": 3.0, "k_D": 2.0, "k_P": 2.0, "k_Q": 1.0,
            "grid_n": 512, "k_max": 2, "T": 4.0, "trials": 2, "seed": 3,
            "gammas": [500.0], "output_dir": os.path.join(tmp, "out"),
        }
        cfg_path = os.path.join(tmp, "cfg.json")
        with open(cfg_path, "w") as f:
            json.dump(cfg, f)
        res = subprocess.run([bin_path, "stationary", "-c", cfg_path],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        assert res.stdout.startswith("R_s = ")
        assert os.path.exists(os.path.join(tmp, "out", "stationary.csv"))
