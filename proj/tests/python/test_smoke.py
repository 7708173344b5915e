import math
from pathlib import Path

import numpy as np
import pytest

import genfric as gf

ROOT = Path(__file__).resolve().parents[2]


def test_support_single_oscillator():
    h = gf.h_eval(np.array([1.0]))
    assert h.value == pytest.approx(2 / math.pi, abs=1e-12)
    assert h.gradient[0] == pytest.approx(2 / math.pi)
    assert gf.inner_marginal(0.0, 1.0) == pytest.approx(2 / math.pi)
    assert gf.h_eval(np.array([3.0, 4.0])).value == pytest.approx(2.9194867210062347, abs=1e-9)


def test_model_helpers():
    sys = gf.OscillatorSystem([1.0, 3.0])
    assert len(sys) == 2
    np.testing.assert_allclose(gf.drift(sys, np.array([1.0, 0.0, 0.0, 1.0])), [0, -1, 1, 0])
    np.testing.assert_allclose(gf.z_map(gf.OscillatorSystem([1.0, 1.0]), np.array([3.0, 0, 0, 4.0])), [3, 4])
    assert gf.energy(gf.OscillatorSystem([2.0]), np.array([1.0, 1.0])) == pytest.approx(2.5)
    report = gf.detect_resonance(gf.OscillatorSystem([1.0, 2.0]), bound=3)
    assert report.resonant
    assert report.minimal_witnesses()[0] == [2, -1]


def test_dual_norm():
    sys = gf.OscillatorSystem([1.0])
    sol = gf.solve_dual(sys, np.array([1.0, 0.0]))
    assert sol.converged
    assert sol.rho == pytest.approx(math.pi / 2)
    np.testing.assert_allclose(gf.grad_rho(sys, np.array([0.0, -2.0])), [0.0, -math.pi / 2], atol=1e-12)
    two = gf.OscillatorSystem([1.0, 2.0])
    s = np.array([1.0, 0.0, 0.0, 1.0])
    gaps = gf.duality_residuals(two, s, gf.solve_dual(two, s))
    assert max(gaps.values()) < 1e-7
    assert gf.rho(two, s) == pytest.approx(math.pi**2 / 4, rel=1e-9)


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        gf.OscillatorSystem([-1.0])
    with pytest.raises(gf.ValidationError):
        gf.solve_dual(gf.OscillatorSystem([1.0]), np.zeros(2))
    opts = gf.DualOptions()
    opts.tol = 1e-300
    opts.max_iter = 1
    with pytest.raises(gf.NumericalError):
        gf.grad_rho(gf.OscillatorSystem([1.0, 2.0]), np.array([1.0, 0.5, -0.3, 0.7]), opts)


def test_control_and_stages():
    sys = gf.OscillatorSystem([1.0])
    assert gf.control_exact(sys, np.array([0.0, 1.0])) == (-1.0, -1.0)
    assert gf.control_exact(sys, np.array([1.0, 0.0])) == (-1.0, 1.0)
    assert gf.control_regularized(sys, np.array([0.0, 1.0]), gf.ControlLaw(epsilon=1e-3)) == -1.0
    assert gf.stage_select(gf.StagePolicy(), 5.0) == (0.5, False)
    assert gf.stage_select(gf.StagePolicy(), 0.5)[1]


def test_integrate_single_oscillator():
    cfg = gf.SimConfig()
    cfg.t_max = 6.0
    cfg.law = gf.ControlLaw(epsilon=1e-3)
    cfg.stages = gf.StagePolicy(rho_hi=0.2, rho_lo=0.1)
    traj = gf.integrate(gf.OscillatorSystem([1.0]), np.array([0.0, 2.0]), cfg)
    table = traj.table()
    assert table.shape == (len(traj), 8)
    assert np.all(np.diff(table[:, 0]) > 0)
    assert np.all(np.abs(table[:, 3]) <= 1.0)
    assert table[-1, 5] < table[0, 5]
    assert gf.rho_decay_violations(traj, cfg.law) == 0
    # Comes to rest near x = 3 - sqrt(5).
    assert table[-1, 1] == pytest.approx(3 - math.sqrt(5), abs=1e-2)


def test_epsilon_sweep_single_oscillator():
    cfg = gf.SimConfig()
    cfg.t_max = 5.0
    cfg.stages = gf.StagePolicy(rho_hi=0.2, rho_lo=0.1)
    report = gf.epsilon_sweep(gf.OscillatorSystem([1.0]), np.array([0.0, 2.0]), cfg)
    d = report.distances
    assert len(d) == 3 and d[0] > d[1] > d[2]
    assert report.cauchy


def test_run_command(tmp_path):
    code, log, err = gf.run_command("rho-eval", str(ROOT / "configs" / "single.conf"), str(tmp_path))
    assert code == 0, err
    assert (tmp_path / "summary.json").exists()
    bad = tmp_path / "bad.conf"
    bad.write_text("[system]\nomegas = 1\nomegas = 2\n")
    code, _, err = gf.run_command("simulate", str(bad), str(tmp_path))
    assert code == 1
    assert "duplicate" in err
