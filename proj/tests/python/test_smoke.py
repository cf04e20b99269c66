import math

import numpy as np
import pytest

import hadbf


def test_version_and_methods():
    assert hadbf.__version__
    assert hadbf.methods() == ["scb", "dl", "dl_apals", "smf_apals", "ba_apals", "pso_apals", "iba_apals"]


def test_steering_vector():
    a = hadbf.steering_vector(math.radians(30.0), 8)
    expected = np.exp(1j * np.pi * np.arange(8) * 0.5)
    assert np.allclose(a, expected)
    with pytest.raises(ValueError):
        hadbf.steering_vector(2.0, 8)


def test_analog_matrix_structure():
    f = hadbf.AnalogBeamformer.from_angle(0.1, 16, 4)
    m = f.matrix
    assert m.shape == (16, 4)
    assert np.allclose(m.conj().T @ m, np.eye(4))
    assert np.allclose(np.abs(m[:4, 0]), 0.5)
    assert np.allclose(m[4:, 0], 0.0)
    with pytest.raises(ValueError):
        hadbf.AnalogBeamformer.from_angle(0.0, 10, 4)


def test_sinr_against_numpy():
    s = hadbf.reference_scenario(16, 128, 5.0)
    f = hadbf.AnalogBeamformer.from_angle(0.0, 16, 4)
    w = hadbf.DigitalWeights.complex(np.array([1, 1j, -1, 0.5], dtype=complex))
    v, fm = w.vector, f.matrix

    def gain(theta):
        return abs(np.vdot(v, fm.conj().T @ hadbf.steering_vector(theta, 16))) ** 2

    interference = sum(10 ** (p / 10) * gain(t) for t, p in zip(s.theta_interferers, s.snr_interferer_db))
    noise = np.linalg.norm(fm @ v) ** 2
    sinr = 10 ** 0.5 * gain(0.0) / (interference + noise)
    assert hadbf.output_sinr(f, w, s) == pytest.approx(10 * math.log10(sinr), rel=1e-10)
    assert hadbf.cost_function(f, w, s) == pytest.approx(interference, rel=1e-10)


def test_pipeline_nulls_the_jammers():
    s = hadbf.reference_scenario(16, 128, -5.0)
    sol = hadbf.run_pipeline(s, "iba_apals", seed=3)
    assert sol.method == "iba_apals"
    assert abs(sol.optimized_angle) == pytest.approx(1.0367e-4, rel=1e-3)
    assert len(sol.cost_trace) == 100
    assert all(b <= a for a, b in zip(sol.cost_trace, sol.cost_trace[1:]))
    for deg in (-30.0, 60.0):
        assert hadbf.null_depth(sol.analog, sol.digital, math.radians(deg)) <= -30.0
    again = hadbf.run_pipeline(s, "iba_apals", seed=3)
    assert np.array_equal(sol.digital.vector, again.digital.vector)

    digital = hadbf.run_pipeline(s, "dl", seed=3)
    assert digital.optimized_angle is None
    assert digital.analog.n_subarrays == 16


@pytest.mark.parametrize("name", ["pso_optimize", "ba_optimize", "iba_optimize"])
def test_optimizers_accept_python_objectives(name):
    opt = getattr(hadbf, name)
    res = opt(lambda x: (x[0] - 0.3) ** 2 + (x[1] + 0.2) ** 2, [-1.0, -1.0], [1.0, 1.0], 20, 50, 7)
    trace = res["trace"]
    assert len(trace) == 50
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert res["best_cost"] == trace[-1]
    assert all(-1.0 <= x <= 1.0 for x in res["best_position"])
    if name == "pso_optimize":
        assert res["best_cost"] < 1e-6


def test_experiment_and_summary(tmp_path):
    files = hadbf.run_experiment("fig2", str(tmp_path), n_trials=2, seed=1, sweep=[10.0])
    names = {p.rsplit("/", 1)[-1] for p in files}
    assert "fig2_manifest.json" in names
    assert "fig2_iba_apals.csv" in names
    with open(tmp_path / "fig2_iba_apals.csv") as fh:
        header = fh.readline().strip()
    assert header == "x_value,mean_metric,std_metric,n_trials"
    report = hadbf.summarize(str(tmp_path))
    assert report["status"] == "incomplete"
    assert "fig2" in report["figures"]
    assert (tmp_path / "report.md").exists()
