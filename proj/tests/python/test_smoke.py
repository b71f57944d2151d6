import csv
import io
import math

import pytest

import noma_perf as npf


def test_thresholds_and_outage_are_probabilities():
    cfg = npf.reference_scenario1(1)
    rho = npf.db_to_linear(20.0)
    t = npf.scenario1_thresholds(cfg, rho)
    assert t.far_decodable
    assert t.Omega == max(t.epsilon, t.beta)
    for p in (npf.outage_far(cfg, rho), npf.outage_near(cfg, rho)):
        assert 0.0 < p < 1.0


def test_theta2_matches_oracle():
    cfg = npf.reference_scenario1(2)
    rho = npf.db_to_linear(15.0)
    t = npf.scenario1_thresholds(cfg, rho)
    far = npf.far_branch(cfg, rho)
    near = npf.near_branch(cfg, rho)
    assert npf.theta2(far, t.epsilon) == pytest.approx(npf.theta2_oracle(far, t.epsilon), rel=1e-6)
    assert npf.theta2(near, t.Omega) == pytest.approx(npf.theta4_oracle(near, t.Omega), rel=1e-6)


def test_exponential_special_case():
    for x in (0.1, 1.0, 3.0):
        assert npf.gamma_cdf(1, 2.0, x) == pytest.approx(1.0 - math.exp(-x / 2.0), abs=1e-14)


def test_simulation_agrees_with_closed_form():
    cfg = npf.reference_scenario2(1)
    rho = npf.db_to_linear(10.0)
    est = npf.simulate_scenario2(cfg, rho, trials=200_000, seed=3)
    for m, e in enumerate(est, start=1):
        assert abs(e["p_hat"] - npf.outage_user(cfg, rho, m)) <= 4 * e["std_error"] + 1e-9


def test_throughput_ceiling():
    rho = npf.db_to_linear(50.0)
    assert npf.throughput_s2(npf.reference_scenario2(), rho) == pytest.approx(3.2, abs=0.01)
    assert npf.throughput_s1(npf.reference_scenario1(), rho) == pytest.approx(2.5, abs=0.01)


def test_invalid_config_raises():
    cfg = npf.Scenario1Config()
    cfg.a_f = 0.3
    with pytest.raises(ValueError):
        cfg.validate()


def test_sweep_csv_is_deterministic():
    kwargs = dict(scenario="direct", snr_start=0, snr_stop=10, snr_step=5, trials=20_000, seed=9)
    text = npf.sweep_csv(**kwargs)
    assert text == npf.sweep_csv(**kwargs)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 9
    assert rows[0].keys() >= {"snr_db", "p_exact", "p_mc", "mc_stderr", "throughput"}


def test_figure_and_validate():
    assert "fig8" in npf.figure_ids()
    assert npf.figure_csv("fig8").startswith("# figure = fig8")
    ok, report = npf.validate(mu=[1], snr_start=0, snr_stop=10, snr_step=10, trials=0)
    assert ok
    assert report.startswith("rho_db,")
