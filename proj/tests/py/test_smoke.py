import math

import pytest

import scldpc


def test_version_present():
    assert scldpc.__version__


def test_degree_distribution_basics():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    assert dd.id() == "x^3:x^6"
    assert dd.design_rate() == pytest.approx(0.5)
    assert dd.lam(0.5) == pytest.approx(0.25)
    assert dd.rho_complement(0.0) == 0.0
    assert dd.rho_complement(1.0) == 1.0


def test_irregular_parse():
    dd = scldpc.DegreeDistribution("0.95 x^3 + 0.05 x^23", "x^8")
    assert abs(dd.L_prime_one() - (0.95 * 3 + 0.05 * 23)) < 1e-12


def test_thresholds():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    assert scldpc.bp_threshold(dd) == pytest.approx(0.42944, abs=5e-4)
    assert scldpc.area_threshold(dd) == pytest.approx(0.48815, abs=5e-4)


def test_scalar_de_and_fixed_points():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    assert scldpc.decodes_to_zero(dd, 0.40)
    assert not scldpc.decodes_to_zero(dd, 0.46)
    fps = scldpc.find_fixed_points(dd, 0.46)
    assert [p["x"] for p in fps][0] == pytest.approx(0.0)
    assert len(fps) == 3


def test_potential_curve_shape():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    curve = scldpc.potential_curve(dd, 0.475, 64)
    assert len(curve) == 64
    xs = [x for x, _ in curve]
    assert xs == sorted(xs)
    assert curve[0][1] == pytest.approx(0.0, abs=1e-15)


def test_measure_speed_smoke():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    r = scldpc.measure_speed(dd, 0, 4, 0.475, 1)
    assert r["mode"] == "single_wave"
    assert r["T_I"] == 13
    assert r["v_I"] == pytest.approx(1.0 / 13.0)


def test_bounds_bracket_speed():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    b = scldpc.bounds(dd, 0.475, 4)
    v = scldpc.measure_speed(dd, 0, 4, 0.475, 20)["v_I"]
    assert b["LB"] <= v <= b["B1"] <= b["B2"]


def test_channel_entropies():
    assert scldpc.bsc_entropy(0.5) == pytest.approx(1.0)
    ch = scldpc.channel_from_entropy("BSC", 0.46)
    assert scldpc.bsc_entropy(ch["param"]) == pytest.approx(0.46, abs=1e-9)
    ch = scldpc.channel_from_entropy("AWGN", 0.46)
    assert scldpc.awgn_entropy(ch["param"]) == pytest.approx(0.46, abs=1e-6)


def test_montecarlo_deterministic():
    dd = scldpc.DegreeDistribution("x^3", "x^6")
    a = scldpc.run_montecarlo(dd, 40, 2, 30, "BEC", 0.40, instances=2, base_seed=7, I=5, max_iters=800)
    b = scldpc.run_montecarlo(dd, 40, 2, 30, "BEC", 0.40, instances=2, base_seed=7, I=5, max_iters=800)
    assert a["per_instance_v"] == b["per_instance_v"]
    assert a["instances"] == 2
    if a["measured"]:
        assert all(v > 0 and math.isfinite(v) for v in a["per_instance_v"])


def test_preset_config_roundtrip_text():
    text = scldpc.preset_config("fig5")
    assert "montecarlo" in text
    assert "mc_n = 5000" in text
