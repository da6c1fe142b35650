"""Mechanistic model functions: published constants, analytic identities,
integration behavior."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chambersim.models import (
    BernoulliParams,
    FanParams,
    ImageModelParams,
    MalusParams,
    PressureParams,
    integrate_fan_speed,
    model_a1_speed,
    model_a2_step,
    model_b1_current,
    model_c1_pressure,
    model_c2_static_pressure,
    model_c3_pressure,
    model_d1_pressure_diff,
    model_e1_intensity,
    model_f_color,
    render_hexagon,
    static_pressure,
)

FAN = FanParams()
PRES = PressureParams()


def test_a1_full_load_speed_constant():
    assert model_a1_speed(1.0) == 314.16


def test_a1_zero_load_fan_off():
    assert model_a1_speed(0.0) == 0.0


def test_a1_minimum_effective_load():
    # any powered load below load_min spins at load_min * omega_max
    assert model_a1_speed(0.05) == pytest.approx(0.1 * 314.16, rel=0, abs=0)
    assert model_a1_speed(0.1) == model_a1_speed(0.05)


def test_a1_broadcasts():
    out = model_a1_speed(np.array([0.0, 0.5, 1.0]))
    assert out.shape == (3,)
    assert out[0] == 0.0 and out[2] == 314.16


def test_b1_current_endpoints_exact():
    assert model_b1_current(0.0) == 0.166
    assert model_b1_current(1.0) == 0.26


def test_b1_current_cubic_midpoint():
    # current_min + L^3 (current_max - current_min)
    assert model_b1_current(0.5) == pytest.approx(0.166 + 0.125 * 0.094, abs=1e-15)


def test_b1_monotone_in_load():
    loads = np.linspace(0.1, 1.0, 50)
    cur = model_b1_current(loads)
    assert np.all(np.diff(cur) > 0)


def test_a2_equilibrium_at_full_load_matches_a1():
    """The drag constant is chosen so both tiers agree at L=1."""
    w = integrate_fan_speed(0.0, 1.0, 20.0)
    assert w == pytest.approx(model_a1_speed(1.0), rel=1e-6)


def test_a2_partial_load_equilibrium_follows_torque_law():
    # tau ~ L^3 and drag ~ omega^2 put the fixed point at omega_max L^1.5;
    # convergence slows as torque shrinks, so integrate generously
    for load in (0.5, 0.8):
        w = integrate_fan_speed(model_a1_speed(load), load, 80.0)
        assert w == pytest.approx(314.16 * load**1.5, rel=1e-4)


def test_a2_drag_default_closes_the_loop():
    # drag is recomputed so that f(omega_max) = 0 at L=1
    assert FAN.drag == pytest.approx(4.7620733595658315e-08, rel=1e-12)
    assert FAN.torque(1.0) - FAN.drag * FAN.omega_max**2 == pytest.approx(0.0, abs=1e-20)


def test_a2_step_size_invariance():
    """Halving dt by 10x changes the 5 s trajectory by < 1e-6 relative."""
    coarse = integrate_fan_speed(0.0, 1.0, 5.0, dt=1e-3)
    fine = integrate_fan_speed(0.0, 1.0, 5.0, dt=1e-4)
    assert abs(coarse - fine) / fine < 1e-6


def test_a2_speed_never_negative():
    w = model_a2_step(0.5, 0.0, 1.0)  # strong decel from near rest
    assert w >= 0.0


def test_a2_zero_load_decays():
    w = 314.16
    for _ in range(2000):
        w = model_a2_step(w, 0.0, 1e-3)
    assert w < 314.16 * 0.9


def test_c1_symmetric_fans_cancel():
    assert model_c1_pressure(200.0, 200.0) == pytest.approx(PRES.p_ambient, abs=1e-9)


def test_c2_fully_open_zero_pressure():
    assert model_c2_static_pressure(314.16, 1.0) == 0.0


def test_c2_fully_blocked_affinity_law():
    assert model_c2_static_pressure(314.16, 0.0) == pytest.approx(74.82, abs=1e-12)
    assert model_c2_static_pressure(157.08, 0.0) == pytest.approx(74.82 * 0.25, abs=1e-12)


def test_c2_operating_point_identity():
    """At full speed the delivered pressure is S_max (1 - r) for every r."""
    for r in np.arange(0.1, 0.95, 0.1):
        s = model_c2_static_pressure(314.16, float(r))
        want = 74.82 * (1.0 - r)
        assert abs(s - want) / want < 1e-9


@given(
    r=st.floats(min_value=0.01, max_value=0.99),
    frac=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_c2_pressure_nonnegative_and_bounded(r, frac):
    s = static_pressure(frac * 314.16, r)
    assert 0.0 <= s <= 74.82 * (1.0 + 1e-12)


def test_c3_hatch_reduces_pressure():
    """Opening the hatch raises the airflow ratio, dropping downwind pressure."""
    closed = model_c3_pressure(314.16, 0.0, 0.0)
    half = model_c3_pressure(314.16, 0.0, 22.5)
    openp = model_c3_pressure(314.16, 0.0, 45.0)
    assert closed > half > openp


def test_c3_ratio_saturates_at_one():
    # r0 + beta H/45 caps at 1, so very large hatch equals hatch that reaches the cap
    cap_h = 45.0 * (1.0 - PRES.r0) / PRES.beta
    assert model_c3_pressure(300.0, 100.0, cap_h) == model_c3_pressure(300.0, 100.0, 45.0 * 2)


def test_d1_intercept_exact():
    assert model_d1_pressure_diff(0.0) == 7.1


def test_d1_quadratic_in_speed():
    p = BernoulliParams()
    got = model_d1_pressure_diff(314.16)
    want = p.rho / (2 * p.area**2) * p.q_max**2 + p.offset
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(19.783911137448207, rel=1e-12)


def test_e1_parallel_and_crossed_transmission():
    assert model_e1_intensity(0.0, 0.0) == 0.32
    assert model_e1_intensity(90.0, 0.0) == pytest.approx(0.093, abs=1e-15)
    assert model_e1_intensity(45.0, 0.0) == pytest.approx(0.20650000000000002, abs=1e-15)


def test_e1_depends_only_on_angle_difference():
    a = model_e1_intensity(123.0, 61.0)
    b = model_e1_intensity(62.0, 0.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_e1_180_degree_period():
    assert model_e1_intensity(200.0, 0.0) == pytest.approx(model_e1_intensity(20.0, 0.0), rel=1e-12)


def test_f1_is_scalar_malus_attenuation():
    out = model_f_color(np.array([255.0, 0.0, 128.0]), 60.0, 0.0, "F1")
    cos2 = math.cos(math.radians(60.0)) ** 2
    np.testing.assert_allclose(out, cos2 * np.array([1.0, 0.0, 128 / 255]), rtol=1e-12)


def test_f2_reduces_to_f1_under_neutral_settings():
    p = ImageModelParams(white_balance=(1.0, 1.0, 1.0), exposure=1.0)
    rgb = np.array([10.0, 200.0, 90.0])
    np.testing.assert_allclose(
        model_f_color(rgb, 30.0, 10.0, "F2", p),
        model_f_color(rgb, 30.0, 10.0, "F1", p),
        rtol=1e-12,
    )


def test_f3_matches_manual_matrix_product():
    p = ImageModelParams()
    rgb = np.array([200.0, 40.0, 120.0])
    t1, t2 = 25.0, 0.0
    cos2 = math.cos(math.radians(t1 - t2)) ** 2
    pol = np.diag((np.array(p.tp_rgb) - np.array(p.tc_rgb)) * cos2 + np.array(p.tc_rgb))
    want = np.minimum(
        1.0, p.exposure * np.diag(p.white_balance) @ np.asarray(p.sensor_matrix) @ pol @ (rgb / 255)
    )
    np.testing.assert_allclose(model_f_color(rgb, t1, t2, "F3", p), want, rtol=1e-12)


def test_f_models_clip_overexposure():
    p = ImageModelParams(exposure=100.0)
    out = model_f_color(np.array([255.0, 255.0, 255.0]), 0.0, 0.0, "F3", p)
    assert np.all(out <= 1.0)
    assert np.any(out == 1.0)


def test_f_unknown_model_rejected():
    with pytest.raises(ValueError, match="unknown image model"):
        model_f_color(np.zeros(3), fidelity="F9")


def test_hexagon_geometry():
    img = render_hexagon(np.array([1.0, 0.5, 0.0]), 64)
    assert img.shape == (64, 64, 3) and img.dtype == np.uint8
    # black corners, colored center
    assert tuple(img[0, 0]) == (0, 0, 0)
    assert tuple(img[32, 32]) == (255, 128, 0)  # round-half-up of 0.5*255
    # area of a regular hexagon with circumradius 0.4 size
    frac = img.any(axis=2).mean()
    want = (3 * math.sqrt(3) / 2) * 0.4**2
    assert abs(frac - want) < 0.02


def test_hexagon_symmetry():
    img = render_hexagon(np.array([0.2, 0.4, 0.8]), 48)
    np.testing.assert_array_equal(img, img[::-1])        # up-down
    np.testing.assert_array_equal(img, img[:, ::-1])     # left-right


def test_hexagon_input_validation():
    with pytest.raises(ValueError):
        render_hexagon(np.array([1.1, 0.0, 0.0]), 64)
    with pytest.raises(ValueError):
        render_hexagon(np.zeros(3), 8)
