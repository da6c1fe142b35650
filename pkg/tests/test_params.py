"""Simulation parameter bundle: overrides, presets, file loading, coercion."""

import pytest

from chambersim.params import PRESETS, SimParams, load_params, parse_params_text, preset


def test_defaults_construct():
    p = SimParams()
    assert p.models.fan.omega_max == 314.16
    assert p.pid.target is None
    assert p.coupling.speed > 0  # cross-fan effects on by default


def test_with_overrides_nested_sections():
    p = SimParams().with_overrides({"fan.omega_max": 400.0, "mic.base": 0.1})
    assert p.models.fan.omega_max == 400.0
    assert p.mic.base == 0.1
    # untouched sections still share defaults
    assert p.models.pressure.s_max == SimParams().models.pressure.s_max


def test_with_overrides_is_pure():
    base = SimParams()
    base.with_overrides({"barometer.sigma": 9.0})
    assert base.barometer.sigma != 9.0


def test_with_overrides_rejects_unknown():
    with pytest.raises(ValueError, match="unknown parameter section"):
        SimParams().with_overrides({"warp.factor": 9})
    with pytest.raises(ValueError, match="bad parameter key"):
        SimParams().with_overrides({"omega_max": 1.0})
    with pytest.raises(ValueError):
        SimParams().with_overrides({"fan.no_such_field": 1.0})


def test_type_coercion_guards():
    got = SimParams().with_overrides({"barometer.drift_enabled": True})
    assert got.barometer.drift_enabled is True
    with pytest.raises(ValueError, match="expected a boolean"):
        SimParams().with_overrides({"barometer.drift_enabled": 3.5})
    with pytest.raises(ValueError, match="expected an integer"):
        SimParams().with_overrides({"camera.image_size": 64.5})


def test_pid_target_accepts_none_and_float():
    assert SimParams().with_overrides({"pid.target": 101300.0}).pid.target == 101300.0
    assert SimParams().with_overrides({"pid.target": None}).pid.target is None


def test_presets_registered():
    assert set(PRESETS) == {"default", "zeroed-floors", "independent-fans"}
    assert preset("default") == SimParams()


def test_zeroed_floors_preset():
    p = preset("zeroed-floors")
    assert p.light.noise_floor == 0.0
    assert p.mic.acoustic_sigma == 0.0


def test_independent_fans_preset():
    p = preset("independent-fans")
    assert p.coupling.speed == 0.0
    assert p.coupling.current == 0.0


def test_unknown_preset():
    with pytest.raises(ValueError, match="unknown preset"):
        preset("quiet")


def test_parse_params_text_keeps_raw_strings():
    text = """
    # comment
    fan.omega_max = 350
    pid.target = none   # typed conversion happens at load time
    camera.model = F2
    """
    got = parse_params_text(text)
    assert got == {"fan.omega_max": "350", "pid.target": "none", "camera.model": "F2"}


def test_parse_params_rejects_bad_lines():
    with pytest.raises(ValueError, match="line 1: expected 'key = value'"):
        parse_params_text("fan.omega_max\n")


def test_load_params_file(tmp_path):
    f = tmp_path / "p.cfg"
    f.write_text("mic.base = 0.25\nwind.tach_jitter = 0\n")
    p = load_params(f)
    assert p.mic.base == 0.25
    assert p.wind.tach_jitter == 0.0


def test_load_params_on_custom_base(tmp_path):
    f = tmp_path / "p.cfg"
    f.write_text("mic.base = 0.25\n")
    base = preset("zeroed-floors")
    p = load_params(f, base)
    assert p.mic.base == 0.25 and p.light.noise_floor == 0.0
