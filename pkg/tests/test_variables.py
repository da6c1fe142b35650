"""Variable registries: column order, ranges, dtypes, setting validation."""

import numpy as np
import pytest

from chambersim.variables import (
    LT_VARIABLES,
    MAX_HZ,
    VREF_ACTUAL,
    WT_VARIABLES,
    Chamber,
    Choice,
    Config,
    Interval,
    Kind,
    Stepped,
    columns_for,
    validate_setting,
    variable,
    variables_for,
)


def test_registry_sizes():
    assert len(WT_VARIABLES) == 32
    assert len(LT_VARIABLES) == 42


def test_wt_column_order_prefix():
    cols = columns_for(Config.WT_STANDARD)
    assert cols[:8] == [
        "load_in", "load_out", "current_in", "current_out",
        "rpm_in", "rpm_out", "res_in", "res_out",
    ]
    assert "hatch" in cols and "mic" in cols


def test_lt_has_camera_only_columns():
    standard = set(columns_for(Config.LT_STANDARD))
    camera = set(columns_for(Config.LT_CAMERA))
    extra = camera - standard
    assert "im" in extra
    for v in LT_VARIABLES:
        assert v.camera_only == (v.id in extra)


def test_configs_share_chamber_registries():
    assert variables_for(Config.WT_STANDARD) == variables_for(Config.WT_PRESSURE_CONTROL)
    assert columns_for("wt_standard") == columns_for("wt_pressure_control")


def test_max_sampling_rates():
    assert MAX_HZ[Chamber.LT] == 10.0
    assert MAX_HZ[Chamber.WT] == 7.0


def test_vref_tables_cover_all_settings():
    for chamber in (Chamber.WT, Chamber.LT):
        assert set(VREF_ACTUAL[chamber]) == {1.1, 2.56, 5.0}


def test_interval_membership():
    iv = Interval(0.0, 1.0)
    assert iv.contains(0.0) and iv.contains(1.0) and iv.contains(0.5)
    assert not iv.contains(-0.01) and not iv.contains(1.01)


def test_stepped_membership_and_canonical():
    st = Stepped(0, 255, 1)
    assert st.contains(128) and st.contains(0) and st.contains(255)
    assert not st.contains(12.5) and not st.contains(256)
    assert st.canonical(128.0) == 128


def test_choice_extremes_are_endpoints():
    ch = Choice((1, 2, 4, 8))
    assert ch.extremes == (1, 8)
    assert ch.contains(4) and not ch.contains(3)


def test_manipulable_covers_actuators_and_sensor_parameters():
    for v in WT_VARIABLES + LT_VARIABLES:
        if v.kind in (Kind.ACTUATOR, Kind.SENSOR_PARAMETER):
            assert v.manipulable
        else:
            assert v.kind is Kind.SENSOR and not v.manipulable


def test_defaults_are_admissible():
    for config in Config:
        for v in variables_for(config):
            if v.manipulable:
                assert v.range.contains(v.default), v.id


def test_sensor_dtypes():
    assert variable("wt_standard", "rpm_in").dtype == "float"
    assert variable("wt_standard", "res_in").dtype == "int"
    assert variable("lt_standard", "ir_1").dtype == "int"
    assert variable("lt_standard", "angle_1").dtype == "float"


def test_light_counters_are_16_bit():
    v = variable("lt_standard", "vis_2")
    assert v.range.contains(0) and v.range.contains(65535)
    assert not v.range.contains(-1) and not v.range.contains(65536)


def test_unknown_variable_lookup():
    with pytest.raises(KeyError, match="unknown variable"):
        variable("wt_standard", "flux_capacitor")


def test_validate_setting_canonicalizes():
    assert validate_setting("wt_standard", "load_in", 0.25) == 0.25
    assert validate_setting("wt_standard", "res_in", 1.0) == 1
    assert isinstance(validate_setting("lt_standard", "red", 128.0), int)


def test_validate_setting_rejects_sensors():
    with pytest.raises(ValueError, match="cannot SET sensor"):
        validate_setting("wt_standard", "rpm_in", 100.0)


def test_validate_setting_rejects_out_of_range():
    with pytest.raises(ValueError, match="outside admissible range"):
        validate_setting("wt_standard", "load_in", 1.5)
    with pytest.raises(ValueError, match="outside admissible range"):
        validate_setting("wt_standard", "osr_1", 3)


def test_validate_setting_reports_unknown_without_quoting_artifacts():
    with pytest.raises(ValueError) as exc:
        validate_setting("wt_standard", "nope", 1.0)
    assert str(exc.value).startswith("unknown variable")


def test_hatch_step_resolution():
    v = variable("wt_standard", "hatch")
    assert v.range.contains(0.1) and v.range.contains(44.9)
    assert not v.range.contains(0.05)


def test_polarizer_range_spans_both_directions():
    v = variable("lt_standard", "pol_1")
    assert v.range.contains(-180.0) and v.range.contains(180.0)


def test_lt_camera_settings_are_tables():
    ap = variable("lt_camera", "aperture")
    iso = variable("lt_camera", "iso")
    sh = variable("lt_camera", "shutter_speed")
    assert isinstance(ap.range, Choice) and 1.8 in ap.range.values
    assert isinstance(iso.range, Choice) and 500.0 in iso.range.values
    assert isinstance(sh.range, Choice)
    assert np.all(np.diff(ap.range.values) != 0)
