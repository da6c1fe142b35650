"""Simulation parameters and flat key=value config files.

``SimParams`` aggregates the published mechanistic-model constants
(`ModelParams`) with the sensor-noise scales and qualitative-effect constants
the twin needs on top of them. Everything is overridable from a flat UTF-8
config file of ``section.field = value`` lines; defaults equal the published
values where one exists, otherwise they are fit-level choices documented on
the field.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .models import (
    BernoulliParams,
    FanParams,
    ImageModelParams,
    MalusParams,
    ModelParams,
    PressureParams,
)


@dataclass(frozen=True)
class WindAdcParams:
    """ADC voltage-noise scales (standard deviation, volts) for the wind tunnel."""

    current_sigma: float = 0.003
    signal_sigma: float = 0.003
    mic_sigma: float = 0.003
    tach_jitter: float = 0.002  # relative sd of the revolution period


@dataclass(frozen=True)
class MicParams:
    """Microphone level model: baseline + speaker pickup + airflow noise (volts)."""

    base: float = 0.3
    speaker_gain: float = 2.0
    fan_gain: float = 0.8
    hatch_gain: float = 0.5  # hatch shifts how each fan's noise reaches the mic
    # ambient sound-pressure fluctuation per ADC reading, volts; oversampling
    # averages it together with the converter noise
    acoustic_sigma: float = 0.005


@dataclass(frozen=True)
class IntakeParams:
    """Qualitative intake-barometer deviation from ambient (Pa). The published
    material gives no mechanistic model for this sensor; these terms exist so
    the documented load/hatch effects are present with plausible sign and size."""

    in_gain: float = 2.0
    out_gain: float = 1.0
    hatch_gain: float = 0.5


@dataclass(frozen=True)
class CouplingParams:
    """Cross effects between the two fans: the tandem airflow couples their
    speeds (modulated by the hatch opening), and the shared power supply lets
    each load slightly shift the other fan's current draw. Both are on by
    default since the corresponding ground-truth edges exist."""

    speed: float = 0.05
    speed_hatch: float = 0.5  # hatch modulation of the speed coupling
    current: float = 0.05  # shared-supply effect of the other fan's load


@dataclass(frozen=True)
class BarometerParams:
    sigma: float = 0.3  # Pa, per reading
    offset_downwind: float = 0.0
    offset_ambient: float = 0.0
    offset_intake: float = 0.0
    drift_enabled: bool = False
    drift_sigma: float = 0.05  # Pa per sqrt(second) ambient random walk


@dataclass(frozen=True)
class LightSensorParams:
    """Light-sensor chain: spectral weights, position attenuation, LED injection,
    gain ladders and heteroscedastic counting noise sigma(x) = floor + slope*x."""

    w_ir: tuple = (36.0, 22.0, 10.0)
    w_vis: tuple = (12.0, 30.0, 26.0)
    position: tuple = (1.0, 0.85, 0.7)
    led_ir: float = 60.0
    led_vis: float = 45.0
    led_exponent: float = 2.2
    gain_diode_ir: tuple = (0.25, 0.5, 1.0)
    gain_diode_vis: tuple = (0.4, 1.0)
    gain_exposure: tuple = (0.5, 1.0, 2.0, 4.0)
    noise_floor: float = 60.0  # counts
    noise_slope: float = 3e-4


@dataclass(frozen=True)
class LightCurrentParams:
    """Light-source current draw, approximately linear per channel (amps)."""

    base: float = 0.1
    red: float = 0.3
    green: float = 0.3
    blue: float = 0.3
    sigma: float = 0.003  # ADC voltage noise


@dataclass(frozen=True)
class AngleSensorParams:
    zero_1: int = 507  # count at angle 0 for polarizer 1
    zero_2: int = 512
    span_deg: float = 720.0
    supply: float = 5.0
    sigma: float = 0.003  # volts


@dataclass(frozen=True)
class CameraParams:
    image_size: int = 64
    model: str = "F3"  # F1 | F2 | F3
    exposure_base: float = 3.0
    iso_ref: float = 500.0
    shutter_ref: float = 1.0 / 500
    aperture_ref: float = 1.8


@dataclass(frozen=True)
class PidParams:
    kp: float = 0.5
    ki: float = 0.1
    kd: float = 1e-3
    # None locks the target to the first downwind measurement of the run
    target: float | None = None


@dataclass(frozen=True)
class SimParams:
    models: ModelParams = field(default_factory=ModelParams)
    wind: WindAdcParams = field(default_factory=WindAdcParams)
    mic: MicParams = field(default_factory=MicParams)
    intake: IntakeParams = field(default_factory=IntakeParams)
    coupling: CouplingParams = field(default_factory=CouplingParams)
    barometer: BarometerParams = field(default_factory=BarometerParams)
    light: LightSensorParams = field(default_factory=LightSensorParams)
    light_current: LightCurrentParams = field(default_factory=LightCurrentParams)
    angle: AngleSensorParams = field(default_factory=AngleSensorParams)
    camera: CameraParams = field(default_factory=CameraParams)
    pid: PidParams = field(default_factory=PidParams)

    def section(self, name: str):
        if name in _MODEL_SECTIONS:
            return getattr(self.models, _MODEL_SECTIONS[name])
        if name in _TOP_SECTIONS:
            return getattr(self, name)
        raise KeyError(name)

    def with_overrides(self, overrides: dict) -> "SimParams":
        """Return a copy with flat ``section.field`` keys replaced."""
        staged: dict[str, dict] = {}
        for key, value in overrides.items():
            try:
                section, fname = key.split(".", 1)
            except ValueError:
                raise ValueError(f"bad parameter key {key!r}, expected section.field") from None
            staged.setdefault(section, {})[fname] = value
        new_models = self.models
        new_top: dict[str, object] = {}
        for section, fields in staged.items():
            if section in _MODEL_SECTIONS:
                attr = _MODEL_SECTIONS[section]
                obj = getattr(new_models, attr)
                obj = _replace_checked(obj, section, fields)
                new_models = dataclasses.replace(new_models, **{attr: obj})
            elif section in _TOP_SECTIONS:
                obj = getattr(self, section)
                new_top[section] = _replace_checked(obj, section, fields)
            else:
                raise ValueError(f"unknown parameter section {section!r}")
        return dataclasses.replace(self, models=new_models, **new_top)


_MODEL_SECTIONS = {
    "fan": "fan",
    "pressure": "pressure",
    "bernoulli": "bernoulli",
    "malus": "malus",
    "image": "image",
}
_TOP_SECTIONS = (
    "wind", "mic", "intake", "coupling", "barometer",
    "light", "light_current", "angle", "camera", "pid",
)


def _replace_checked(obj, section: str, fields: dict):
    valid = {f.name for f in dataclasses.fields(obj)}
    for fname, value in fields.items():
        if fname not in valid:
            raise ValueError(f"unknown parameter {section}.{fname}")
        old = getattr(obj, fname)
        fields[fname] = _coerce(value, old, f"{section}.{fname}")
    return dataclasses.replace(obj, **fields)


def _coerce(value, old, key: str):
    if isinstance(value, str):
        value = _parse_value(value)
    if old is None or value is None:
        return value
    if isinstance(old, bool):
        if not isinstance(value, (bool, int)):
            raise ValueError(f"{key}: expected a boolean, got {value!r}")
        return bool(value)
    if isinstance(old, int) and not isinstance(old, bool):
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(f"{key}: expected an integer, got {value!r}")
        return int(value)
    if isinstance(old, float):
        return float(value)
    if isinstance(old, tuple):
        seq = value if isinstance(value, (tuple, list)) else (value,)
        return tuple(float(v) for v in seq)
    if isinstance(old, str):
        return str(value)
    return value


def _parse_value(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null"):
        return None
    if "," in text:
        return tuple(float(t) for t in text.split(","))
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse parameter value {text!r}") from None


def parse_params_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` comments and blanks ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_params(path, base: SimParams | None = None) -> SimParams:
    """Build SimParams from a flat config file, overriding the defaults."""
    with open(path, encoding="utf-8") as fh:
        overrides = parse_params_text(fh.read())
    return (base or SimParams()).with_overrides(overrides)


# Named parameter presets. "zeroed-floors" removes signal-independent noise
# floors (used by edge-validation runs that need crisp effects);
# "independent-fans" disconnects the cross-fan couplings, giving the
# idealized chamber where each fan only answers to its own load.
PRESETS: dict[str, dict] = {
    "default": {},
    "zeroed-floors": {
        "light.noise_floor": 0.0,
        "mic.acoustic_sigma": 0.0,
    },
    "independent-fans": {
        "coupling.speed": 0.0,
        "coupling.current": 0.0,
    },
}


def preset(name: str) -> SimParams:
    try:
        overrides = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return SimParams().with_overrides(overrides)
