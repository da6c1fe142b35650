"""Variable registry for the two chambers.

Every chamber variable (actuators, sensor parameters, sensor readings) is
declared here once, with its value range, storage dtype, default setting and
dataset column order. All other modules (protocol validation, the simulation
engine, dataset IO, the ground-truth graphs) resolve variables through this
registry so column names and orderings cannot drift apart.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence


class Chamber(str, enum.Enum):
    LT = "lt"
    WT = "wt"


class Config(str, enum.Enum):
    """Chamber configurations. Each selects a variable set and a ground-truth graph."""

    LT_STANDARD = "lt_standard"
    LT_CAMERA = "lt_camera"
    WT_STANDARD = "wt_standard"
    WT_PRESSURE_CONTROL = "wt_pressure_control"

    @property
    def chamber(self) -> Chamber:
        return Chamber.LT if self.value.startswith("lt") else Chamber.WT


class Kind(str, enum.Enum):
    ACTUATOR = "actuator"
    SENSOR_PARAMETER = "sensor_parameter"
    SENSOR = "sensor"


# Highest supported measurement rate, per chamber (Hz).
MAX_HZ = {Chamber.LT: 10.0, Chamber.WT: 7.0}


@dataclass(frozen=True)
class Interval:
    """Closed continuous range [lo, hi]; hi may be inf for unbounded sensors."""

    lo: float
    hi: float

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def canonical(self, v: float) -> float:
        return float(v)

    def describe(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    @property
    def extremes(self) -> tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class Stepped:
    """Range lo..hi on a fixed grid of width `step` (step=1 for integer settings)."""

    lo: float
    hi: float
    step: float

    def contains(self, v: float) -> bool:
        if not (self.lo - 1e-9 <= v <= self.hi + 1e-9):
            return False
        k = (v - self.lo) / self.step
        return abs(k - round(k)) < 1e-6

    def canonical(self, v: float):
        k = round((v - self.lo) / self.step)
        out = self.lo + k * self.step
        if self.step == 1 and float(self.lo).is_integer():
            return int(round(out))
        # keep one clean decimal grid value, e.g. -180 + 2250*0.1 -> 45.0
        return round(out, 12)

    def describe(self) -> str:
        return f"{self.lo}:{self.hi}:{self.step}"

    @property
    def extremes(self) -> tuple[float, float]:
        return (self.canonical(self.lo), self.canonical(self.hi))


@dataclass(frozen=True)
class Choice:
    """Finite set of admissible values. SET must match a member exactly (no snapping)."""

    values: tuple

    def contains(self, v: float) -> bool:
        return any(math.isclose(v, w, rel_tol=0, abs_tol=1e-9) for w in self.values)

    def canonical(self, v: float):
        for w in self.values:
            if math.isclose(v, w, rel_tol=0, abs_tol=1e-9):
                return w
        raise ValueError(f"{v} not in {self.values}")

    def describe(self) -> str:
        return "{" + ", ".join(str(w) for w in self.values) + "}"

    @property
    def extremes(self) -> tuple:
        return (self.values[0], self.values[-1])


@dataclass(frozen=True)
class ChamberVariable:
    id: str
    symbol: str
    kind: Kind
    chamber: Chamber
    range: Interval | Stepped | Choice
    dtype: str  # "float" | "int" | "str"
    default: float | int | str | None = None
    camera_only: bool = False

    @property
    def manipulable(self) -> bool:
        return self.kind in (Kind.ACTUATOR, Kind.SENSOR_PARAMETER)


_V = ChamberVariable

_VREF_SET = Choice((1.1, 2.56, 5.0))
_OSR_SET = Choice((1, 2, 4, 8))

# Calibrated actual reference voltages of the ADC ladder, per chamber.
VREF_ACTUAL = {
    Chamber.WT: {1.1: 1.16, 2.56: 2.65, 5.0: 5.0},
    Chamber.LT: {1.1: 1.09, 2.56: 2.55, 5.0: 5.0},
}

APERTURE_VALUES = (
    1.8, 2.0, 2.2, 2.5, 2.8, 3.2, 3.5, 4.0, 4.5, 5.0, 5.6, 6.3,
    6.4, 7.1, 8.0, 9.0, 10.0, 11.0, 13.0, 14.0, 16.0, 18.0, 20.0, 22.0,
)
ISO_VALUES = (
    100, 125, 160, 200, 250, 320, 400, 500, 640, 800, 1000, 1250, 1600, 2000,
    2500, 3200, 4000, 5000, 6400, 8000, 10000, 12800, 16000, 20000, 25600,
    32000, 40000, 51200,
)
SHUTTER_VALUES = tuple(
    1.0 / d
    for d in (200, 250, 320, 400, 500, 640, 800, 1000, 1250, 1600, 2000, 2500, 3200, 4000)
)

# Wind tunnel variables, in dataset column order.
WT_VARIABLES: tuple[ChamberVariable, ...] = (
    _V("load_in", "L_in", Kind.ACTUATOR, Chamber.WT, Interval(0, 1), "float", 0.0),
    _V("load_out", "L_out", Kind.ACTUATOR, Chamber.WT, Interval(0, 1), "float", 0.0),
    _V("current_in", "C̃_in", Kind.SENSOR, Chamber.WT, Interval(0, 1023), "float"),
    _V("current_out", "C̃_out", Kind.SENSOR, Chamber.WT, Interval(0, 1023), "float"),
    _V("rpm_in", "ω̃_in", Kind.SENSOR, Chamber.WT, Interval(0, math.inf), "float"),
    _V("rpm_out", "ω̃_out", Kind.SENSOR, Chamber.WT, Interval(0, math.inf), "float"),
    _V("res_in", "T_in", Kind.SENSOR_PARAMETER, Chamber.WT, Choice((0, 1)), "int", 1),
    _V("res_out", "T_out", Kind.SENSOR_PARAMETER, Chamber.WT, Choice((0, 1)), "int", 1),
    _V("pressure_upwind", "P̃_up", Kind.SENSOR, Chamber.WT, Interval(-math.inf, math.inf), "float"),
    _V("pressure_downwind", "P̃_dw", Kind.SENSOR, Chamber.WT, Interval(-math.inf, math.inf), "float"),
    _V("pressure_ambient", "P̃_amb", Kind.SENSOR, Chamber.WT, Interval(-math.inf, math.inf), "float"),
    _V("pressure_intake", "P̃_int", Kind.SENSOR, Chamber.WT, Interval(-math.inf, math.inf), "float"),
    _V("pot_1", "A_1", Kind.ACTUATOR, Chamber.WT, Stepped(0, 255, 1), "int", 0),
    _V("pot_2", "A_2", Kind.ACTUATOR, Chamber.WT, Stepped(0, 255, 1), "int", 0),
    _V("signal_1", "S̃_1", Kind.SENSOR, Chamber.WT, Interval(0, 1023), "float"),
    _V("signal_2", "S̃_2", Kind.SENSOR, Chamber.WT, Interval(0, 1023), "float"),
    _V("hatch", "H", Kind.ACTUATOR, Chamber.WT, Stepped(0, 45, 0.1), "float", 0.0),
    _V("mic", "M̃", Kind.SENSOR, Chamber.WT, Interval(0, 1023), "float"),
    _V("v_in", "R_in", Kind.SENSOR_PARAMETER, Chamber.WT, _VREF_SET, "float", 5.0),
    _V("v_out", "R_out", Kind.SENSOR_PARAMETER, Chamber.WT, _VREF_SET, "float", 5.0),
    _V("v_1", "R_1", Kind.SENSOR_PARAMETER, Chamber.WT, _VREF_SET, "float", 5.0),
    _V("v_2", "R_2", Kind.SENSOR_PARAMETER, Chamber.WT, _VREF_SET, "float", 5.0),
    _V("v_mic", "R_M", Kind.SENSOR_PARAMETER, Chamber.WT, _VREF_SET, "float", 5.0),
    _V("osr_in", "O_in", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_out", "O_out", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_1", "O_1", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_2", "O_2", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_mic", "O_M", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_upwind", "O_up", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_downwind", "O_dw", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_ambient", "O_amb", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
    _V("osr_intake", "O_int", Kind.SENSOR_PARAMETER, Chamber.WT, _OSR_SET, "int", 1),
)

# Light tunnel variables, in dataset column order. Camera-only variables are
# flagged and excluded from lt_standard.
LT_VARIABLES: tuple[ChamberVariable, ...] = (
    _V("red", "R", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("green", "G", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("blue", "B", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("current", "C̃", Kind.SENSOR, Chamber.LT, Interval(0, 1023), "float"),
    _V("ir_1", "Ĩ_1", Kind.SENSOR, Chamber.LT, Interval(0, 65535), "int"),
    _V("ir_2", "Ĩ_2", Kind.SENSOR, Chamber.LT, Interval(0, 65535), "int"),
    _V("ir_3", "Ĩ_3", Kind.SENSOR, Chamber.LT, Interval(0, 65535), "int"),
    _V("vis_1", "Ṽ_1", Kind.SENSOR, Chamber.LT, Interval(0, 65535), "int"),
    _V("vis_2", "Ṽ_2", Kind.SENSOR, Chamber.LT, Interval(0, 65535), "int"),
    _V("vis_3", "Ṽ_3", Kind.SENSOR, Chamber.LT, Interval(0, 65535), "int"),
    _V("diode_ir_1", "D_1^I", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2)), "int", 2),
    _V("diode_ir_2", "D_2^I", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2)), "int", 2),
    _V("diode_ir_3", "D_3^I", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2)), "int", 2),
    _V("diode_vis_1", "D_1^V", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1)), "int", 1),
    _V("diode_vis_2", "D_2^V", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1)), "int", 1),
    _V("diode_vis_3", "D_3^V", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1)), "int", 1),
    _V("t_ir_1", "T_1^I", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2, 3)), "int", 1),
    _V("t_ir_2", "T_2^I", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2, 3)), "int", 1),
    _V("t_ir_3", "T_3^I", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2, 3)), "int", 1),
    _V("t_vis_1", "T_1^V", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2, 3)), "int", 1),
    _V("t_vis_2", "T_2^V", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2, 3)), "int", 1),
    _V("t_vis_3", "T_3^V", Kind.SENSOR_PARAMETER, Chamber.LT, Choice((0, 1, 2, 3)), "int", 1),
    _V("l_11", "L_11", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("l_12", "L_12", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("l_21", "L_21", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("l_22", "L_22", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("l_31", "L_31", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("l_32", "L_32", Kind.ACTUATOR, Chamber.LT, Stepped(0, 255, 1), "int", 0),
    _V("pol_1", "θ_1", Kind.ACTUATOR, Chamber.LT, Stepped(-180, 180, 0.1), "float", 0.0),
    _V("pol_2", "θ_2", Kind.ACTUATOR, Chamber.LT, Stepped(-180, 180, 0.1), "float", 0.0),
    _V("angle_1", "θ̃_1", Kind.SENSOR, Chamber.LT, Interval(-math.inf, math.inf), "float"),
    _V("angle_2", "θ̃_2", Kind.SENSOR, Chamber.LT, Interval(-math.inf, math.inf), "float"),
    _V("v_c", "R_C", Kind.SENSOR_PARAMETER, Chamber.LT, _VREF_SET, "float", 5.0),
    _V("v_angle_1", "R_1", Kind.SENSOR_PARAMETER, Chamber.LT, _VREF_SET, "float", 5.0),
    _V("v_angle_2", "R_2", Kind.SENSOR_PARAMETER, Chamber.LT, _VREF_SET, "float", 5.0),
    _V("osr_c", "O_C", Kind.SENSOR_PARAMETER, Chamber.LT, _OSR_SET, "int", 1),
    _V("osr_angle_1", "O_1", Kind.SENSOR_PARAMETER, Chamber.LT, _OSR_SET, "int", 1),
    _V("osr_angle_2", "O_2", Kind.SENSOR_PARAMETER, Chamber.LT, _OSR_SET, "int", 1),
    _V("im", "Ĩm", Kind.SENSOR, Chamber.LT, Interval(0, 255), "str", camera_only=True),
    _V("aperture", "Ap", Kind.ACTUATOR, Chamber.LT, Choice(APERTURE_VALUES), "float", 1.8, camera_only=True),
    _V("iso", "ISO", Kind.ACTUATOR, Chamber.LT, Choice(ISO_VALUES), "int", 500, camera_only=True),
    _V("shutter_speed", "T_Im", Kind.ACTUATOR, Chamber.LT, Choice(SHUTTER_VALUES), "float", 1.0 / 500, camera_only=True),
)


def variables_for(config: Config | str) -> tuple[ChamberVariable, ...]:
    """All variables of a configuration, in dataset column order."""
    config = Config(config)
    if config.chamber is Chamber.WT:
        return WT_VARIABLES
    if config is Config.LT_CAMERA:
        return LT_VARIABLES
    return tuple(v for v in LT_VARIABLES if not v.camera_only)


def columns_for(config: Config | str) -> list[str]:
    return [v.id for v in variables_for(config)]


def variable(config: Config | str, var_id: str) -> ChamberVariable:
    for v in variables_for(config):
        if v.id == var_id:
            return v
    raise KeyError(f"unknown variable {var_id!r} for config {Config(config).value}")


def validate_setting(config: Config | str, var_id: str, value: float):
    """Check a SET target and value; return the canonical stored value.

    Raises ValueError with a human-readable reason when the variable is not
    settable or the value is out of range / not an admissible set member.
    """
    try:
        v = variable(config, var_id)
    except KeyError as e:
        raise ValueError(e.args[0]) from None
    if v.kind is Kind.SENSOR:
        raise ValueError(f"cannot SET sensor variable {var_id!r}")
    if not v.range.contains(value):
        raise ValueError(
            f"value {value} for {var_id!r} outside admissible range {v.range.describe()}"
        )
    return v.range.canonical(value)
