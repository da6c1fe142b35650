"""Protocol-driven simulation engine for both chambers.

The engine holds the chamber state (manipulable settings, latent fan speeds,
tachometer hold registers, virtual clock, PID bookkeeping) and turns protocol
instructions into measurement rows through the calibrated sensor layer.

Determinism: all randomness flows through keyed substreams (see ``rng``), so
identical (protocol, params, seed) produce byte-identical measurement streams
regardless of how rows are batched internally.

Fidelity levels:

- ``steady_state``: fan speeds follow the algebraic steady-state model, so a
  SET takes full effect at the next measurement.
- ``dynamic``: fan speeds integrate the torque-balance ODE (fixed-step RK4,
  1 ms) across WAITs and between measurement rows.

The wind-tunnel pressure-control configuration runs a PID loop that sets the
fan loads from the measured downwind pressure once per emitted row; its
bookkeeping values are appended as extra dataset columns. Intervening on a
load in that configuration freezes it at the assigned value until released.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from . import sensors
from .models import model_a1_speed, model_b1_current, model_c3_pressure, \
    model_d1_pressure_diff, model_f_color, integrate_fan_speed, render_hexagon
from .params import SimParams
from .protocol import Measure, Protocol, Seed, Set, Wait
from .rng import StreamSet
from .sensors import AnalogSensorConfig, LightSensorConfig
from .variables import Chamber, Config, Kind, MAX_HZ, columns_for, validate_setting, variables_for

CHUNK_ROWS = 65536
CHUNK_ROWS_CAMERA = 1024

_NP_DTYPES = {"float": np.float64, "int": np.int64}

PID_COLUMNS = (
    "pid_target", "pid_kp", "pid_ki", "pid_kd",
    "pid_output", "pid_error", "pid_integral", "pid_derivative",
)


class SimulationError(RuntimeError):
    """Engine reached a non-finite or otherwise invalid state."""


@dataclass
class PidState:
    target: float | None = None
    integral: float = 0.0
    prev_error: float = 0.0
    last_output: float = 0.0
    last_error: float = 0.0
    last_derivative: float = 0.0
    stepped: bool = False


def pid_step(pid: PidState, measured: float, kp: float, ki: float, kd: float):
    """One discrete PID update; returns the raw output and both load commands.

    The error integral includes the current error; the derivative is the
    difference to the previous error (0 on the first step). A positive output
    drives the intake fan, a negative one the exhaust fan, both clamped to 1.
    """
    error = pid.target - measured
    pid.integral += error
    derivative = (error - pid.prev_error) if pid.stepped else error
    u = kp * error + ki * pid.integral + kd * derivative
    pid.prev_error = error
    pid.last_output = u
    pid.last_error = error
    pid.last_derivative = derivative
    pid.stepped = True
    load_in = min(1.0, u) if u > 0 else 0.0
    load_out = min(1.0, -u) if u < 0 else 0.0
    return u, load_in, load_out


@dataclass
class ChamberState:
    """Mutable simulation state; see module docstring for the moving parts."""

    values: dict[str, float | int]
    omega_in: float = 0.0
    omega_out: float = 0.0
    last_rpm_in: float = 0.0
    last_rpm_out: float = 0.0
    clock: float = 0.0
    # timestamp lattice anchor: rows emitted since the clock last moved by a
    # WAIT (or the rate changed), so batch boundaries cannot introduce float
    # drift into start_clock + k/hz
    epoch_clock: float = 0.0
    epoch_rows: int = 0
    epoch_hz: float = 0.0
    row_index: int = 0
    pending_intervention: bool = False
    frozen_loads: set[str] = field(default_factory=set)
    sensor_overrides: dict[str, float] = field(default_factory=dict)
    drift: float = 0.0
    last_row_clock: float = 0.0
    pid: PidState = field(default_factory=PidState)


class RowBlock:
    """A contiguous batch of measurement rows in column-major layout."""

    __slots__ = ("columns", "timestamps", "interventions", "data", "n")

    def __init__(self, columns, timestamps, interventions, data):
        self.columns = columns
        self.timestamps = timestamps
        self.interventions = interventions
        self.data = data
        self.n = len(timestamps)

    def rows(self) -> Iterator["MeasurementRow"]:
        for i in range(self.n):
            values = {c: self.data[c][i] for c in self.columns}
            yield MeasurementRow(float(self.timestamps[i]), int(self.interventions[i]), values)


@dataclass(frozen=True)
class MeasurementRow:
    """One measurement: timestamp, intervention flag and every chamber column."""

    timestamp: float
    intervention: int
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    def keys(self):
        return self.values.keys()


class ChamberEngine:
    def __init__(self, config: Config | str, params: SimParams | None = None,
                 seed: int = 0, fidelity: str = "steady_state"):
        if fidelity not in ("steady_state", "dynamic"):
            raise ValueError(f"unknown fidelity {fidelity!r}")
        self.config = Config(config)
        self.chamber = self.config.chamber
        self.params = params or SimParams()
        self.fidelity = fidelity
        self.seed = int(seed)
        self.streams = StreamSet(self.seed)
        self.columns = columns_for(self.config)
        if self.config is Config.WT_PRESSURE_CONTROL:
            self.columns = self.columns + list(PID_COLUMNS)
        defaults = {v.id: v.default for v in variables_for(self.config) if v.manipulable}
        self.state = ChamberState(values=defaults)
        p = self.params.pid
        self.state.pid.target = p.target

    # -- protocol-facing operations ------------------------------------------

    def intervene(self, assignments: dict[str, float],
                  sensor_overrides: dict[str, float] | None = None) -> None:
        """Apply a do-intervention: set manipulable variables (validated against
        their ranges) and optionally pin sensor readings to fixed values.

        In the pressure-control configuration, intervened loads are frozen so
        the PID loop no longer writes them (until ``release``)."""
        for var, value in assignments.items():
            canonical = validate_setting(self.config, var, value)
            self.state.values[var] = canonical
            if self.config is Config.WT_PRESSURE_CONTROL and var in ("load_in", "load_out"):
                self.state.frozen_loads.add(var)
        if sensor_overrides:
            sensor_ids = {v.id for v in variables_for(self.config) if v.kind is Kind.SENSOR}
            for var, value in sensor_overrides.items():
                if var not in sensor_ids:
                    raise ValueError(f"{var!r} is not a sensor; use assignments for it")
                self.state.sensor_overrides[var] = float(value)
        if assignments or sensor_overrides:
            self.state.pending_intervention = True

    def release(self, var: str) -> None:
        self.state.frozen_loads.discard(var)
        self.state.sensor_overrides.pop(var, None)

    def wait(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("wait duration must be nonnegative")
        if self.chamber is Chamber.WT and self.fidelity == "dynamic":
            self._integrate_fans(seconds)
        elif self.chamber is Chamber.WT:
            self._settle_fans()
        self.state.clock += seconds
        self.state.epoch_hz = 0.0  # timestamps restart from the new clock

    def measure_blocks(self, count: int, hz: float) -> Iterator[RowBlock]:
        """Emit ``count`` rows at ``hz``; the clock advances by exactly count/hz."""
        if count < 1:
            raise ValueError("count must be positive")
        limit = MAX_HZ[self.chamber]
        if not 0 < hz <= limit:
            raise ValueError(f"rate {hz} outside (0, {limit}] for chamber {self.chamber.value}")
        s = self.state
        if hz != s.epoch_hz:
            s.epoch_clock = s.clock
            s.epoch_rows = 0
            s.epoch_hz = hz
        start_clock = s.epoch_clock
        base = s.epoch_rows
        chunk = CHUNK_ROWS_CAMERA if self.config is Config.LT_CAMERA else CHUNK_ROWS
        sequential = self.chamber is Chamber.WT and (
            self.fidelity == "dynamic" or self.config is Config.WT_PRESSURE_CONTROL
        )
        done = 0
        while done < count:
            n = min(chunk, count - done)
            if sequential:
                yield self._measure_rows_wt_sequential(start_clock, base + done, n, hz, done)
            elif self.chamber is Chamber.WT:
                self._settle_fans()
                yield self._measure_block_wt(start_clock, base + done, n, hz, done)
            else:
                yield self._measure_block_lt(start_clock, base + done, n, hz, done)
            done += n
        s.epoch_rows = base + count
        s.clock = start_clock + s.epoch_rows / hz
        s.last_row_clock = s.clock

    def measure(self, count: int, hz: float) -> RowBlock:
        blocks = list(self.measure_blocks(count, hz))
        if len(blocks) == 1:
            return blocks[0]
        data = {c: np.concatenate([np.asarray(b.data[c]) for b in blocks]) for c in blocks[0].columns}
        return RowBlock(
            blocks[0].columns,
            np.concatenate([b.timestamps for b in blocks]),
            np.concatenate([b.interventions for b in blocks]),
            data,
        )

    # -- fan dynamics ----------------------------------------------------------

    def _fan_speeds(self) -> tuple[float, float]:
        """Latent fan speeds including the mutual airflow coupling."""
        s, p = self.state, self.params
        w_in, w_out = s.omega_in, s.omega_out
        c = p.coupling.speed
        if c != 0.0:
            wm = p.models.fan.omega_max
            h = float(s.values["hatch"]) / 45.0
            factor = 1.0 - p.coupling.speed_hatch * h
            w_in, w_out = (
                w_in * (1.0 + c * (w_out / wm) * factor),
                w_out * (1.0 + c * (w_in / wm) * factor),
            )
        return w_in, w_out

    def _settle_fans(self) -> None:
        s = self.state
        fan = self.params.models.fan
        s.omega_in = model_a1_speed(float(s.values["load_in"]), fan)
        s.omega_out = model_a1_speed(float(s.values["load_out"]), fan)

    def _integrate_fans(self, seconds: float) -> None:
        s = self.state
        fan = self.params.models.fan
        s.omega_in = integrate_fan_speed(s.omega_in, float(s.values["load_in"]), seconds, 1e-3, fan)
        s.omega_out = integrate_fan_speed(s.omega_out, float(s.values["load_out"]), seconds, 1e-3, fan)

    # -- shared sensor helpers -------------------------------------------------

    def _gauss(self, name: str, row0: int, n: int, per_row: int):
        return self.streams.gaussians(name, row0, n, per_row)

    def _analog(self, name: str, latent, vref_key: str, osr_key: str, sigma: float,
                row0: int, n: int):
        cfg = AnalogSensorConfig(
            chamber=self.chamber,
            vref=float(self.state.values[vref_key]),
            osr=int(self.state.values[osr_key]),
            sigma=sigma,
        )
        gauss = self._gauss(name, row0, n, sensors.N_READINGS) if sigma > 0 else None
        latent = np.broadcast_to(np.asarray(latent, dtype=float), (n,))
        return sensors.analog_measure_block(latent, cfg, gauss)

    def _override(self, name: str, col, n: int):
        if name in self.state.sensor_overrides:
            return np.full(n, self.state.sensor_overrides[name], dtype=float)
        return col

    def _drift_steps(self, row0: int, n: int, timestamps) -> np.ndarray:
        """Ambient random walk sampled at row times (zero when disabled)."""
        b = self.params.barometer
        if not b.drift_enabled:
            return np.zeros(n)
        gauss = self._gauss("ambient_drift", row0, n, 1)[:, 0]
        dts = np.diff(np.concatenate([[self.state.last_row_clock], timestamps]))
        steps = b.drift_sigma * np.sqrt(np.maximum(dts, 0.0)) * gauss
        walk = self.state.drift + np.cumsum(steps)
        self.state.drift = float(walk[-1])
        self.state.last_row_clock = float(timestamps[-1])
        return walk

    def _finite_or_raise(self, name: str, col) -> None:
        if not np.all(np.isfinite(col)):
            raise SimulationError(
                f"non-finite values in column {name!r} at row {self.state.row_index}"
            )

    # -- wind tunnel -----------------------------------------------------------

    def _wt_latents(self):
        """Deterministic per-row latent quantities shared by several sensors."""
        s, p = self.state, self.params
        w_in, w_out = self._fan_speeds()
        fan = p.models.fan
        press = p.models.pressure
        v = s.values
        hatch = float(v["hatch"])
        cmax_min = fan.current_max - fan.current_min
        amps_in = model_b1_current(float(v["load_in"]), fan) + (
            p.coupling.current * (model_b1_current(float(v["load_out"]), fan) - fan.current_min)
        )
        amps_out = model_b1_current(float(v["load_out"]), fan) + (
            p.coupling.current * (model_b1_current(float(v["load_in"]), fan) - fan.current_min)
        )
        p_dw = model_c3_pressure(w_in, w_out, hatch, press) + p.barometer.offset_downwind
        p_up = p_dw + model_d1_pressure_diff(w_in, p.models.bernoulli)
        q_in = (w_in / fan.omega_max) ** 2
        q_out = (w_out / fan.omega_max) ** 2
        hfac = 1.0 - p.intake.hatch_gain * hatch / 45.0
        p_int = (
            press.p_ambient
            + p.barometer.offset_intake
            - (p.intake.in_gain * q_in + p.intake.out_gain * q_out) * hfac
        )
        p_amb = press.p_ambient + p.barometer.offset_ambient
        return w_in, w_out, amps_in, amps_out, p_up, p_dw, p_amb, p_int, q_in, q_out, hatch

    def _measure_block_wt(self, start_clock: float, offset: int, n: int, hz: float,
                          flag_offset: int) -> RowBlock:
        s, p = self.state, self.params
        row0 = s.row_index
        timestamps = start_clock + (np.arange(offset, offset + n) + 1.0) / hz
        (w_in, w_out, amps_in, amps_out, p_up, p_dw, p_amb, p_int,
         q_in, q_out, hatch) = self._wt_latents()
        v = s.values
        data: dict[str, np.ndarray] = {}

        drift = self._drift_steps(row0, n, timestamps)

        data["current_in"] = self._analog(
            "current_in", amps_in * 2.0, "v_in", "osr_in", p.wind.current_sigma, row0, n)
        data["current_out"] = self._analog(
            "current_out", amps_out * 2.0, "v_out", "osr_out", p.wind.current_sigma, row0, n)

        data["rpm_in"] = self._tachometer("rpm_in", w_in, float(v["load_in"]),
                                          int(v["res_in"]), "last_rpm_in", row0, n)
        data["rpm_out"] = self._tachometer("rpm_out", w_out, float(v["load_out"]),
                                           int(v["res_out"]), "last_rpm_out", row0, n)

        for name, latent, osr_key in (
            ("pressure_upwind", p_up, "osr_upwind"),
            ("pressure_downwind", p_dw, "osr_downwind"),
            ("pressure_ambient", p_amb, "osr_ambient"),
            ("pressure_intake", p_int, "osr_intake"),
        ):
            data[name] = self._barometer(name, latent + drift, int(v[osr_key]), row0, n)

        bits = self.streams.bits("speaker", row0, n).astype(float)
        cfg1 = AnalogSensorConfig(self.chamber, float(v["v_1"]), int(v["osr_1"]), p.wind.signal_sigma)
        cfg2 = AnalogSensorConfig(self.chamber, float(v["v_2"]), int(v["osr_2"]), p.wind.signal_sigma)
        g1 = self._gauss("signal_1", row0, n, 8) if cfg1.sigma > 0 else None
        g2 = self._gauss("signal_2", row0, n, 8) if cfg2.sigma > 0 else None
        data["signal_1"], data["signal_2"] = sensors.speaker_signal_block(
            float(v["pot_1"]), float(v["pot_2"]), cfg1, cfg2, bits, g1, g2)

        level = (
            p.mic.base
            + p.mic.speaker_gain * (float(v["pot_1"]) / 255.0) * bits
            + p.mic.fan_gain * (
                q_in * (1.0 - p.mic.hatch_gain * hatch / 45.0)
                + q_out * (1.0 + p.mic.hatch_gain * hatch / 45.0)
            )
        )
        # each ADC reading samples the fluctuating sound pressure, so the
        # acoustic noise averages down with oversampling like converter noise
        mic_sigma = math.hypot(p.wind.mic_sigma, p.mic.acoustic_sigma)
        mic_cfg = AnalogSensorConfig(self.chamber, float(v["v_mic"]), int(v["osr_mic"]), mic_sigma)
        mic_gauss = self._gauss("mic", row0, n, 8) if mic_sigma > 0 else None
        data["mic"] = sensors.analog_measure_block(np.maximum(level, 0.0), mic_cfg, mic_gauss)

        for name in list(data):
            data[name] = self._override(name, data[name], n)
            self._finite_or_raise(name, data[name])

        for var in variables_for(self.config):
            if var.manipulable:
                data[var.id] = np.full(n, v[var.id], dtype=_NP_DTYPES[var.dtype])
        interventions = self._intervention_flags(flag_offset, n)
        s.row_index += n
        return RowBlock(self.columns, timestamps, interventions, data)

    def _tachometer(self, name: str, omega: float, load: float, res: int,
                    hold_attr: str, row0: int, n: int) -> np.ndarray:
        p = self.params
        if load <= 0.0 or omega <= 1e-9:
            return np.full(n, getattr(self.state, hold_attr), dtype=float)
        gauss = self._gauss(name, row0, n, 1)[:, 0] if p.wind.tach_jitter > 0 else None
        col = sensors.tachometer_block(np.full(n, omega), res, p.wind.tach_jitter, gauss)
        setattr(self.state, hold_attr, float(col[-1]))
        return col

    def _barometer(self, name: str, latent, osr: int, row0: int, n: int) -> np.ndarray:
        sigma = self.params.barometer.sigma
        latent = np.broadcast_to(np.asarray(latent, dtype=float), (n,))
        if sigma <= 0:
            return latent.copy()
        gauss = self._gauss(name, row0, n, sensors.N_READINGS)
        readings = latent[:, None] + sigma * gauss
        return readings[:, :osr].mean(axis=1)

    # -- light tunnel ------------------------------------------------------------

    def _lt_latents(self):
        p = self.params
        v = self.state.values
        rgb = np.array([float(v["red"]), float(v["green"]), float(v["blue"])])
        malus = p.models.malus
        cos2 = math.cos(math.radians(float(v["pol_1"]) - float(v["pol_2"]))) ** 2
        trans = (
            1.0,
            (malus.tp + malus.tc) / 2.0,
            (malus.tp - malus.tc) * cos2 + malus.tc,
        )
        lp = p.light

        def led(a: float, setting: float) -> float:
            return a * (math.exp(lp.led_exponent * setting / 255.0) - 1.0)

        latents = {}
        for j in range(3):
            base_ir = lp.position[j] * float(np.dot(lp.w_ir, rgb)) * trans[j]
            base_vis = lp.position[j] * float(np.dot(lp.w_vis, rgb)) * trans[j]
            led_ir = led(lp.led_ir, float(v[f"l_{j+1}1"])) + led(lp.led_ir, float(v[f"l_{j+1}2"]))
            led_vis = led(lp.led_vis, float(v[f"l_{j+1}1"])) + led(lp.led_vis, float(v[f"l_{j+1}2"]))
            latents[f"ir_{j+1}"] = base_ir + led_ir
            latents[f"vis_{j+1}"] = base_vis + led_vis
        lc = p.light_current
        amps = lc.base + (lc.red * rgb[0] + lc.green * rgb[1] + lc.blue * rgb[2]) / 255.0
        return latents, amps, cos2

    def _measure_block_lt(self, start_clock: float, offset: int, n: int, hz: float,
                          flag_offset: int) -> RowBlock:
        s, p = self.state, self.params
        row0 = s.row_index
        timestamps = start_clock + (np.arange(offset, offset + n) + 1.0) / hz
        v = s.values
        latents, amps, _ = self._lt_latents()
        lp = p.light
        data: dict[str, np.ndarray] = {}

        for kind, gains in (("ir", lp.gain_diode_ir), ("vis", lp.gain_diode_vis)):
            for j in (1, 2, 3):
                name = f"{kind}_{j}"
                gain = gains[int(v[f"diode_{kind}_{j}"])] * lp.gain_exposure[int(v[f"t_{kind}_{j}"])]
                cfg = LightSensorConfig(gain=gain, noise_floor=lp.noise_floor,
                                        noise_slope=lp.noise_slope)
                gauss = None
                if cfg.noise_floor > 0 or cfg.noise_slope > 0:
                    gauss = self._gauss(name, row0, n, 1)[:, 0]
                col = sensors.light_measure_block(np.full(n, latents[name]), cfg, gauss)
                data[name] = col.astype(float) if name in s.sensor_overrides else col

        data["current"] = self._analog("current", amps * 2.0, "v_c", "osr_c",
                                       p.light_current.sigma, row0, n)

        ang = p.angle
        for j, zero in ((1, ang.zero_1), (2, ang.zero_2)):
            volts = ang.supply * (zero / sensors.ADC_MAX + float(v[f"pol_{j}"]) / ang.span_deg)
            data[f"angle_{j}"] = self._analog(
                f"angle_{j}", volts, f"v_angle_{j}", f"osr_angle_{j}", ang.sigma, row0, n)

        if self.config is Config.LT_CAMERA:
            raster = self.render_image()
            data["im"] = [raster] * n

        for name in list(data):
            if name == "im":
                continue
            data[name] = self._override(name, data[name], n)
            self._finite_or_raise(name, data[name])

        for var in variables_for(self.config):
            if var.manipulable:
                data[var.id] = np.full(n, v[var.id], dtype=_NP_DTYPES[var.dtype])
        interventions = self._intervention_flags(flag_offset, n)
        s.row_index += n
        return RowBlock(self.columns, timestamps, interventions, data)

    def render_image(self) -> np.ndarray:
        """Current camera frame: hexagonal window of the displayed color."""
        p = self.params
        v = self.state.values
        cam = p.camera
        e = cam.exposure_base
        e *= float(v["iso"]) / cam.iso_ref
        e *= float(v["shutter_speed"]) / cam.shutter_ref
        e *= (cam.aperture_ref / float(v["aperture"])) ** 2
        image_params = replace(p.models.image, exposure=e)
        color = model_f_color(
            (float(v["red"]), float(v["green"]), float(v["blue"])),
            float(v["pol_1"]), float(v["pol_2"]),
            cam.model, image_params,
        )
        return render_hexagon(np.minimum(1.0, color), cam.image_size)

    # -- sequential wind-tunnel path (dynamic fidelity and/or PID) ---------------

    def _measure_rows_wt_sequential(self, start_clock: float, offset: int, n: int,
                                    hz: float, flag_offset: int) -> RowBlock:
        s, p = self.state, self.params
        pid_active = self.config is Config.WT_PRESSURE_CONTROL
        cols: dict[str, list] = {c: [] for c in self.columns}
        timestamps = np.empty(n)
        interventions = np.zeros(n, dtype=np.int64)
        prev_t = s.clock
        for i in range(n):
            t = start_clock + (offset + i + 1.0) / hz
            dt = t - prev_t
            prev_t = t
            if self.fidelity == "dynamic":
                self._integrate_fans(dt)
            else:
                self._settle_fans()
            s.clock = t
            # reuse the vectorized path with n=1 so draws stay bit-identical
            block = self._measure_block_wt(start_clock, offset + i, 1, hz, flag_offset + i)
            for c in self.columns:
                if c in PID_COLUMNS:
                    continue
                cols[c].append(block.data[c][0])
            timestamps[i] = block.timestamps[0]
            interventions[i] = block.interventions[0]
            if pid_active:
                measured_dw = float(block.data["pressure_downwind"][0])
                pid = s.pid
                if pid.target is None:
                    pid.target = measured_dw
                u, load_in, load_out = pid_step(pid, measured_dw, p.pid.kp, p.pid.ki, p.pid.kd)
                if "load_in" not in s.frozen_loads:
                    s.values["load_in"] = load_in
                if "load_out" not in s.frozen_loads:
                    s.values["load_out"] = load_out
                for name, val in zip(PID_COLUMNS, (
                    pid.target, p.pid.kp, p.pid.ki, p.pid.kd,
                    pid.last_output, pid.last_error, pid.integral, pid.last_derivative,
                )):
                    cols[name].append(val)
        data = {c: np.asarray(vals) for c, vals in cols.items()}
        return RowBlock(self.columns, timestamps, interventions, data)

    # -- shared plumbing ---------------------------------------------------------

    def _intervention_flags(self, offset: int, n: int) -> np.ndarray:
        flags = np.zeros(n, dtype=np.int64)
        if self.state.pending_intervention and offset == 0:
            flags[0] = 1
            self.state.pending_intervention = False
        return flags


def run_protocol_blocks(protocol: Protocol, params: SimParams | None = None,
                        fidelity: str = "steady_state",
                        seed: int | None = None) -> Iterator[RowBlock]:
    """Execute a protocol and yield measurement rows in column blocks.

    Seed precedence: an explicit SEED instruction wins over the ``seed``
    argument, which defaults to 0.
    """
    root = protocol.seed
    if root is None:
        root = seed if seed is not None else 0
    engine = ChamberEngine(protocol.config, params, root, fidelity)
    for ins in protocol.instructions:
        if isinstance(ins, Seed):
            continue
        if isinstance(ins, Set):
            engine.intervene({ins.variable: ins.value})
        elif isinstance(ins, Wait):
            engine.wait(ins.milliseconds / 1000.0)
        elif isinstance(ins, Measure):
            yield from engine.measure_blocks(ins.count, ins.hz)
        else:
            raise TypeError(f"unknown instruction {ins!r}")


def run_protocol(protocol: Protocol, params: SimParams | None = None,
                 fidelity: str = "steady_state",
                 seed: int | None = None) -> Iterator[MeasurementRow]:
    """Execute a protocol and yield one MeasurementRow per emitted sample."""
    for block in run_protocol_blocks(protocol, params, fidelity, seed):
        yield from block.rows()
