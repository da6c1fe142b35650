"""Calibrated sensor layer: ADC path, light counters, tachometers, speaker.

The analog path mirrors the chamber electronics: every measurement takes 8
raw readings, clamps each to the actual reference-voltage rail, quantizes to
10 bits by flooring, and averages the first ``osr`` readings (the remaining
draws are discarded, which keeps measurement time constant). The float mean
of integer counts is what lands in the dataset.

Functions come in two flavors with identical arithmetic: convenience wrappers
that draw from a ``numpy.random.Generator``, and ``*_block`` forms that take
pre-drawn standard-normal deviates so the engine's keyed substreams can feed
them. ``sigma = 0`` paths never consume randomness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .variables import VREF_ACTUAL, Chamber

ADC_MAX = 1023
LIGHT_MAX = 65535
N_READINGS = 8


def vref_actual(chamber: Chamber | str, vref_setting: float) -> float:
    """Actual rail voltage for a configured reference-voltage setting."""
    table = VREF_ACTUAL[Chamber(chamber)]
    try:
        return table[float(vref_setting)]
    except KeyError:
        raise ValueError(
            f"unknown reference-voltage setting {vref_setting!r}; choose from {sorted(table)}"
        ) from None


@dataclass(frozen=True)
class AnalogSensorConfig:
    """One ADC channel: reference setting, oversampling count, noise scale."""

    chamber: Chamber = Chamber.WT
    vref: float = 5.0
    osr: int = 1
    sigma: float = 0.0  # volts, sd of per-reading electrical noise


@dataclass(frozen=True)
class LightSensorConfig:
    """One light counter: total gain and heteroscedastic noise sigma(x) = floor + slope*x."""

    gain: float = 1.0
    noise_floor: float = 0.0  # counts
    noise_slope: float = 0.0


@dataclass(frozen=True)
class AngleSensorConfig:
    """Rotary potentiometer shaft sensor feeding an ADC channel."""

    zero: int = 507  # count at angle 0 with the 5 V reference
    span_deg: float = 720.0
    supply: float = 5.0
    adc: AnalogSensorConfig = AnalogSensorConfig(chamber=Chamber.LT)


def analog_measure_block(true_voltage, cfg: AnalogSensorConfig, gauss=None):
    """Vectorized ADC measurement; ``gauss`` holds (..., 8) standard normals."""
    va = vref_actual(cfg.chamber, cfg.vref)
    v = np.asarray(true_voltage, dtype=float)
    if cfg.sigma > 0.0:
        if gauss is None:
            raise ValueError("noise draws required when sigma > 0")
        readings = v[..., None] + cfg.sigma * np.asarray(gauss, dtype=float)
    else:
        readings = np.broadcast_to(v[..., None], v.shape + (N_READINGS,))
    readings = np.clip(readings, 0.0, va)
    counts = np.floor(readings * (ADC_MAX / va))
    return counts[..., : cfg.osr].mean(axis=-1)


def analog_measure(true_voltage: float, cfg: AnalogSensorConfig,
                   rng: np.random.Generator | None = None) -> float:
    """Single ADC measurement as float counts in [0, 1023]."""
    gauss = None
    if cfg.sigma > 0.0:
        if rng is None:
            raise ValueError("rng required when sigma > 0")
        gauss = rng.standard_normal(N_READINGS)
    return float(analog_measure_block(np.float64(true_voltage), cfg, gauss))


def calibrate_current(counts, vref_setting: float, chamber: Chamber | str = Chamber.WT):
    """Counts -> amperes for the current sensors (2.5 A full scale at 5 V)."""
    va = vref_actual(chamber, vref_setting)
    out = np.asarray(counts, dtype=float) * va / (ADC_MAX * 5.0) * 2.5
    return float(out) if out.ndim == 0 else out


def calibrate_angle(counts, zero: int, vref_setting: float,
                    chamber: Chamber | str = Chamber.LT):
    """Counts -> polarizer angle in degrees (720 degrees across the ADC span)."""
    va = vref_actual(chamber, vref_setting)
    out = (np.asarray(counts, dtype=float) - zero) * (720.0 / ADC_MAX) * (va / 5.0)
    return float(out) if out.ndim == 0 else out


def angle_to_voltage(theta_deg, cfg: AngleSensorConfig):
    """Shaft angle to potentiometer wiper voltage (inverse of the calibration)."""
    t = np.asarray(theta_deg, dtype=float)
    out = cfg.supply * (cfg.zero / ADC_MAX + t / cfg.span_deg)
    return float(out) if out.ndim == 0 else out


def light_measure_block(latent_counts, cfg: LightSensorConfig, gauss=None):
    """Vectorized light-counter measurement: gain, additive noise, clamp, floor."""
    x = cfg.gain * np.asarray(latent_counts, dtype=float)
    if cfg.noise_floor > 0.0 or cfg.noise_slope > 0.0:
        if gauss is None:
            raise ValueError("noise draws required when noise is enabled")
        sigma = cfg.noise_floor + cfg.noise_slope * x
        x = x + sigma * np.asarray(gauss, dtype=float)
    return np.floor(np.clip(x, 0.0, LIGHT_MAX)).astype(np.int64)


def light_measure(latent_counts: float, cfg: LightSensorConfig,
                  rng: np.random.Generator | None = None) -> int:
    gauss = None
    if cfg.noise_floor > 0.0 or cfg.noise_slope > 0.0:
        if rng is None:
            raise ValueError("rng required when noise is enabled")
        gauss = rng.standard_normal()
    return int(light_measure_block(np.float64(latent_counts), cfg, gauss))


def speaker_signal_block(pot_1, pot_2, cfg_1: AnalogSensorConfig, cfg_2: AnalogSensorConfig,
                         bits, gauss_1=None, gauss_2=None):
    """Measured amplitudes after the two potentiometers.

    The source is binary white noise, 0 or 5 V with equal probability; a shared
    per-row sample drives both taps. Amplitudes scale as v1 = 5 A1/255 and
    v2 = v1 A2/255 before each tap's own ADC measurement.
    """
    bits = np.asarray(bits, dtype=float)
    v1 = 5.0 * (np.asarray(pot_1, dtype=float) / 255.0) * bits
    v2 = v1 * (np.asarray(pot_2, dtype=float) / 255.0)
    s1 = analog_measure_block(v1, cfg_1, gauss_1)
    s2 = analog_measure_block(v2, cfg_2, gauss_2)
    return s1, s2


def speaker_signal(pot_1: int, pot_2: int, cfg_1: AnalogSensorConfig,
                   cfg_2: AnalogSensorConfig, rng: np.random.Generator):
    """Single draw of the two signal taps (shared binary sample)."""
    bit = float(rng.integers(0, 2))
    g1 = rng.standard_normal(N_READINGS) if cfg_1.sigma > 0 else None
    g2 = rng.standard_normal(N_READINGS) if cfg_2.sigma > 0 else None
    s1, s2 = speaker_signal_block(
        np.float64(pot_1), np.float64(pot_2), cfg_1, cfg_2, np.float64(bit), g1, g2
    )
    return float(s1), float(s2)


# Tachometer timer tick length per resolution setting: 1 -> microseconds,
# 0 -> milliseconds. rpm is computed as (60 / tick) / n_ticks in steps that
# keep the result an exact float when both operands are exact.
_TICK = {1: 1e-6, 0: 1e-3}
_RPM_NUM = {1: 60e6, 0: 60e3}


def tachometer_block(omega, res_setting: int, jitter: float, gauss=None):
    """Measured fan speed in RPM from angular speed in rad/s.

    The revolution period (with small relative jitter) is quantized to the
    timer resolution; rows where omega is ~0 return nan, the engine substitutes
    the last measured value (a stopped fan emits no tachometer pulses).
    """
    w = np.asarray(omega, dtype=float)
    period = np.where(w > 1e-9, (2.0 * np.pi) / np.where(w > 1e-9, w, 1.0), np.inf)
    if jitter > 0.0:
        if gauss is None:
            raise ValueError("noise draws required when jitter > 0")
        period = period * (1.0 + jitter * np.asarray(gauss, dtype=float))
    tick = _TICK[int(res_setting)]
    n = np.maximum(1.0, np.round(period / tick))
    rpm = _RPM_NUM[int(res_setting)] / n
    return np.where(np.isfinite(period), rpm, np.nan)
