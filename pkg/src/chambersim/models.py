"""Mechanistic models of the chamber physics.

All functions are pure and stateless: outputs depend only on the explicit
arguments, never on module state or hidden RNGs. They accept scalars or numpy
arrays and broadcast like numpy ufuncs. Model identifiers (A1, A2, B1, C1-C3,
D1, E1, F1-F3) are the fidelity tiers used throughout the package and by the
``models`` CLI subcommand:

- A1 / A2: fan speed, steady state / torque-balance dynamics
- B1: fan current draw
- C1 / C2 / C3: downwind static pressure at increasing fidelity
- D1: pitot-style pressure difference between the two tunnel barometers
- E1: light intensity behind a pair of imperfect linear polarizers
- F1 / F2 / F3: image color models for the camera
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FanParams:
    """Physical constants of one tunnel fan and its motor."""

    omega_max: float = 314.16  # rad/s at full load
    load_min: float = 0.1  # smallest effective duty cycle while powered
    current_max: float = 0.26  # A at full load
    current_min: float = 0.166  # no-load current, A
    inertia: float = 3.48e-5  # kg m^2, solid-cylinder approximation
    torque_const: float = 0.05  # Nm/A
    drag_k: float | None = None  # Nm/(rad/s)^2; None = recompute from steady state

    @property
    def drag(self) -> float:
        """Drag constant. By default recomputed as tau(1)/omega_max^2 so that
        the dynamic model's steady state at L=1 equals omega_max exactly."""
        if self.drag_k is not None:
            return self.drag_k
        return self.torque(1.0) / self.omega_max**2

    def torque(self, load) -> float:
        load = np.asarray(load, dtype=float)
        eff = np.maximum(self.load_min, load)
        tau = self.torque_const * eff**3 * (self.current_max - self.current_min)
        out = np.where(load > 0, tau, 0.0)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PressureParams:
    """Static-pressure model constants shared by models C1-C3."""

    s_max: float = 74.82  # Pa, maximum static pressure of one fan
    q_max: float = 0.052  # m^3/s, maximum airflow of one fan
    r0: float = 0.7  # airflow ratio with the hatch closed
    beta: float = 0.15  # linear effect of the hatch on the airflow ratio
    p_ambient: float = 101325.0  # Pa


@dataclass(frozen=True)
class BernoulliParams:
    """Constants of the barometer-pair airspeed relation (model D1)."""

    rho: float = 1.2  # kg/m^3
    area: float = math.pi * 0.06**2  # m^2, fan opening
    offset: float = 7.1  # Pa, manufacturing offset between the barometers
    q_max: float = 0.052
    omega_max: float = 314.16


@dataclass(frozen=True)
class MalusParams:
    """Scalar two-polarizer transmission constants (model E1)."""

    i0: float = 1.0  # incident intensity, raw sensor counts
    tp: float = 0.32  # transmission parallel to the polarization axis
    tc: float = 0.093  # transmission orthogonal to it (imperfect extinction)


@dataclass(frozen=True)
class ImageModelParams:
    """Constants of the camera color models F1-F3."""

    # sensor crosstalk matrix; identity = ideal RGB sensor
    sensor_matrix: tuple = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    # white balance diag(w); must sum to 1
    white_balance: tuple = (1 / 3, 1 / 3, 1 / 3)
    exposure: float = 3.0  # e > 0
    tp_rgb: tuple = (0.29, 0.35, 0.33)  # per-channel parallel transmission
    tc_rgb: tuple = (0.02, 0.08, 0.18)  # per-channel orthogonal transmission


@dataclass(frozen=True)
class ModelParams:
    """Bundle of all mechanistic-model constants with published defaults."""

    fan: FanParams = field(default_factory=FanParams)
    pressure: PressureParams = field(default_factory=PressureParams)
    bernoulli: BernoulliParams = field(default_factory=BernoulliParams)
    malus: MalusParams = field(default_factory=MalusParams)
    image: ImageModelParams = field(default_factory=ImageModelParams)


def model_a1_speed(load, p: FanParams = FanParams()):
    """Steady-state fan speed (rad/s) for a load in [0, 1].

    A powered fan never turns slower than load_min * omega_max; at load 0 the
    fan is off.
    """
    load = np.asarray(load, dtype=float)
    omega = np.maximum(p.load_min, load) * p.omega_max
    out = np.where(load > 0, omega, 0.0)
    return float(out) if out.ndim == 0 else out


def model_a2_step(omega, load, dt: float, p: FanParams = FanParams()):
    """One fixed-step RK4 update of the torque-balance speed dynamics.

    d(omega)/dt = (tau(load) - K omega^2) / I, clamped so speed stays >= 0.
    """
    tau = p.torque(load)
    inv_i = 1.0 / p.inertia
    k = p.drag

    def f(w):
        return inv_i * (tau - k * w * w)

    k1 = f(omega)
    k2 = f(omega + 0.5 * dt * k1)
    k3 = f(omega + 0.5 * dt * k2)
    k4 = f(omega + dt * k3)
    out = omega + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return np.maximum(out, 0.0) if isinstance(out, np.ndarray) else max(out, 0.0)


def integrate_fan_speed(omega0: float, load: float, duration: float,
                        dt: float = 1e-3, p: FanParams = FanParams()) -> float:
    """Integrate model A2 over a duration, final partial step shortened."""
    omega = float(omega0)
    t = 0.0
    while t + dt <= duration + 1e-15:
        omega = model_a2_step(omega, load, dt, p)
        t += dt
    rem = duration - t
    if rem > 1e-12:
        omega = model_a2_step(omega, load, rem, p)
    return omega


def model_b1_current(load, p: FanParams = FanParams()):
    """Fan current draw in amperes as a cubic in the effective load."""
    load = np.asarray(load, dtype=float)
    eff = np.maximum(p.load_min, load)
    cur = p.current_min + eff**3 * (p.current_max - p.current_min)
    out = np.where(load > 0, cur, p.current_min)
    return float(out) if out.ndim == 0 else out


def model_c1_pressure(omega_in, omega_out, p: PressureParams = PressureParams(),
                      omega_max: float = 314.16):
    """Downwind static pressure assuming each fan delivers its affinity-law maximum."""
    fi = np.asarray(omega_in, dtype=float) / omega_max
    fo = np.asarray(omega_out, dtype=float) / omega_max
    out = p.p_ambient + p.s_max * fi**2 - p.s_max * fo**2
    return float(out) if np.ndim(out) == 0 else out


def static_pressure(omega, r, p: PressureParams = PressureParams(),
                    omega_max: float = 314.16):
    """Static pressure S_r(omega) delivered by one fan into impedance ratio r.

    The operating point is the nonnegative root of the quadratic obtained by
    intersecting the impedance curve S = Z Q^2, Z = (S_max/Q_max^2)(1-r)/r^2,
    with a linear PQ-curve. Limits: r = 1 (fully open) gives S = 0; r = 0
    (fully blocked) gives the zero-airflow pressure S_max (omega/omega_max)^2.
    """
    frac = np.asarray(omega, dtype=float) / omega_max
    r = np.asarray(r, dtype=float)
    scalar = frac.ndim == 0 and r.ndim == 0
    frac, r = np.broadcast_arrays(np.atleast_1d(frac), np.atleast_1d(r))
    blocked = r <= 1e-12
    open_sys = r >= 1.0 - 1e-15
    mid = ~(blocked | open_sys)
    s = np.zeros(frac.shape, dtype=float)
    s[blocked] = p.s_max * frac[blocked] ** 2
    if np.any(mid):
        rm, fm = r[mid], frac[mid]
        z = (p.s_max / p.q_max**2) * (1.0 - rm) / rm**2
        b = fm * (p.s_max / p.q_max)
        c = -(fm**2) * p.s_max
        q = (-b + np.sqrt(b * b - 4.0 * z * c)) / (2.0 * z)
        s[mid] = z * q * q
    return float(s[0]) if scalar else s


def model_c2_static_pressure(omega, r, p: PressureParams = PressureParams()):
    """Alias of static_pressure with the C2 parametrization."""
    return static_pressure(omega, r, p)


def model_c3_pressure(omega_in, omega_out, hatch, p: PressureParams = PressureParams()):
    """Downwind pressure with hatch-modulated impedance: r(H) = min(1, r0 + beta H/45)."""
    r = np.minimum(1.0, p.r0 + p.beta * np.asarray(hatch, dtype=float) / 45.0)
    out = (
        p.p_ambient
        + static_pressure(omega_in, r, p)
        - static_pressure(omega_out, r, p)
    )
    return float(out) if np.ndim(out) == 0 else out


def model_d1_pressure_diff(omega_in, p: BernoulliParams = BernoulliParams()):
    """Barometer-pair reading difference (Pa) as a function of intake fan speed."""
    w = np.asarray(omega_in, dtype=float)
    out = (p.rho / (2.0 * p.area**2)) * (p.q_max / p.omega_max) ** 2 * w**2 + p.offset
    return float(out) if out.ndim == 0 else out


def model_e1_intensity(theta_1, theta_2, p: MalusParams = MalusParams()):
    """Light intensity behind two imperfect polarizers at angles theta (degrees)."""
    d = np.deg2rad(np.asarray(theta_1, dtype=float) - np.asarray(theta_2, dtype=float))
    out = p.i0 * ((p.tp - p.tc) * np.cos(d) ** 2 + p.tc)
    return float(out) if out.ndim == 0 else out


def model_f_color(rgb, theta_1=0.0, theta_2=0.0, fidelity: str = "F1",
                  p: ImageModelParams = ImageModelParams()):
    """Displayed color in [0, 1]^3 under models F1, F2 or F3.

    F1: pure Malus attenuation of the source color.
    F2: adds sensor crosstalk S, white balance W and exposure e, with
        overexposure truncation min{1, x}.
    F3: replaces the scalar cos^2 by per-channel polarizer transmissions.
    """
    rgb = np.asarray(rgb, dtype=float) / 255.0
    cos2 = math.cos(math.radians(float(theta_1) - float(theta_2))) ** 2
    if fidelity == "F1":
        return cos2 * rgb
    s = np.asarray(p.sensor_matrix, dtype=float)
    w = np.diag(np.asarray(p.white_balance, dtype=float))
    if fidelity == "F2":
        out = p.exposure * w @ s @ (cos2 * rgb)
    elif fidelity == "F3":
        tp = np.asarray(p.tp_rgb, dtype=float)
        tc = np.asarray(p.tc_rgb, dtype=float)
        pol = np.diag((tp - tc) * cos2 + tc)
        out = p.exposure * w @ s @ pol @ rgb
    else:
        raise ValueError(f"unknown image model {fidelity!r}")
    return np.minimum(1.0, out)


def render_hexagon(color, size: int) -> np.ndarray:
    """Render a centered flat-top regular hexagon on black, as (size, size, 3) uint8.

    The hexagon's circumradius is 0.4 * size. Color channels in [0, 1] are
    quantized to 0..255 with round-half-up.
    """
    if size < 16:
        raise ValueError("image size must be >= 16")
    color = np.asarray(color, dtype=float)
    if color.shape != (3,) or np.any(color < 0) or np.any(color > 1):
        raise ValueError("color must be three channels in [0, 1]")
    radius = 0.4 * size
    half = size / 2.0
    coords = np.arange(size) + 0.5 - half
    x = coords[None, :]
    y = coords[:, None]
    apothem = radius * math.sqrt(3) / 2.0
    inside = (np.abs(y) <= apothem) & (
        math.sqrt(3) * np.abs(x) + np.abs(y) <= math.sqrt(3) * radius
    )
    quantized = np.floor(color * 255.0 + 0.5).astype(np.uint8)
    img = np.zeros((size, size, 3), dtype=np.uint8)
    img[inside] = quantized
    return img
