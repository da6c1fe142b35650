"""Recover the cosine-squared polarizer law from simulated light-tunnel data.

Sweeps the first polarizer over a grid of angles at three source brightness
levels, keeps the second polarizer fixed, and fits intensity ~ a*cos^2(angle)
+ b by least squares. Sensor noise shrinks as the source gets brighter, so
the fit quality rises with brightness.
"""

import numpy as np

import chambersim as cs


def run_sweep(brightness: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    eng = cs.ChamberEngine(cs.Config.LT_STANDARD, seed=seed)
    eng.intervene({"red": brightness, "green": brightness, "blue": brightness,
                   "pol_2": 0.0})
    rng = np.random.default_rng(42)
    thetas = np.round(rng.uniform(-90.0, 90.0, size=400), 1)
    readings = np.empty_like(thetas)
    for i, theta in enumerate(thetas):
        eng.intervene({"pol_1": float(theta)})
        readings[i] = next(eng.measure(1, 10.0).rows())["ir_3"]
    return thetas, readings


def r_squared(thetas: np.ndarray, readings: np.ndarray) -> float:
    design = np.column_stack([np.cos(np.radians(thetas)) ** 2,
                              np.ones_like(thetas)])
    coef, *_ = np.linalg.lstsq(design, readings, rcond=None)
    resid = readings - design @ coef
    return 1.0 - resid.var() / readings.var()


def main() -> None:
    print("brightness   R^2 of cos^2 fit")
    for level in (32, 96, 255):
        thetas, readings = run_sweep(level, seed=level)
        print(f"{level:>10d}   {r_squared(thetas, readings):.4f}")


if __name__ == "__main__":
    main()
