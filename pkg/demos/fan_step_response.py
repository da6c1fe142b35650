"""Watch a wind-tunnel fan spin up under inertia after a load step.

Runs the same protocol twice: once at steady-state fidelity, where fan speed
jumps instantly to its equilibrium value, and once at dynamic fidelity, where
the speed follows the motor's torque-balance ODE and takes a few seconds to
get there.
"""

import chambersim as cs

PROTOCOL = """\
CHAMBER,wt,standard
SEED,11
SET,load_in,0.01
MSR,3,7
SET,load_in,1.0
MSR,35,7
"""


def rpm_trace(fidelity: str) -> tuple[list[float], list[float]]:
    proto = cs.parse_protocol(PROTOCOL)
    rows = list(cs.run_protocol(proto, fidelity=fidelity))
    return [r.timestamp for r in rows], [r["rpm_in"] for r in rows]


def main() -> None:
    t, steady = rpm_trace("steady_state")
    _, dynamic = rpm_trace("dynamic")
    print("  t [s]   steady rpm   dynamic rpm")
    for i in range(0, len(t), 4):
        print(f"{t[i]:>7.3f}   {steady[i]:>10.1f}   {dynamic[i]:>11.1f}")
    lag = max(abs(a - b) for a, b in zip(steady, dynamic))
    print(f"\nlargest inertial lag: {lag:.1f} rpm")


if __name__ == "__main__":
    main()
