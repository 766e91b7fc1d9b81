"""Classical fixed-step 4th-order Runge-Kutta on plain float sequences.

The whole closed loop (vehicle + oscillator network) is advanced jointly by
this one integrator, so there is no operator-splitting phase error between
controller and plant. State vectors are plain lists of floats; the hot loop
deliberately avoids numpy because the vectors are tiny (~40 entries) and
per-call array overhead dominates at that size.
"""

from __future__ import annotations

from typing import Callable, Sequence

RateFn = Callable[[Sequence[float]], Sequence[float]]


def rk4(y: Sequence[float], f: RateFn, dt: float) -> list[float]:
    """One classical RK4 step of y' = f(y) over dt. Autonomous systems only."""
    if dt <= 0.0:
        raise ValueError("rk4 requires dt > 0")
    half = 0.5 * dt
    k1 = f(y)
    k2 = f([yi + half * ki for yi, ki in zip(y, k1)])
    k3 = f([yi + half * ki for yi, ki in zip(y, k2)])
    k4 = f([yi + dt * ki for yi, ki in zip(y, k3)])
    sixth = dt / 6.0
    return [
        yi + sixth * (a + 2.0 * (b + c) + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    ]
