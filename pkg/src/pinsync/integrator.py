"""Fixed-step classical fourth-order Runge-Kutta integration."""

from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

VectorField = Callable[[float, NDArray[np.float64]], NDArray[np.float64]]


def rk4_step(
    f: VectorField,
    t: float,
    y: NDArray[np.float64],
    h: float,
) -> NDArray[np.float64]:
    """Advance ``y' = f(t, y)`` by one classical RK4 step of size h.

    Args:
        f: Right-hand side; must return an array shaped like ``y``.
        t: Current time.
        y: Current state.
        h: Step size (may be any positive value, including a sub-step).

    Returns:
        The state at ``t + h``.
    """
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_fixed(
    f: VectorField,
    t0: float,
    y0: NDArray[np.float64],
    t_end: float,
    h: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Integrate from t0 to t_end with a fixed step.

    Grid times are ``t0 + m*h``; the last step is shortened so the final
    sample lands exactly on ``t_end``.

    Args:
        f: Right-hand side.
        t0: Initial time.
        y0: Initial state.
        t_end: Final time (greater than t0).
        h: Step size (positive).

    Returns:
        Sample times and the states at those times (first axis is time).

    Raises:
        ValueError: If ``t_end <= t0`` or ``h <= 0``.
    """
    if not t_end > t0:
        raise ValueError("t_end must be greater than t0")
    if not h > 0:
        raise ValueError("h must be positive")

    n_steps = int(np.ceil((t_end - t0) / h - 1e-9))
    times = [t0]
    states = [np.asarray(y0, dtype=np.float64)]
    for m in range(1, n_steps + 1):
        t_next = min(t0 + m * h, t_end)
        states.append(rk4_step(f, times[-1], states[-1], t_next - times[-1]))
        times.append(t_next)
    return np.asarray(times), np.asarray(states)
