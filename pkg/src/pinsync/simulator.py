"""Hybrid simulation of the event-triggered pinning impulsive closed loop.

Between events every node follows the coupled flow
``x_i' = f(t, x_i) + c * sum_j a_ij Gamma x_j`` while the isolated node follows
``z' = f(t, z)``. A pinned node i receives an impulse
``x_i(t+) = z(t) + (1 - d_i)(x_i(t) - z(t))`` whenever its Lyapunov component
``V_i = |x_i - z|^2`` reaches ``alpha_i * exp(-beta_i (t - t0))``.

States are left-continuous at events: the trace stores the pre-impulse row
and the post-impulse row with the same timestamp.
"""

import logging
import math
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pinsync.errors import (
    DimensionMismatchError,
    EventStormError,
    GainOutOfRangeError,
    NonFiniteStateError,
    StartupViolationError,
)
from pinsync.integrator import rk4_step
from pinsync.models import (
    FLOW,
    POST_IMPULSE,
    PRE_IMPULSE,
    AdaptiveCoupling,
    EventLog,
    EventRecord,
    HybridTrace,
    NetworkSpec,
    PinSet,
    SaturatedAdaptiveCoupling,
    SimConfig,
)

logger = logging.getLogger(__name__)

MAX_BISECTIONS = 60


def _as_states(spec: NetworkSpec, states: ArrayLike) -> NDArray[np.float64]:
    x = np.asarray(states, dtype=np.float64)
    expected = (spec.n_nodes, spec.dim)
    if x.shape != expected:
        raise DimensionMismatchError(
            f"states must have shape {expected}, got {x.shape}"
        )
    return x


def _coupled(
    spec: NetworkSpec, t: float, x: NDArray[np.float64], c: float
) -> NDArray[np.float64]:
    return spec.dynamics(t, x) + c * (spec.topology.entries @ x) @ spec.inner.matrix.T


def coupled_vector_field(
    spec: NetworkSpec,
    t: float,
    states: ArrayLike,
    c_now: float,
) -> NDArray[np.float64]:
    """Evaluate the coupled network vector field.

    Args:
        spec: Network description.
        t: Time.
        states: Node states, shape ``(N, n)``.
        c_now: Coupling strength at time t.

    Returns:
        ``f(t, x_i) + c_now * sum_j a_ij Gamma x_j`` for every node, shape
        ``(N, n)``.

    Raises:
        DimensionMismatchError: If ``states`` is not ``(N, n)``.
    """
    return _coupled(spec, t, _as_states(spec, states), c_now)


def trigger_fired(
    v_i: float,
    alpha_i: float,
    beta_i: float,
    t: float,
    t0: float,
) -> bool:
    """Return whether ``V_i >= alpha_i * exp(-beta_i (t - t0))``."""
    return v_i >= alpha_i * math.exp(-beta_i * (t - t0))


def apply_impulse(e_i: ArrayLike, d_i: float) -> NDArray[np.float64]:
    """Return the post-impulse error ``(1 - d_i) * e_i``.

    Raises:
        GainOutOfRangeError: If d_i is not in the open interval (0, 1).
    """
    if not 0 < d_i < 1:
        raise GainOutOfRangeError(f"impulse gain must be in (0, 1), got {d_i}")
    return (1.0 - d_i) * np.asarray(e_i, dtype=np.float64)


def adaptive_coupling_rate(
    spec: NetworkSpec,
    pins: PinSet,
    states: ArrayLike,
    z: ArrayLike,
    zeta: float,
) -> float:
    """Return ``zeta * sum over unpinned j of e_j^T Gamma e_j``.

    Only unpinned nodes drive the adaptation; with every node pinned the
    rate is 0.
    """
    x = _as_states(spec, states)
    free = list(pins.unpinned(spec.n_nodes))
    if not free:
        return 0.0
    e = x[free] - np.asarray(z, dtype=np.float64)
    return float(zeta * np.einsum("ij,jk,ik->", e, spec.inner.matrix, e))


def lyapunov_components(
    states: ArrayLike,
    z: ArrayLike,
    pins: Optional[PinSet] = None,
) -> tuple[NDArray[np.float64], float, float]:
    """Compute the Lyapunov bookkeeping of one network state.

    Args:
        states: Node states, shape ``(N, n)``.
        z: Isolated-node state, shape ``(n,)``.
        pins: Pinned nodes; W covers the remaining nodes. Without pins W
            equals V.

    Returns:
        ``(V_1..V_N, V, W)`` with ``V_i = |x_i - z|^2``, ``V = sum V_i`` and
        ``W`` the sum over unpinned nodes.

    Raises:
        DimensionMismatchError: If the dimensions of states and z disagree.
    """
    x = np.asarray(states, dtype=np.float64)
    zz = np.asarray(z, dtype=np.float64)
    if x.ndim != 2 or zz.shape != (x.shape[1],):
        raise DimensionMismatchError(
            f"states {x.shape} and z {zz.shape} have incompatible shapes"
        )
    v = np.sum((x - zz) ** 2, axis=1)
    free = list(pins.unpinned(x.shape[0])) if pins is not None else list(range(len(v)))
    return v, float(v.sum()), float(v[free].sum())


class _ClosedLoop:
    """Augmented state ``[x (N*n), z (n), c]`` and its right-hand side."""

    def __init__(self, config: SimConfig) -> None:
        self.config = config
        self.spec = spec = config.spec
        self.n_nodes, self.dim = spec.n_nodes, spec.dim
        self.size = self.n_nodes * self.dim

        policy = spec.coupling
        self.adaptive = isinstance(policy, AdaptiveCoupling)
        self.zeta = policy.zeta if isinstance(policy, AdaptiveCoupling) else 0.0
        self.cap = (
            policy.cap if isinstance(policy, SaturatedAdaptiveCoupling) else math.inf
        )
        self.c0 = policy.initial_c

        self.pinned = sorted(config.pins)
        self.free = list(config.pins.unpinned(self.n_nodes))
        triggers = [config.triggers[i] for i in self.pinned]
        self.alphas = np.array([p.alpha for p in triggers])
        self.betas = np.array([p.beta for p in triggers])
        self.gains = np.array([p.d for p in triggers])

    def pack(
        self, x: NDArray[np.float64], z: NDArray[np.float64], c: float
    ) -> NDArray[np.float64]:
        return np.concatenate([x.ravel(), z, [c]])

    def x(self, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return y[: self.size].reshape(self.n_nodes, self.dim)

    def z(self, y: NDArray[np.float64]) -> NDArray[np.float64]:
        return y[self.size : self.size + self.dim]

    def rhs(self, t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        x, z, c = self.x(y), self.z(y), float(y[-1])
        c_eff = min(c, self.cap)
        dx = _coupled(self.spec, t, x, c_eff)
        dz = self.spec.dynamics(t, z)
        dc = 0.0
        if self.adaptive and c < self.cap and self.free:
            dc = adaptive_coupling_rate(self.spec, self.config.pins, x, z, self.zeta)
        return np.concatenate([dx.ravel(), dz, [dc]])

    def step(self, t: float, y: NDArray[np.float64], h: float) -> NDArray[np.float64]:
        y_next = rk4_step(self.rhs, t, y, h)
        if y_next[-1] > self.cap:
            y_next[-1] = self.cap
        return y_next

    def node_v(self, y: NDArray[np.float64]) -> NDArray[np.float64]:
        """Return V_i of the pinned nodes, in ascending node order."""
        e = self.x(y)[self.pinned] - self.z(y)
        return np.sum(e * e, axis=1)

    def gaps(self, t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        """Return ``V_i - alpha_i exp(-beta_i (t - t0))`` for pinned nodes."""
        thresholds = self.alphas * np.exp(-self.betas * (t - self.config.t0))
        return self.node_v(y) - thresholds


def _localize(
    loop: _ClosedLoop,
    t: float,
    y: NDArray[np.float64],
    h: float,
    y_end: NDArray[np.float64],
) -> tuple[float, NDArray[np.float64]]:
    """Bisect ``[0, h]`` for the first sub-step where some gap becomes >= 0.

    Each trial re-integrates a single step of the trial length from ``(t, y)``.
    Returns the sub-step length and the state reached.
    """
    lo, hi, y_hi = 0.0, h, y_end
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= loop.config.event_tol:
            break
        mid = 0.5 * (lo + hi)
        y_mid = loop.step(t, y, mid)
        if np.max(loop.gaps(t + mid, y_mid)) >= 0:
            hi, y_hi = mid, y_mid
        else:
            lo = mid
    return hi, y_hi


def simulate(config: SimConfig) -> tuple[HybridTrace, EventLog]:
    """Simulate the closed loop from t0 to t_end.

    The augmented state (all x_i, z and c) is advanced with fixed RK4 steps
    on the grid ``t0 + m*h``. After each step the trigger of every pinned
    node is evaluated; on a crossing the earliest crossing time is localized
    by bisection to ``event_tol``, the step is truncated there, every pinned
    node on or above its threshold receives its impulse (ascending node
    order), and integration resumes toward the same grid point.

    Under a saturated adaptive policy c is clamped at its cap from the first
    instant it reaches it.

    Args:
        config: Simulation configuration.

    Returns:
        The sampled trace and the event log.

    Raises:
        StartupViolationError: If some pinned node has ``V_i(t0) >= alpha_i``.
        NonFiniteStateError: If the state overflows; carries the time.
        EventStormError: If a node exceeds ``max_events_per_node`` events,
            or an impulse leaves it on or above its threshold.
    """
    loop = _ClosedLoop(config)
    spec = config.spec
    x0, z0 = config.initial_states, config.initial_isolated

    v0, _, _ = lyapunov_components(x0, z0, config.pins)
    for i in loop.pinned:
        if v0[i] >= config.triggers[i].alpha:
            raise StartupViolationError(i, float(v0[i]), config.triggers[i].alpha)

    logger.info(
        "Simulating %d nodes (%d pinned) on [%s, %s] with h=%s",
        spec.n_nodes,
        len(loop.pinned),
        config.t0,
        config.t_end,
        config.step,
    )

    t = config.t0
    y = loop.pack(x0, z0, min(loop.c0, loop.cap))
    times: list[float] = [t]
    kinds: list[int] = [FLOW]
    states: list[NDArray[np.float64]] = [y]
    log = EventLog()
    counts = dict.fromkeys(loop.pinned, 0)

    n_steps = int(np.ceil((config.t_end - config.t0) / config.step - 1e-9))
    m = 0
    while m < n_steps:
        t_grid = min(config.t0 + (m + 1) * config.step, config.t_end)
        h = t_grid - t
        y_next = loop.step(t, y, h)
        if not np.all(np.isfinite(y_next)):
            raise NonFiniteStateError(t_grid)

        if not loop.pinned or np.max(loop.gaps(t_grid, y_next)) < 0:
            t, y = t_grid, y_next
            times.append(t)
            kinds.append(FLOW)
            states.append(y)
            m += 1
            continue

        tau, y_event = _localize(loop, t, y, h, y_next)
        t_event = t_grid if tau >= h else t + tau
        times.append(t_event)
        kinds.append(PRE_IMPULSE)
        states.append(y_event)

        y_post = y_event.copy()
        x_post, z_event = loop.x(y_post), loop.z(y_post)
        v_pre = loop.node_v(y_event)
        fired = np.nonzero(loop.gaps(t_event, y_event) >= 0)[0]
        for slot in fired:
            node = loop.pinned[slot]
            kick = apply_impulse(x_post[node] - z_event, loop.gains[slot])
            x_post[node] = z_event + kick
            counts[node] += 1
            if counts[node] > config.max_events_per_node:
                raise EventStormError(node, config.max_events_per_node)
            v_after = float(np.sum((x_post[node] - z_event) ** 2))
            log.append(
                EventRecord(
                    node=node,
                    k=counts[node],
                    t=t_event,
                    v_before=float(v_pre[slot]),
                    v_after=v_after,
                    c=float(y_event[-1]),
                )
            )
            logger.debug(
                "Impulse %d on node %d at t=%.12g: V %.6g -> %.6g",
                counts[node],
                node,
                t_event,
                v_pre[slot],
                v_after,
            )

        post_gaps = loop.gaps(t_event, y_post)
        stuck = [loop.pinned[s] for s in fired if post_gaps[s] >= 0]
        if stuck:
            raise EventStormError(stuck[0], counts[stuck[0]], t_event)

        times.append(t_event)
        kinds.append(POST_IMPULSE)
        states.append(y_post)
        t, y = t_event, y_post
        if t_event == t_grid:
            m += 1

    logger.info("Simulation finished with %d event(s)", len(log))
    return _build_trace(loop, times, kinds, states), log


def _build_trace(
    loop: _ClosedLoop,
    times: list[float],
    kinds: list[int],
    states: list[NDArray[np.float64]],
) -> HybridTrace:
    ys = np.asarray(states)
    x = ys[:, : loop.size].reshape(len(ys), loop.n_nodes, loop.dim)
    z = ys[:, loop.size : loop.size + loop.dim]
    v = np.sum((x - z[:, None, :]) ** 2, axis=2)
    return HybridTrace(
        t=np.asarray(times),
        jump=np.asarray(kinds, dtype=np.int8),
        c=ys[:, -1].copy(),
        x=x,
        z=z,
        v=v,
        v_total=v.sum(axis=1),
        w=v[:, loop.free].sum(axis=1),
    )
