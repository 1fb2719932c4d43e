"""Inter-event lower bounds and Zeno diagnostics.

After an event of pinned node i at ``t_k`` its Lyapunov component restarts
from ``(1 - d_i)^2 V_i(t_k)`` and grows no faster than ``sigma_i``, while the
threshold keeps decaying. The time ``T_k`` at which the linear growth meets
the threshold is therefore a lower bound on the gap to the next event of that
node, and a strictly positive ``T_k`` rules out Zeno behavior.
"""

import logging
import math
from collections.abc import Iterable, Mapping
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from pinsync.errors import (
    GainOutOfRangeError,
    IsolatedPinnedNodeError,
    NoPinnedNodesError,
    NoUnpinnedNodesError,
    PreconditionViolationError,
    UnsortedLogError,
)
from pinsync.models import (
    BoundParams,
    BoundReport,
    EventBound,
    EventLog,
    HybridTrace,
    InnerCoupling,
    NodeZenoStats,
    PinSet,
    SimConfig,
    Topology,
    TriggerParams,
    ZenoReport,
)

logger = logging.getLogger(__name__)

THRESHOLD_RTOL = 1e-9
RESIDUAL_RTOL = 1e-12


def theta(
    topology: Topology,
    pins: PinSet,
    c: float,
    gamma: float,
    epsilon: float = 1.0,
) -> float:
    """Return the cross-coupling constant.

    ``theta = (N - l) c^2 gamma^2 l^2 max a_ij^2 / (2 epsilon)`` with the
    maximum over unpinned i and pinned j.

    Raises:
        NoPinnedNodesError: If the pin set is empty.
        NoUnpinnedNodesError: If every node is pinned.
        PreconditionViolationError: If epsilon is not positive.
    """
    if not epsilon > 0:
        raise PreconditionViolationError(f"epsilon must be positive, got {epsilon}")
    pins.check_for(topology.n_nodes)
    n_nodes, l = topology.n_nodes, pins.l  # noqa: E741
    if l == 0:
        raise NoPinnedNodesError("theta needs at least one pinned node")
    free = pins.unpinned(n_nodes)
    if not free:
        raise NoUnpinnedNodesError("theta needs at least one unpinned node")

    cross = topology.entries[np.ix_(list(free), sorted(pins))]
    max_sq = float(np.max(cross**2))
    return (n_nodes - l) * c**2 * gamma**2 * l**2 * max_sq / (2.0 * epsilon)


def bound_params(
    topology: Topology,
    pins: PinSet,
    triggers: TriggerParams,
    c: float,
    gamma: float,
    w0: float,
    epsilon: float = 1.0,
    mu: Optional[float] = None,
) -> BoundParams:
    """Derive the bound constants for a pin set.

    Args:
        topology: Coupling matrix.
        pins: Pinned nodes (at least one).
        triggers: Trigger parameters of the pinned nodes.
        c: Coupling strength.
        gamma: One-sided constant.
        w0: W at t0.
        epsilon: Free positive constant.
        mu: Decay constant; defaults to half of the smallest beta.

    Returns:
        The derived constants. With every node pinned theta is 0.

    Raises:
        NoPinnedNodesError: If the pin set is empty.
        PreconditionViolationError: If mu is not in ``(0, min beta)``.
    """
    if pins.l == 0:
        raise NoPinnedNodesError("bounds need at least one pinned node")
    alphas = [triggers[i].alpha for i in pins]
    beta_check = min(triggers[i].beta for i in pins)
    if mu is None:
        mu = beta_check / 2.0
    if not 0 < mu < beta_check:
        raise PreconditionViolationError(
            f"mu must be in (0, {beta_check}), got {mu}"
        )
    if pins.l == topology.n_nodes:
        th = 0.0
    else:
        th = theta(topology, pins, c, gamma, epsilon)
    alpha_hat = th * max(alphas)
    return BoundParams(
        epsilon=epsilon,
        mu=mu,
        theta=th,
        alpha_hat=alpha_hat,
        beta_check=beta_check,
        m=w0 + alpha_hat / (beta_check - mu),
    )


def sigma_i(
    node: int,
    topology: Topology,
    inner: InnerCoupling,
    pins: PinSet,
    alphas: Mapping[int, float],
    gamma: float,
    c: float,
    m: float,
) -> float:
    """Return the growth-rate bound of V_i between events of pinned node i.

    ``sigma_i = 2 |Gamma| (gamma alpha_i
    - c a_ii sqrt(alpha_i) (sum_j sqrt(alpha_j) + (N - l) sqrt(M)))`` with
    the sum over pinned j.

    Raises:
        PreconditionViolationError: If the node is not pinned or M < 0.
        IsolatedPinnedNodeError: If ``a_ii = 0``.
    """
    if node not in pins:
        raise PreconditionViolationError(f"node {node} is not pinned")
    if m < 0:
        raise PreconditionViolationError(f"M must be nonnegative, got {m}")
    a_ii = float(topology.entries[node, node])
    if a_ii == 0.0:
        raise IsolatedPinnedNodeError(node)

    pinned_sum = sum(math.sqrt(alphas[j]) for j in pins)
    free_term = (topology.n_nodes - pins.l) * math.sqrt(m)
    alpha = alphas[node]
    return 2.0 * inner.norm * (
        gamma * alpha - c * a_ii * math.sqrt(alpha) * (pinned_sum + free_term)
    )


def inter_event_lower_bound(
    v_k: float,
    t_k: float,
    t0: float,
    alpha: float,
    beta: float,
    d: float,
    sigma: float,
) -> float:
    """Solve ``(1-d)^2 V_k + sigma T = alpha exp(-beta (t_k + T - t0))`` for T.

    The left side increases and the right side decreases in T, and the left
    side is below the right at ``T = 0``, so the positive root is unique. It
    is bracketed in ``[0, T_hi]`` with ``T_hi`` doubled from 1 and refined
    by bisection.

    Args:
        v_k: V_i at the event; must equal the threshold at t_k.
        t_k: Event time.
        t0: Initial time.
        alpha: Threshold scale.
        beta: Threshold decay rate.
        d: Impulse gain.
        sigma: Growth-rate bound.

    Returns:
        The lower bound T_k > 0.

    Raises:
        PreconditionViolationError: If v_k is off the threshold or sigma is
            not positive.
        GainOutOfRangeError: If d is not in (0, 1).
    """
    if not 0 < d < 1:
        raise GainOutOfRangeError(f"impulse gain must be in (0, 1), got {d}")
    if not sigma > 0:
        raise PreconditionViolationError(f"sigma must be positive, got {sigma}")
    level = alpha * math.exp(-beta * (t_k - t0))
    if abs(v_k - level) > THRESHOLD_RTOL * level:
        raise PreconditionViolationError(
            f"V_k={v_k:.17g} is not on the threshold {level:.17g} at t_k={t_k}"
        )

    start = (1.0 - d) ** 2 * v_k

    def residual(span: float) -> float:
        return start + sigma * span - level * math.exp(-beta * span)

    t_hi = 1.0
    while residual(t_hi) < 0:
        t_hi *= 2.0

    # residual slope is at most sigma + beta * level
    xtol = 0.5 * RESIDUAL_RTOL * alpha / (sigma + beta * level)
    root = float(bisect(residual, 0.0, t_hi, xtol=xtol, maxiter=500))
    logger.debug("T_k=%.6g for t_k=%.6g (bracket [0, %s])", root, t_k, t_hi)
    return root


def zeno_diagnostics(
    log: EventLog,
    horizon: tuple[float, float],
    nodes: Optional[Iterable[int]] = None,
) -> ZenoReport:
    """Summarize event counts and inter-event gaps per node.

    Args:
        log: Events of a run.
        horizon: ``(t0, t_end)`` of the run.
        nodes: Nodes to report; defaults to the nodes present in the log.

    Returns:
        Per-node counts and gap statistics, and the smallest gap overall.

    Raises:
        UnsortedLogError: If an event lies outside the horizon or a node's
            event times are not strictly increasing.
    """
    t0, t_end = horizon
    by_node: dict[int, list[float]] = {}
    for record in log:
        if not t0 <= record.t <= t_end:
            raise UnsortedLogError(
                f"event of node {record.node} at t={record.t} outside "
                f"horizon [{t0}, {t_end}]"
            )
        times = by_node.setdefault(record.node, [])
        if times and record.t <= times[-1]:
            raise UnsortedLogError(
                f"event times of node {record.node} are not increasing at "
                f"t={record.t}"
            )
        times.append(record.t)

    wanted = sorted(set(nodes)) if nodes is not None else sorted(by_node)
    per_node: dict[int, NodeZenoStats] = {}
    for node in wanted:
        times = by_node.get(node, [])
        gaps = np.diff(times)
        if gaps.size:
            per_node[node] = NodeZenoStats(
                len(times), float(gaps.min()), float(gaps.mean())
            )
        else:
            per_node[node] = NodeZenoStats(len(times), None, None)

    mins = [s.min_gap for s in per_node.values() if s.min_gap is not None]
    return ZenoReport(
        horizon=(t0, t_end),
        per_node=per_node,
        global_min_gap=min(mins) if mins else None,
    )


def events_in_window(log: EventLog, t_a: float, t_b: float) -> dict[int, int]:
    """Count the events of each node with ``t_a <= t <= t_b``.

    Nodes without events in the window are omitted.
    """
    if t_b < t_a:
        raise ValueError(f"window end {t_b} precedes start {t_a}")
    counts: dict[int, int] = {}
    for record in log:
        if t_a <= record.t <= t_b:
            counts[record.node] = counts.get(record.node, 0) + 1
    return dict(sorted(counts.items()))


def bound_report(
    config: SimConfig,
    trace: HybridTrace,
    log: EventLog,
    epsilon: float = 1.0,
    mu: Optional[float] = None,
) -> BoundReport:
    """Compare the inter-event lower bounds with a completed run.

    The coupling strength is the largest value the run reached. Each T_k is
    evaluated with V_k set to the threshold at t_k and with sigma_i from the
    observed supremum of W. Isolated pinned nodes are listed in the report
    and their events carry no bound.

    Args:
        config: Configuration of the run.
        trace: Trace of the run.
        log: Event log of the run.
        epsilon: Free positive constant.
        mu: Decay constant; defaults to half of the smallest beta.

    Returns:
        The bound report; its ``sound`` property is the overall verdict.
    """
    spec, pins, triggers = config.spec, config.pins, config.triggers
    c = float(np.max(trace.c))
    params = bound_params(
        spec.topology,
        pins,
        triggers,
        c,
        spec.gamma,
        float(trace.w[0]),
        epsilon,
        mu,
    )
    m_observed = float(np.max(trace.w))
    alphas = {i: triggers[i].alpha for i in pins}

    sigma_proof: dict[int, float] = {}
    sigma_observed: dict[int, float] = {}
    isolated: list[int] = []
    for node in sorted(pins):
        try:
            sigma_proof[node] = sigma_i(
                node, spec.topology, spec.inner, pins, alphas, spec.gamma, c, params.m
            )
            sigma_observed[node] = sigma_i(
                node, spec.topology, spec.inner, pins, alphas, spec.gamma, c, m_observed
            )
        except IsolatedPinnedNodeError:
            logger.warning("Pinned node %d is isolated; no inter-event bound", node)
            isolated.append(node)

    events: list[EventBound] = []
    for node in log.nodes():
        records = log.for_node(node)
        trig = triggers[node]
        for idx, record in enumerate(records):
            gap = records[idx + 1].t - record.t if idx + 1 < len(records) else None
            lower: Optional[float] = None
            if node in sigma_observed:
                lower = inter_event_lower_bound(
                    trig.threshold(record.t, config.t0),
                    record.t,
                    config.t0,
                    trig.alpha,
                    trig.beta,
                    trig.d,
                    sigma_observed[node],
                )
            events.append(EventBound(node, record.k, record.t, lower, gap))

    report = BoundReport(
        params=params,
        c=c,
        m_observed=m_observed,
        sigma_proof=sigma_proof,
        sigma_observed=sigma_observed,
        isolated=tuple(isolated),
        events=tuple(events),
        slack=2.0 * config.event_tol,
    )
    logger.info(
        "Bound check: %d event(s), %d violation(s)",
        len(events),
        len(report.violations),
    )
    return report
