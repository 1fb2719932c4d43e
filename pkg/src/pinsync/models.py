"""Core data models for pinsync.

This module defines the data structures shared by the spectral analysis, the
hybrid simulator and the bound computations: the network description, pin
sets and condition reports, trigger parameters, and the simulation outputs.

All array-valued fields are stored as read-only float64 copies so that model
objects can be shared freely between runs.
"""

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pinsync.errors import (
    DimensionMismatchError,
    GainOutOfRangeError,
    IndexOutOfRangeError,
)

if TYPE_CHECKING:
    from pinsync.dynamics.base import NodeDynamics


def _frozen_array(values: ArrayLike) -> NDArray[np.float64]:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Topology:
    """Symmetric coupling matrix A with zero row sums.

    Build instances with :func:`pinsync.topology.validate_topology`; the
    constructor itself does not check the invariants.

    Attributes:
        entries: Dense ``(N, N)`` coupling matrix.
    """

    entries: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen_array(self.entries))

    @property
    def n_nodes(self) -> int:
        """Return the number of nodes N."""
        return int(self.entries.shape[0])

    @property
    def degrees(self) -> NDArray[np.float64]:
        """Return the node degrees ``|a_ii|``."""
        return np.abs(np.diag(self.entries))


@dataclass(frozen=True, eq=False)
class InnerCoupling:
    """Symmetric positive definite inner coupling matrix Gamma.

    Attributes:
        matrix: Dense ``(n, n)`` matrix.
    """

    matrix: NDArray[np.float64]

    def __post_init__(self) -> None:
        m = _frozen_array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionMismatchError(
                f"inner coupling must be a square matrix, got shape {m.shape}"
            )
        sym = 0.5 * (m + m.T)
        smallest = float(np.linalg.eigvalsh(sym)[0])
        if smallest <= 1e-12:
            raise ValueError(
                f"inner coupling must be positive definite "
                f"(smallest eigenvalue {smallest:.6g})"
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, dim: int) -> "InnerCoupling":
        """Return ``Gamma = I_n``."""
        return cls(np.eye(dim))

    @classmethod
    def diagonal(cls, values: Iterable[float]) -> "InnerCoupling":
        """Return a diagonal inner coupling."""
        return cls(np.diag(list(values)))

    @property
    def dim(self) -> int:
        """Return the node state dimension n."""
        return int(self.matrix.shape[0])

    @property
    def norm(self) -> float:
        """Return the spectral norm of Gamma."""
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True)
class FixedCoupling:
    """Constant coupling strength c > 0."""

    c: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError(f"coupling strength must be positive, got {self.c}")

    @property
    def initial_c(self) -> float:
        return self.c


@dataclass(frozen=True)
class AdaptiveCoupling:
    """Adaptive coupling c' = zeta * sum over unpinned nodes of e^T Gamma e.

    Attributes:
        c0: Initial coupling strength (nonnegative).
        zeta: Adaptation gain (positive).
    """

    c0: float
    zeta: float

    def __post_init__(self) -> None:
        if not self.c0 >= 0:
            raise ValueError(f"c0 must be nonnegative, got {self.c0}")
        if not self.zeta > 0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")

    @property
    def initial_c(self) -> float:
        return self.c0


@dataclass(frozen=True)
class SaturatedAdaptiveCoupling(AdaptiveCoupling):
    """Adaptive coupling clamped at ``cap`` once it is reached.

    Attributes:
        cap: Saturation level, usually the minimum coupling strength plus a
            small margin.
    """

    cap: float = math.inf

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.cap > self.c0:
            raise ValueError(f"cap {self.cap} must exceed c0 {self.c0}")


CouplingPolicy = Union[FixedCoupling, AdaptiveCoupling, SaturatedAdaptiveCoupling]


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """Complete description of a complex dynamical network.

    Attributes:
        topology: Coupling matrix A.
        inner: Inner coupling matrix Gamma.
        dynamics: Node vector field f.
        coupling: Coupling strength policy.
    """

    topology: Topology
    inner: InnerCoupling
    dynamics: "NodeDynamics"
    coupling: CouplingPolicy

    def __post_init__(self) -> None:
        if self.topology.n_nodes < 1:
            raise DimensionMismatchError("network needs at least one node")
        if self.inner.dim != self.dynamics.dim:
            raise DimensionMismatchError(
                f"inner coupling dimension {self.inner.dim} does not match "
                f"dynamics dimension {self.dynamics.dim}"
            )

    @property
    def n_nodes(self) -> int:
        return self.topology.n_nodes

    @property
    def dim(self) -> int:
        return self.dynamics.dim

    @property
    def gamma(self) -> float:
        return self.dynamics.one_sided_gamma


@dataclass(frozen=True)
class PinSet:
    """Ordered set of distinct pinned node indices.

    Attributes:
        pinned: Pinned node indices in selection order.
    """

    pinned: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        pinned = tuple(int(i) for i in self.pinned)
        if len(set(pinned)) != len(pinned):
            raise ValueError(f"pinned indices must be distinct, got {pinned}")
        if any(i < 0 for i in pinned):
            raise IndexOutOfRangeError(f"negative pinned index in {pinned}")
        object.__setattr__(self, "pinned", pinned)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "PinSet":
        return cls(tuple(indices))

    @property
    def l(self) -> int:  # noqa: E743
        """Return the number of pinned nodes."""
        return len(self.pinned)

    def __contains__(self, node: object) -> bool:
        return node in self.pinned

    def __iter__(self) -> Iterator[int]:
        return iter(self.pinned)

    def __len__(self) -> int:
        return len(self.pinned)

    def check_for(self, n_nodes: int) -> None:
        """Raise IndexOutOfRangeError unless every index is in ``[0, n_nodes)``."""
        bad = [i for i in self.pinned if i >= n_nodes]
        if bad:
            raise IndexOutOfRangeError(
                f"pinned indices {bad} out of range for {n_nodes} nodes"
            )

    def unpinned(self, n_nodes: int) -> tuple[int, ...]:
        """Return the unpinned indices in ascending order."""
        pinned = set(self.pinned)
        return tuple(i for i in range(n_nodes) if i not in pinned)

    def label(self, one_based: bool = False) -> str:
        """Return the indices as a comma-separated string (ascending)."""
        offset = 1 if one_based else 0
        return ",".join(str(i + offset) for i in sorted(self.pinned))


@dataclass(frozen=True)
class ConditionReport:
    """Result of checking gamma*I + c*A_bar < 0 for one pin set.

    ``lambda_max_abar`` is ``-inf`` when every node is pinned (the reduced
    matrix is empty); ``min_coupling`` is then ``0``. ``min_coupling`` is
    ``+inf`` when ``lambda_max_abar >= 0``.

    Attributes:
        pins: Pin set the report refers to.
        gamma: One-sided constant.
        c: Coupling strength checked.
        lambda_max_abar: Largest eigenvalue of the reduced matrix.
        min_coupling: gamma / |lambda_max_abar|.
        satisfied: Whether gamma + c * lambda_max_abar < 0.
    """

    pins: PinSet
    gamma: float
    c: float
    lambda_max_abar: float
    min_coupling: float
    satisfied: bool

    @property
    def all_pinned(self) -> bool:
        return self.lambda_max_abar == -math.inf


@dataclass(frozen=True)
class NodeTrigger:
    """Event-trigger parameters of one pinned node.

    Attributes:
        alpha: Threshold scale (positive).
        beta: Threshold decay rate (positive, 1/time).
        d: Impulse gain in the open interval (0, 1).
    """

    alpha: float
    beta: float
    d: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0 < self.d < 1:
            raise GainOutOfRangeError(f"d must be in (0, 1), got {self.d}")

    def threshold(self, t: float, t0: float) -> float:
        """Return ``alpha * exp(-beta * (t - t0))``."""
        return self.alpha * math.exp(-self.beta * (t - t0))


@dataclass(frozen=True)
class TriggerParams:
    """Trigger parameters for every pinned node.

    Attributes:
        by_node: Mapping from pinned node index to its parameters.
    """

    by_node: Mapping[int, NodeTrigger] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "by_node", dict(sorted(self.by_node.items())))

    def __getitem__(self, node: int) -> NodeTrigger:
        return self.by_node[node]

    def __contains__(self, node: object) -> bool:
        return node in self.by_node

    def nodes(self) -> tuple[int, ...]:
        return tuple(self.by_node)


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Everything a single hybrid simulation run needs.

    Attributes:
        spec: Network description.
        pins: Pinned nodes.
        triggers: Trigger parameters for each pinned node.
        t0: Initial time.
        t_end: Final time.
        step: Fixed integration step h.
        initial_states: Node states at t0, shape ``(N, n)``.
        initial_isolated: Isolated-node state z(t0), shape ``(n,)``.
        event_tol: Crossing localization tolerance in time.
        max_events_per_node: Event budget per node before aborting.
    """

    spec: NetworkSpec
    pins: PinSet
    triggers: TriggerParams
    t0: float
    t_end: float
    step: float
    initial_states: NDArray[np.float64]
    initial_isolated: NDArray[np.float64]
    event_tol: float = 1e-9
    max_events_per_node: int = 1_000_000

    def __post_init__(self) -> None:
        x0 = _frozen_array(self.initial_states)
        z0 = _frozen_array(self.initial_isolated)
        n_nodes, dim = self.spec.n_nodes, self.spec.dim
        if x0.shape != (n_nodes, dim):
            raise DimensionMismatchError(
                f"initial_states must have shape {(n_nodes, dim)}, got {x0.shape}"
            )
        if z0.shape != (dim,):
            raise DimensionMismatchError(
                f"initial_isolated must have shape {(dim,)}, got {z0.shape}"
            )
        object.__setattr__(self, "initial_states", x0)
        object.__setattr__(self, "initial_isolated", z0)

        if not self.t_end > self.t0:
            raise ValueError("t_end must be greater than t0")
        if not 0 < self.step <= self.t_end - self.t0:
            raise ValueError("step must be positive and at most t_end - t0")
        if not 0 < self.event_tol < self.step:
            raise ValueError("event_tol must be positive and smaller than step")
        if self.max_events_per_node < 1:
            raise ValueError("max_events_per_node must be positive")

        self.pins.check_for(n_nodes)
        missing = [i for i in self.pins if i not in self.triggers]
        if missing:
            raise ValueError(f"pinned nodes {missing} have no trigger parameters")
        extra = [i for i in self.triggers.nodes() if i not in self.pins]
        if extra:
            raise ValueError(f"trigger parameters given for unpinned nodes {extra}")


# Values of the trace ``jump`` column
FLOW, PRE_IMPULSE, POST_IMPULSE = 0, 1, 2


@dataclass(frozen=True, eq=False)
class HybridTrace:
    """Time-sampled output of a hybrid simulation.

    Rows are ordered by time; an event contributes a pre-impulse row and a
    post-impulse row with the same timestamp, told apart by ``jump``.

    Attributes:
        t: Sample times, shape ``(M,)``.
        jump: Row kind (FLOW, PRE_IMPULSE, POST_IMPULSE), shape ``(M,)``.
        c: Coupling strength, shape ``(M,)``.
        x: Node states, shape ``(M, N, n)``.
        z: Isolated-node state, shape ``(M, n)``.
        v: Lyapunov components V_i, shape ``(M, N)``.
        v_total: V = sum of V_i, shape ``(M,)``.
        w: Sum of V_i over unpinned nodes, shape ``(M,)``.
    """

    t: NDArray[np.float64]
    jump: NDArray[np.int8]
    c: NDArray[np.float64]
    x: NDArray[np.float64]
    z: NDArray[np.float64]
    v: NDArray[np.float64]
    v_total: NDArray[np.float64]
    w: NDArray[np.float64]

    def __len__(self) -> int:
        return int(self.t.shape[0])

    @property
    def n_nodes(self) -> int:
        return int(self.x.shape[1])

    @property
    def dim(self) -> int:
        return int(self.x.shape[2])


@dataclass(frozen=True)
class EventRecord:
    """A single impulse applied to a pinned node.

    Attributes:
        node: Node index i.
        k: Event ordinal for this node, starting at 1.
        t: Event time t_k.
        v_before: V_i at t_k (pre-impulse).
        v_after: V_i at t_k+ (post-impulse).
        c: Coupling strength at t_k.
    """

    node: int
    k: int
    t: float
    v_before: float
    v_after: float
    c: float


@dataclass
class EventLog:
    """Chronological list of impulse events.

    Attributes:
        records: Events in the order they were applied.
    """

    records: list[EventRecord] = field(default_factory=list)

    def append(self, record: EventRecord) -> None:
        self.records.append(record)

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def nodes(self) -> list[int]:
        """Return the nodes that have at least one event, ascending."""
        return sorted({r.node for r in self.records})

    def for_node(self, node: int) -> list[EventRecord]:
        return [r for r in self.records if r.node == node]

    def times(self, node: int) -> list[float]:
        return [r.t for r in self.records if r.node == node]


@dataclass(frozen=True)
class OneSidedBoundReport:
    """Result of sampling the one-sided growth condition on a box.

    Attributes:
        box: Per-coordinate ``(low, high)`` bounds sampled.
        n_samples: Number of sampled pairs.
        seed: Seed of the sampling generator.
        gamma: Constant checked.
        violation_count: Pairs violating the inequality beyond tolerance.
        gamma_hat: Largest sampled quotient, ``nan`` if every pair had x = y.
    """

    box: tuple[tuple[float, float], ...]
    n_samples: int
    seed: int
    gamma: float
    violation_count: int
    gamma_hat: float

    @property
    def within_bound(self) -> bool:
        return self.gamma_hat <= self.gamma


@dataclass(frozen=True)
class NodeZenoStats:
    """Inter-event statistics of one node.

    ``min_gap`` and ``mean_gap`` are ``None`` for nodes with fewer than two
    events.
    """

    count: int
    min_gap: Optional[float]
    mean_gap: Optional[float]


@dataclass(frozen=True)
class ZenoReport:
    """Summary of event counts and inter-event times.

    Attributes:
        horizon: ``(t0, t_end)`` the log was checked against.
        per_node: Statistics keyed by node index.
        global_min_gap: Smallest gap over nodes with at least two events, or
            ``None`` when no node has two events.
    """

    horizon: tuple[float, float]
    per_node: Mapping[int, NodeZenoStats]
    global_min_gap: Optional[float]


@dataclass(frozen=True)
class BoundParams:
    """Constants of the inter-event lower bound.

    Attributes:
        epsilon: Free positive constant of the cross-coupling estimate.
        mu: Decay constant, ``0 < mu < beta_check``.
        theta: Cross-coupling constant.
        alpha_hat: ``theta * max alpha_j`` over pinned nodes.
        beta_check: ``min beta_j`` over pinned nodes.
        m: ``W(t0) + alpha_hat / (beta_check - mu)``.
    """

    epsilon: float
    mu: float
    theta: float
    alpha_hat: float
    beta_check: float
    m: float


@dataclass(frozen=True)
class EventBound:
    """Lower bound on the gap following one event.

    Attributes:
        node: Pinned node index.
        k: Event ordinal for this node.
        t: Event time.
        lower_bound: T_k, or ``None`` for an isolated pinned node.
        gap: Observed time to the node's next event, ``None`` for its last.
    """

    node: int
    k: int
    t: float
    lower_bound: Optional[float]
    gap: Optional[float]

    def holds(self, slack: float) -> Optional[bool]:
        """Return whether ``gap >= lower_bound - slack``, or ``None`` if unknown."""
        if self.lower_bound is None or self.gap is None:
            return None
        return self.gap >= self.lower_bound - slack


@dataclass(frozen=True)
class BoundReport:
    """Inter-event bound constants and their comparison with a run.

    ``sigma_proof`` uses M from the proof constants; ``sigma_observed`` uses
    the largest W seen in the run and is the one the per-event bounds use.

    Attributes:
        params: Constants with the proof M.
        c: Coupling strength used (largest value over the run).
        m_observed: Largest W over the run.
        sigma_proof: sigma_i with the proof M, keyed by pinned node.
        sigma_observed: sigma_i with the observed M, keyed by pinned node.
        isolated: Pinned nodes with ``a_ii = 0``; they have no finite bound.
        events: One entry per logged event.
        slack: Tolerance of the gap comparison.
    """

    params: BoundParams
    c: float
    m_observed: float
    sigma_proof: Mapping[int, float]
    sigma_observed: Mapping[int, float]
    isolated: tuple[int, ...]
    events: tuple[EventBound, ...]
    slack: float

    @property
    def violations(self) -> list[EventBound]:
        """Return the events whose observed gap is below the bound."""
        return [e for e in self.events if e.holds(self.slack) is False]

    @property
    def sound(self) -> bool:
        return not self.violations
