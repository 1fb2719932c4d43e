"""pinsync - event-triggered pinning impulsive synchronization toolkit.

Checks the spectral synchronization condition of a complex dynamical network,
selects pinning nodes, simulates the hybrid closed loop with per-node event
triggers and evaluates the inter-event lower bounds that exclude Zeno
behavior.
"""

from pinsync.bounds import bound_report, inter_event_lower_bound, zeno_diagnostics
from pinsync.models import (
    AdaptiveCoupling,
    ConditionReport,
    EventLog,
    FixedCoupling,
    HybridTrace,
    InnerCoupling,
    NetworkSpec,
    NodeTrigger,
    PinSet,
    SaturatedAdaptiveCoupling,
    SimConfig,
    Topology,
    TriggerParams,
)
from pinsync.simulator import simulate
from pinsync.spectral import check_sync_condition, select_pinned_nodes
from pinsync.topology import canonical_fixture, validate_topology

__version__ = "0.1.0"

__all__ = [
    "AdaptiveCoupling",
    "ConditionReport",
    "EventLog",
    "FixedCoupling",
    "HybridTrace",
    "InnerCoupling",
    "NetworkSpec",
    "NodeTrigger",
    "PinSet",
    "SaturatedAdaptiveCoupling",
    "SimConfig",
    "Topology",
    "TriggerParams",
    "__version__",
    "bound_report",
    "canonical_fixture",
    "check_sync_condition",
    "inter_event_lower_bound",
    "select_pinned_nodes",
    "simulate",
    "validate_topology",
    "zeno_diagnostics",
]
