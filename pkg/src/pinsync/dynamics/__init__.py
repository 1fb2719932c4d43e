"""Node dynamics for the network nodes.

This module provides the vector fields available to a network and a factory
that builds one from its registry name.
"""

from typing import Any

from pinsync.dynamics.assumption import verify_one_sided_bound
from pinsync.dynamics.base import NodeDynamics
from pinsync.dynamics.chen import CHEN_GAMMA, ChenDynamics, chen_vector_field
from pinsync.dynamics.linear import LinearDynamics
from pinsync.dynamics.zero import ZeroDynamics

__all__ = [
    "CHEN_GAMMA",
    "ChenDynamics",
    "LinearDynamics",
    "NodeDynamics",
    "ZeroDynamics",
    "chen_vector_field",
    "get_dynamics",
    "verify_one_sided_bound",
]

# Registry of available dynamics by configuration name
_DYNAMICS: dict[str, type[NodeDynamics]] = {
    "chen": ChenDynamics,
    "linear": LinearDynamics,
    "zero": ZeroDynamics,
}


def get_dynamics(kind: str, **params: Any) -> NodeDynamics:
    """Build node dynamics from its registry name.

    Args:
        kind: One of ``chen``, ``linear`` or ``zero``.
        **params: Constructor arguments of the selected class.

    Returns:
        Configured dynamics instance.

    Raises:
        ValueError: If no dynamics is registered under ``kind``.
    """
    try:
        dynamics_cls = _DYNAMICS[kind]
    except KeyError:
        raise ValueError(
            f"Unknown dynamics '{kind}'. "
            f"Supported kinds: {', '.join(sorted(_DYNAMICS))}"
        ) from None
    return dynamics_cls(**params)
