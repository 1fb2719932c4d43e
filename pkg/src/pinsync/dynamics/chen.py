"""Chen-type chaotic oscillator used as the network node.

The parameter set (35, 3, 28) is the classical Chen attractor; the network
example synchronizes eight coupled copies of it.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pinsync.dynamics.base import NodeDynamics
from pinsync.errors import DimensionMismatchError

# One-sided constant for K = gamma * I with Gamma = diag(1, 2, 1), taken from
# the literature for the attractor region; not a global bound.
CHEN_GAMMA = 30.9342


def chen_vector_field(
    t: float,
    z: ArrayLike,
    a: float = 35.0,
    b: float = 3.0,
    c: float = 28.0,
) -> NDArray[np.float64]:
    """Evaluate the Chen vector field.

    Computes ``(a(z2 - z1), (c - a) z1 - z1 z3 + c z2, z1 z2 - b z3)``. The
    field is autonomous, so ``t`` is accepted only for signature
    compatibility.

    Args:
        t: Time (unused).
        z: State of length 3, or an array whose last axis has length 3.
        a: First Chen parameter.
        b: Second Chen parameter.
        c: Third Chen parameter.

    Returns:
        Derivative with the same shape as ``z``.

    Raises:
        DimensionMismatchError: If the last axis of ``z`` is not 3.
    """
    arr = np.asarray(z, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise DimensionMismatchError(
            f"chen vector field expects length-3 states, got shape {arr.shape}"
        )
    z1, z2, z3 = arr[..., 0], arr[..., 1], arr[..., 2]
    out = np.empty_like(arr)
    out[..., 0] = a * z2 - a * z1
    out[..., 1] = (c - a) * z1 - z1 * z3 + c * z2
    out[..., 2] = z1 * z2 - b * z3
    return out


class ChenDynamics(NodeDynamics):
    """Chen system node dynamics.

    Attributes:
        gamma: One-sided constant reported to the spectral condition.
    """

    def __init__(self, gamma: float = CHEN_GAMMA) -> None:
        """Initialize the Chen dynamics.

        Args:
            gamma: One-sided constant; defaults to the published value.

        Raises:
            ValueError: If gamma is negative.
        """
        if gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {gamma}")
        self.gamma = float(gamma)

    @property
    def kind(self) -> str:
        return "chen"

    @property
    def dim(self) -> int:
        return 3

    @property
    def one_sided_gamma(self) -> float:
        return self.gamma

    def _evaluate(self, t: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
        return chen_vector_field(t, z)
