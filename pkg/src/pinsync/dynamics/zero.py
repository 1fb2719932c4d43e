"""Trivial dynamics f(t, z) = 0, used for closed-form event checks."""

import numpy as np
from numpy.typing import NDArray

from pinsync.dynamics.base import NodeDynamics


class ZeroDynamics(NodeDynamics):
    """Vector field that is identically zero.

    Attributes:
        n: State dimension.
    """

    def __init__(self, dim: int = 3) -> None:
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        self.n = int(dim)

    @property
    def kind(self) -> str:
        return "zero"

    @property
    def dim(self) -> int:
        return self.n

    @property
    def one_sided_gamma(self) -> float:
        return 0.0

    def _evaluate(self, t: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.zeros_like(z)
