"""Base interface for node dynamics.

A node vector field f(t, z) describes the isolated behaviour of every node of
the network. Implementations broadcast over leading axes so a whole network
state of shape ``(N, n)`` is evaluated in one call.
"""

from abc import ABC, abstractmethod

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pinsync.errors import DimensionMismatchError


class NodeDynamics(ABC):
    """Abstract base class for deterministic node vector fields.

    Subclasses declare the state dimension and the one-sided constant gamma
    such that ``(x-y)^T (f(t,x)-f(t,y)) <= gamma (x-y)^T Gamma (x-y)``
    (with K = gamma * I) on the region where the model is used.
    """

    @property
    @abstractmethod
    def kind(self) -> str:
        """Return the registry name of this dynamics (e.g. ``"chen"``)."""
        ...

    @property
    @abstractmethod
    def dim(self) -> int:
        """Return the node state dimension n."""
        ...

    @property
    @abstractmethod
    def one_sided_gamma(self) -> float:
        """Return the nonnegative one-sided constant gamma."""
        ...

    @abstractmethod
    def _evaluate(self, t: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
        """Evaluate the vector field on an array whose last axis has length n."""
        ...

    def vector_field(self, t: float, z: ArrayLike) -> NDArray[np.float64]:
        """Evaluate f(t, z).

        Args:
            t: Time.
            z: State vector of length n, or any array whose last axis has
                length n (evaluated row by row).

        Returns:
            Derivative array with the same shape as ``z``.

        Raises:
            DimensionMismatchError: If the last axis of ``z`` is not n.
        """
        arr = np.asarray(z, dtype=np.float64)
        if arr.ndim == 0 or arr.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"{self.kind} dynamics expects states of length {self.dim}, "
                f"got shape {arr.shape}"
            )
        return self._evaluate(t, arr)

    def __call__(self, t: float, z: ArrayLike) -> NDArray[np.float64]:
        return self.vector_field(t, z)

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(dim={self.dim}, "
            f"gamma={self.one_sided_gamma!r})"
        )
