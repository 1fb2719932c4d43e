"""Linear node dynamics f(t, z) = M z."""

from typing import Optional

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from pinsync.dynamics.base import NodeDynamics
from pinsync.errors import DimensionMismatchError


class LinearDynamics(NodeDynamics):
    """Time-invariant linear vector field.

    For linear fields the one-sided constant is exact: the largest
    generalized eigenvalue of ``(M + M^T)/2`` against ``Gamma``.

    Attributes:
        matrix: The system matrix M, shape ``(n, n)``.
        gamma: One-sided constant (see :meth:`gamma_for`).
    """

    def __init__(self, matrix: ArrayLike, gamma: Optional[float] = None) -> None:
        """Initialize the linear dynamics.

        Args:
            matrix: Square system matrix.
            gamma: One-sided constant. When omitted, the value for
                ``Gamma = I`` is used, floored at zero.

        Raises:
            DimensionMismatchError: If the matrix is not square.
            ValueError: If gamma is negative.
        """
        m = np.array(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionMismatchError(
                f"linear dynamics needs a square matrix, got shape {m.shape}"
            )
        m.setflags(write=False)
        self.matrix = m
        if gamma is None:
            gamma = max(0.0, self.gamma_for(np.eye(m.shape[0])))
        if gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {gamma}")
        self.gamma = float(gamma)

    def gamma_for(self, inner: ArrayLike) -> float:
        """Return the exact one-sided constant against an inner coupling.

        Args:
            inner: Symmetric positive definite matrix Gamma.

        Returns:
            Largest eigenvalue of the pencil ``((M + M^T)/2, Gamma)``.
        """
        sym = 0.5 * (self.matrix + self.matrix.T)
        eigs = scipy.linalg.eigh(sym, np.asarray(inner, dtype=np.float64),
                                 eigvals_only=True)
        return float(eigs[-1])

    @property
    def kind(self) -> str:
        return "linear"

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def one_sided_gamma(self) -> float:
        return self.gamma

    def _evaluate(self, t: float, z: NDArray[np.float64]) -> NDArray[np.float64]:
        return z @ self.matrix.T
