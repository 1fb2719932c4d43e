"""Sampling check of the one-sided growth condition on a box.

The condition ``(x-y)^T (f(x)-f(y)) <= gamma (x-y)^T Gamma (x-y)`` cannot hold
globally for quadratic systems such as Chen, so it is only checked on a
user-declared box and the result is reported, never asserted.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from pinsync.dynamics.base import NodeDynamics
from pinsync.errors import (
    DegenerateBoxError,
    DimensionMismatchError,
    PreconditionViolationError,
)
from pinsync.models import InnerCoupling, OneSidedBoundReport

logger = logging.getLogger(__name__)

VIOLATION_RTOL = 1e-9


def verify_one_sided_bound(
    dynamics: NodeDynamics,
    inner: InnerCoupling,
    box: Sequence[tuple[float, float]],
    n_samples: int,
    seed: int,
) -> OneSidedBoundReport:
    """Sample point pairs in a box and test the one-sided bound.

    Both points of every pair are drawn uniformly from the box. A pair
    violates the bound when its left side exceeds the right side by more
    than ``1e-9 * (1 + |rhs|)``. The empirical constant is the largest
    quotient ``(x-y)^T (f(x)-f(y)) / (x-y)^T Gamma (x-y)`` over pairs with
    x != y.

    Args:
        dynamics: Node vector field and its declared gamma.
        inner: Inner coupling Gamma.
        box: ``(low, high)`` per coordinate.
        n_samples: Number of pairs to draw.
        seed: Seed for the sampling generator.

    Returns:
        The sampling report; deterministic for a given seed.

    Raises:
        DimensionMismatchError: If box, dynamics and Gamma disagree in size.
        PreconditionViolationError: If a bound is not finite, is inverted,
            or n_samples < 1.
        DegenerateBoxError: If every interval has zero width.
    """
    bounds = np.asarray(box, dtype=np.float64)
    dim = dynamics.dim
    if bounds.shape != (dim, 2) or inner.dim != dim:
        raise DimensionMismatchError(
            f"box must have {dim} (low, high) pairs matching the dynamics "
            f"and inner coupling, got shape {bounds.shape}"
        )
    if not np.all(np.isfinite(bounds)):
        raise PreconditionViolationError("box intervals must be finite")
    if np.any(bounds[:, 1] < bounds[:, 0]):
        raise PreconditionViolationError("box intervals must have low <= high")
    if n_samples < 1:
        raise PreconditionViolationError("n_samples must be at least 1")
    if np.all(bounds[:, 1] == bounds[:, 0]):
        raise DegenerateBoxError("box has zero width in every coordinate")

    rng = np.random.default_rng(seed)
    low, high = bounds[:, 0], bounds[:, 1]
    x = rng.uniform(low, high, size=(n_samples, dim))
    y = rng.uniform(low, high, size=(n_samples, dim))

    diff = x - y
    lhs = np.einsum("ij,ij->i", diff, dynamics(0.0, x) - dynamics(0.0, y))
    quad = np.einsum("ij,jk,ik->i", diff, inner.matrix, diff)
    gamma = dynamics.one_sided_gamma
    rhs = gamma * quad

    tolerance = VIOLATION_RTOL * (1 + np.abs(rhs))
    violation_count = int(np.count_nonzero(lhs - rhs > tolerance))
    distinct = quad > 0
    gamma_hat = (
        float(np.max(lhs[distinct] / quad[distinct])) if distinct.any() else math.nan
    )

    if violation_count:
        logger.warning(
            "One-sided bound with gamma=%s violated by %d of %d sampled pairs",
            gamma,
            violation_count,
            n_samples,
        )
    logger.debug("Empirical one-sided constant on box: %s", gamma_hat)

    return OneSidedBoundReport(
        box=tuple((float(lo), float(hi)) for lo, hi in bounds),
        n_samples=n_samples,
        seed=seed,
        gamma=gamma,
        violation_count=violation_count,
        gamma_hat=gamma_hat,
    )
