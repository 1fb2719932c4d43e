"""Spectral analysis of the coupling matrix.

The network synchronizes under event-triggered pinning impulses when
``gamma*I + c*A_bar`` is negative definite, where ``A_bar`` is the principal
submatrix of A on the unpinned nodes. Because ``A_bar`` is symmetric this is
equivalent to ``gamma + c*lambda_max(A_bar) < 0``, which gives the minimum
coupling strength ``gamma / |lambda_max(A_bar)|``.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pinsync.errors import (
    AllNodesPinnedError,
    DimensionMismatchError,
    EmptyMatrixError,
    NotSymmetricError,
    PreconditionViolationError,
)
from pinsync.models import ConditionReport, PinSet, Topology

logger = logging.getLogger(__name__)

SYMMETRY_ATOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 64
# Eigenvalues within ZERO_BAND * max(1, |A_bar|) of zero are zero.
ZERO_BAND = 1e-9


@dataclass(frozen=True)
class ReferenceThreshold:
    """One published row of pin sets and their spectral thresholds.

    Node labels are 1-based, as published; the values refer to a network
    whose exact coupling entries are not available, so they serve as
    reference numbers for the threshold arithmetic only.
    """

    l: int  # noqa: E741
    nodes: str
    lambda_max: float
    min_coupling: float
    satisfied: bool


# Published thresholds for gamma = 30.9342 and c = 8.
REFERENCE_GAMMA = 30.9342
REFERENCE_C = 8.0
REFERENCE_THRESHOLDS: tuple[ReferenceThreshold, ...] = (
    ReferenceThreshold(1, "1", -0.3241, 95.4465, False),
    ReferenceThreshold(2, "1,2", -1.0968, 28.2040, False),
    ReferenceThreshold(2, "1,5", -1.7849, 17.3311, False),
    ReferenceThreshold(3, "1,4,5", -2.4465, 12.6443, False),
    ReferenceThreshold(3, "1,2,5", -4.2800, 7.2276, True),
)


def reduced_matrix(topology: Topology, pins: PinSet) -> NDArray[np.float64]:
    """Return the principal submatrix of A on the unpinned nodes.

    Rows and columns follow ascending unpinned-index order.

    Raises:
        IndexOutOfRangeError: If a pinned index is out of range.
        AllNodesPinnedError: If every node is pinned.
    """
    pins.check_for(topology.n_nodes)
    free = pins.unpinned(topology.n_nodes)
    if not free:
        raise AllNodesPinnedError("every node is pinned; the reduced matrix is empty")
    idx = np.asarray(free)
    return topology.entries[np.ix_(idx, idx)].copy()


def jacobi_eigenvalues(
    m: ArrayLike,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> NDArray[np.float64]:
    """Compute all eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.

    Each sweep annihilates every off-diagonal pair (p, q) in row order with a
    plane rotation. Sweeping stops once the off-diagonal Frobenius norm is at
    most ``tol`` times the Frobenius norm of the input.

    Args:
        m: Symmetric square matrix (not checked here).
        tol: Relative off-diagonal stopping tolerance.
        max_sweeps: Sweep limit.

    Returns:
        Eigenvalues in ascending order.
    """
    a = np.array(m, dtype=np.float64)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.sort(np.diag(a))

    for sweep in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(a[p, q])
                if apq == 0.0:
                    continue
                app, aqq = float(a[p, p]), float(a[q, q])
                g = 100.0 * abs(apq)
                if abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.hypot(theta, 1.0)
                    )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, -s], [s, c]])
                rows = a[[p, q], :]
                a[[p, q], :] = rot @ rows
                cols = a[:, [p, q]]
                a[:, [p, q]] = cols @ rot.T
                a[p, q] = a[q, p] = 0.0
    else:
        logger.warning("Jacobi iteration stopped after %d sweeps", max_sweeps)

    logger.debug("Jacobi converged for %dx%d matrix after %d sweep(s)", n, n, sweep)
    return np.sort(np.diag(a))


def lambda_max_symmetric(m: ArrayLike) -> float:
    """Return the largest eigenvalue of a symmetric matrix.

    Args:
        m: Square matrix, symmetric within ``1e-10`` entrywise.

    Returns:
        The largest eigenvalue.

    Raises:
        EmptyMatrixError: If the matrix has no entries.
        DimensionMismatchError: If the matrix is not square.
        NotSymmetricError: If the matrix is not symmetric within tolerance.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.size == 0:
        raise EmptyMatrixError("cannot take the largest eigenvalue of an empty matrix")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0.0, atol=SYMMETRY_ATOL):
        raise NotSymmetricError("matrix is not symmetric within 1e-10")
    return float(jacobi_eigenvalues(a)[-1])


def min_coupling_strength(
    gamma: float, lambda_max: float, scale: float = 1.0
) -> float:
    """Return the coupling threshold ``gamma / |lambda_max|``.

    ``lambda_max = -inf`` (no unpinned nodes) gives 0. A ``lambda_max``
    within ``ZERO_BAND * max(1, scale)`` of zero or above it gives ``+inf``
    since no coupling strength suffices.

    Args:
        gamma: One-sided constant of the node dynamics.
        lambda_max: Largest eigenvalue of the reduced matrix.
        scale: Norm of the reduced matrix the eigenvalue came from.
    """
    if lambda_max == -math.inf:
        return 0.0
    if lambda_max >= -ZERO_BAND * max(1.0, scale):
        return math.inf
    return gamma / abs(lambda_max)


def check_sync_condition(
    gamma: float,
    c: float,
    topology: Topology,
    pins: PinSet,
) -> ConditionReport:
    """Check ``gamma*I + c*A_bar < 0`` for a pin set.

    When every node is pinned there is no topology requirement and the
    report is satisfied with ``lambda_max_abar = -inf`` and
    ``min_coupling = 0``.

    Args:
        gamma: One-sided constant of the node dynamics.
        c: Coupling strength.
        topology: Coupling matrix.
        pins: Pinned nodes.

    Returns:
        The condition report.
    """
    pins.check_for(topology.n_nodes)
    if pins.l == topology.n_nodes:
        return ConditionReport(
            pins=pins,
            gamma=gamma,
            c=c,
            lambda_max_abar=-math.inf,
            min_coupling=0.0,
            satisfied=True,
        )

    abar = reduced_matrix(topology, pins)
    scale = float(np.linalg.norm(abar))
    lam = lambda_max_symmetric(abar)
    if lam != 0.0 and abs(lam) <= ZERO_BAND * max(1.0, scale):
        logger.debug("Snapping lambda_max=%s to zero", lam)
        lam = 0.0
    return ConditionReport(
        pins=pins,
        gamma=gamma,
        c=c,
        lambda_max_abar=lam,
        min_coupling=min_coupling_strength(gamma, lam, scale),
        satisfied=lam < 0 and gamma + c * lam < 0,
    )


def select_pinned_nodes(
    topology: Topology,
    gamma: float,
    c: float,
) -> tuple[PinSet, list[ConditionReport]]:
    """Select nodes to pin until the spectral condition holds.

    Every node whose degree is at most ``gamma/c`` is pinned first (such a
    node cannot satisfy the diagonal part of the condition). Then the
    unpinned node of largest degree, ties broken by lowest index, is added
    one at a time until the condition holds or every node is pinned.

    Args:
        topology: Coupling matrix.
        gamma: One-sided constant of the node dynamics.
        c: Coupling strength (positive).

    Returns:
        The final pin set and the condition report of every set tried, the
        mandatory set first.

    Raises:
        ValueError: If c is not positive.
    """
    if not c > 0:
        raise ValueError(f"coupling strength must be positive, got {c}")

    degrees = topology.degrees
    limit = gamma / c
    pinned = [i for i in range(topology.n_nodes) if degrees[i] <= limit]
    logger.debug("Mandatory pins (degree <= %s): %s", limit, pinned)

    report = check_sync_condition(gamma, c, topology, PinSet.of(pinned))
    trail = [report]
    while not report.satisfied:
        free = [i for i in range(topology.n_nodes) if i not in report.pins]
        pick = max(free, key=lambda i: (degrees[i], -i))
        pinned.append(pick)
        report = check_sync_condition(gamma, c, topology, PinSet.of(pinned))
        logger.debug(
            "Pinned node %d: lambda_max=%s satisfied=%s",
            pick,
            report.lambda_max_abar,
            report.satisfied,
        )
        trail.append(report)

    return report.pins, trail


def saturation_cap(
    gamma: float,
    topology: Topology,
    pins: PinSet,
    margin: float,
) -> float:
    """Return the adaptive-coupling cap ``gamma/|lambda_max(A_bar)| + margin``.

    Raises:
        PreconditionViolationError: If margin is not positive or the pin
            set leaves ``lambda_max(A_bar) >= 0`` (no finite threshold).
    """
    if not margin > 0:
        raise PreconditionViolationError(f"margin must be positive, got {margin}")
    # Any positive c gives the same lambda_max; only the threshold is used.
    report = check_sync_condition(gamma, 1.0, topology, pins)
    if math.isinf(report.min_coupling):
        raise PreconditionViolationError(
            f"pins {list(pins)} leave lambda_max(A_bar) >= 0; "
            "no finite coupling threshold"
        )
    return report.min_coupling + margin
