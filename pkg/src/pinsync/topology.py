"""Coupling-matrix validation, loading and the canonical fixture network.

A valid coupling matrix A is symmetric off the diagonal, has nonnegative
off-diagonal weights, nonpositive diagonal entries and zero row sums, so
``|a_ii|`` is the degree of node i.
"""

import logging
from collections.abc import Iterable
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike

from pinsync.errors import IndexOutOfRangeError, TopologyError, TopologyViolation
from pinsync.models import Topology

logger = logging.getLogger(__name__)

ROW_SUM_RTOL = 1e-12

# Edges of the canonical 8-node network: node 0 is a leaf hanging off node 7,
# nodes 4-7 form a clique, nodes 1-3 attach to every clique node and to a
# short path 1-2-3. Degrees are (1, 5, 6, 5, 6, 6, 6, 7).
CANONICAL_EDGES: tuple[tuple[int, int], ...] = (
    (0, 7),
    (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7),
    (1, 4), (1, 5), (1, 6), (1, 7),
    (2, 4), (2, 5), (2, 6), (2, 7),
    (3, 4), (3, 5), (3, 6), (3, 7),
    (1, 2), (2, 3),
)  # fmt: skip


def validate_topology(raw: ArrayLike) -> Topology:
    """Validate a coupling matrix and wrap it as a Topology.

    Every invariant is checked before reporting, so the raised error lists
    all violations at once.

    Args:
        raw: Square real matrix.

    Returns:
        The validated topology.

    Raises:
        TopologyError: If any invariant fails; ``violations`` holds the
            complete list with row/column indices.
    """
    a = np.asarray(raw, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise TopologyError([TopologyViolation("NonSquare")])

    violations: list[TopologyViolation] = []
    n = a.shape[0]

    for i, j in zip(*np.nonzero(~np.isfinite(a))):
        violations.append(TopologyViolation("NonFinite", int(i), int(j)))
    if violations:
        raise TopologyError(violations)

    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j] != a[j, i]:
                violations.append(TopologyViolation("AsymmetricEntry", i, j))

    for i in range(n):
        for j in range(n):
            if i != j and a[i, j] < 0:
                violations.append(TopologyViolation("NegativeOffDiagonal", i, j))

    row_sums = a.sum(axis=1)
    scale = np.maximum(1.0, np.abs(a).max(axis=1))
    for i in np.nonzero(np.abs(row_sums) > ROW_SUM_RTOL * scale)[0]:
        violations.append(TopologyViolation("RowSumNonzero", int(i)))

    for i in np.nonzero(np.diag(a) > 0)[0]:
        violations.append(TopologyViolation("PositiveDiagonal", int(i)))

    if violations:
        logger.debug("Rejected %dx%d coupling matrix: %s", n, n, violations)
        raise TopologyError(violations)

    return Topology(a)


def node_degree(topology: Topology, i: int) -> float:
    """Return the degree ``|a_ii|`` of node i.

    Raises:
        IndexOutOfRangeError: If i is not in ``[0, N)``.
    """
    if not 0 <= i < topology.n_nodes:
        raise IndexOutOfRangeError(
            f"node {i} out of range for {topology.n_nodes} nodes"
        )
    return float(abs(topology.entries[i, i]))


def from_edges(
    n_nodes: int,
    edges: Iterable[tuple[int, int]],
    weight: float = 1.0,
) -> Topology:
    """Build a topology from an undirected edge list with uniform weight.

    Diagonal entries are set so that every row sums to zero.
    """
    adjacency = np.zeros((n_nodes, n_nodes))
    for i, j in edges:
        adjacency[i, j] = adjacency[j, i] = weight
    return from_adjacency(adjacency)


def from_adjacency(adjacency: ArrayLike) -> Topology:
    """Build a topology from a symmetric nonnegative adjacency matrix.

    The diagonal of the adjacency is ignored and replaced by minus the row
    sum of the off-diagonal weights.
    """
    adj = np.array(adjacency, dtype=np.float64)
    np.fill_diagonal(adj, 0.0)
    return validate_topology(adj - np.diag(adj.sum(axis=1)))


def canonical_fixture() -> Topology:
    """Return the canonical 8-node, unit-weight test network."""
    return from_edges(8, CANONICAL_EDGES)


def load_topology(path: Path) -> Topology:
    """Read a coupling matrix from a plain-text file and validate it.

    The format is one matrix row per line, entries separated by whitespace.
    Blank lines and lines starting with ``#`` are ignored.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the text is not a numeric matrix.
        TopologyError: If the matrix violates an invariant.
    """
    if not path.exists():
        raise FileNotFoundError(f"Topology file not found: {path}")

    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as f:
        for line_num, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(tok) for tok in line.split()])
            except ValueError as e:
                raise ValueError(f"{path}:{line_num}: {e}") from e

    if any(len(row) != len(rows) for row in rows):
        raise TopologyError([TopologyViolation("NonSquare")])
    return validate_topology(rows)


def format_topology(topology: Topology) -> str:
    """Render a topology in the plain-text matrix format."""
    return "".join(
        " ".join(f"{value:.17g}" for value in row) + "\n"
        for row in topology.entries
    )
