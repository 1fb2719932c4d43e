"""Exception hierarchy for pinsync.

Every error raised by the library derives from :class:`PinsyncError` and from
the closest builtin exception, so callers can catch either the package-wide
base or the usual ``ValueError``/``IndexError``.
"""

from dataclasses import dataclass
from typing import Optional


class PinsyncError(Exception):
    """Base class for all pinsync errors."""


@dataclass(frozen=True)
class TopologyViolation:
    """A single violated coupling-matrix invariant.

    Attributes:
        kind: Violation kind, one of ``NonSquare``, ``NonFinite``,
            ``AsymmetricEntry``, ``NegativeOffDiagonal``, ``RowSumNonzero``,
            ``PositiveDiagonal``.
        row: Row index involved, if any.
        col: Column index involved, if any.
    """

    kind: str
    row: Optional[int] = None
    col: Optional[int] = None

    def __str__(self) -> str:
        if self.row is None:
            return self.kind
        if self.col is None:
            return f"{self.kind}({self.row})"
        return f"{self.kind}({self.row},{self.col})"


class TopologyError(PinsyncError, ValueError):
    """Raised when a coupling matrix violates one or more invariants.

    Attributes:
        violations: Every violated invariant, in row-major discovery order.
    """

    def __init__(self, violations: list[TopologyViolation]) -> None:
        self.violations = violations
        super().__init__(
            "invalid topology: " + ", ".join(str(v) for v in violations)
        )


class DimensionMismatchError(PinsyncError, ValueError):
    """Raised when array shapes disagree with the declared dimensions."""


class IndexOutOfRangeError(PinsyncError, IndexError):
    """Raised when a node index falls outside ``[0, N)``."""


class DegenerateBoxError(PinsyncError, ValueError):
    """Raised when a sampling box has zero width in every coordinate."""


class NotSymmetricError(PinsyncError, ValueError):
    """Raised when an eigensolver input is not symmetric."""


class EmptyMatrixError(PinsyncError, ValueError):
    """Raised when an eigensolver input has no entries."""


class AllNodesPinnedError(PinsyncError, ValueError):
    """Raised when a reduced matrix is requested with every node pinned."""


class GainOutOfRangeError(PinsyncError, ValueError):
    """Raised when an impulse gain lies outside the open interval (0, 1)."""


class StartupViolationError(PinsyncError, ValueError):
    """Raised when a pinned node starts at or above its trigger threshold."""

    def __init__(self, node: int, v0: float, alpha: float) -> None:
        self.node = node
        super().__init__(
            f"node {node}: V_i(t0)={v0:.17g} must be below alpha={alpha:.17g}"
        )


class NonFiniteStateError(PinsyncError, ValueError):
    """Raised when the integrated state overflows or becomes NaN.

    Attributes:
        time: Time of the first step whose result is not finite.
    """

    def __init__(self, time: float) -> None:
        self.time = time
        super().__init__(f"non-finite state at t={time:.17g}")


class EventStormError(PinsyncError, ValueError):
    """Raised when one node fires without end.

    Either the node exceeded the per-node event budget, or an impulse left
    it on its threshold so it would fire again at the same instant; ``time``
    is set in the second case.
    """

    def __init__(self, node: int, count: int, time: Optional[float] = None) -> None:
        self.node = node
        self.count = count
        self.time = time
        if time is None:
            message = f"node {node} exceeded {count} events"
        else:
            message = (
                f"node {node} is still on its threshold after impulse {count} "
                f"at t={time:.17g}; increase d_i or decrease event_tol"
            )
        super().__init__(message)


class NoPinnedNodesError(PinsyncError, ValueError):
    """Raised when a proof quantity needs at least one pinned node."""


class NoUnpinnedNodesError(PinsyncError, ValueError):
    """Raised when a proof quantity needs at least one unpinned node."""


class IsolatedPinnedNodeError(PinsyncError, ValueError):
    """Raised when a pinned node has no connections (a_ii = 0)."""

    def __init__(self, node: int) -> None:
        self.node = node
        super().__init__(f"pinned node {node} is isolated (a_ii = 0)")


class PreconditionViolationError(PinsyncError, ValueError):
    """Raised when an operation's documented precondition does not hold."""


class UnsortedLogError(PinsyncError, ValueError):
    """Raised when per-node event times are not strictly increasing."""


class MissingRunArtifactsError(PinsyncError, ValueError):
    """Raised when a command needs outputs of a run that are not present."""


@dataclass(frozen=True)
class ConfigIssue:
    """A single problem found while parsing a run configuration.

    Attributes:
        kind: ``SyntaxError``, ``UnknownField``, ``MissingField`` or
            ``InvariantViolation``.
        path: Dotted field path (e.g. ``triggers.3.d``), or a location for
            syntax errors.
        message: Human-readable description.
    """

    kind: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}({self.path}): {self.message}"


class ConfigError(PinsyncError, ValueError):
    """Raised when a configuration document fails validation.

    Attributes:
        issues: Every problem found, in document order.
    """

    def __init__(self, issues: list[ConfigIssue]) -> None:
        self.issues = issues
        super().__init__("; ".join(str(issue) for issue in issues))
