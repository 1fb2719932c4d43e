"""CSV reporters for traces, event logs and analysis reports.

All numbers are written with 17 significant digits so that every float
round-trips exactly, and column sets and order are fixed per file.
"""

import math
from abc import abstractmethod
from collections.abc import Sequence
from pathlib import Path
from typing import Optional, TypeVar

import numpy as np
import pandas as pd

from pinsync.errors import MissingRunArtifactsError
from pinsync.models import (
    AdaptiveCoupling,
    BoundReport,
    ConditionReport,
    EventLog,
    EventRecord,
    FixedCoupling,
    HybridTrace,
    OneSidedBoundReport,
    SaturatedAdaptiveCoupling,
    SimConfig,
    ZenoReport,
)
from pinsync.reporters.base import BaseReporter

T = TypeVar("T")

FLOAT_FORMAT = "%.17g"

KeyValues = Sequence[tuple[str, object]]


def format_value(value: object) -> str:
    """Format a summary value; floats use 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


class CsvReporter(BaseReporter[T]):
    """Reporter writing one pandas DataFrame as CSV."""

    filename: str = "data.csv"

    @abstractmethod
    def frame(self, data: T) -> pd.DataFrame:
        """Build the table for a result."""
        ...

    def render(self, data: T) -> str:
        return self.frame(data).to_csv(
            index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
        )

    @property
    def format_name(self) -> str:
        return "csv"

    @property
    def default_extension(self) -> str:
        return ".csv"


class TraceReporter(CsvReporter[HybridTrace]):
    """Writes ``trace.csv``.

    Columns: ``t, jump, c``, then ``x_i_j`` for nodes i and coordinates j
    (1-based, row-major by node), ``z_1..z_n``, ``V_1..V_N``, ``V``, ``W``.
    """

    filename = "trace.csv"

    def frame(self, data: HybridTrace) -> pd.DataFrame:
        n_rows, n_nodes, dim = data.x.shape
        columns: dict[str, object] = {
            "t": data.t,
            "jump": data.jump.astype(int),
            "c": data.c,
        }
        flat = data.x.reshape(n_rows, n_nodes * dim)
        for i in range(n_nodes):
            for j in range(dim):
                columns[f"x_{i + 1}_{j + 1}"] = flat[:, i * dim + j]
        for j in range(dim):
            columns[f"z_{j + 1}"] = data.z[:, j]
        for i in range(n_nodes):
            columns[f"V_{i + 1}"] = data.v[:, i]
        columns["V"] = data.v_total
        columns["W"] = data.w
        return pd.DataFrame(columns)


class EventsReporter(CsvReporter[EventLog]):
    """Writes ``events.csv``: node, k, t, V_before, V_after, c_at_event."""

    filename = "events.csv"
    columns = ("node", "k", "t", "V_before", "V_after", "c_at_event")

    def frame(self, data: EventLog) -> pd.DataFrame:
        rows = [(r.node, r.k, r.t, r.v_before, r.v_after, r.c) for r in data]
        return pd.DataFrame(rows, columns=list(self.columns))


class ConditionReporter(CsvReporter[Sequence[ConditionReport]]):
    """Writes one row per condition report.

    ``pins`` lists 0-based node indices in ascending order.
    """

    filename = "condition.csv"
    columns = ("pins", "l", "gamma", "c", "lambda_max", "min_coupling", "satisfied")

    def frame(self, data: Sequence[ConditionReport]) -> pd.DataFrame:
        rows = [
            (
                r.pins.label(),
                r.pins.l,
                r.gamma,
                r.c,
                r.lambda_max_abar,
                r.min_coupling,
                r.satisfied,
            )
            for r in data
        ]
        return pd.DataFrame(rows, columns=list(self.columns))


class SelectionReporter(ConditionReporter):
    """Writes the greedy selection trail, one row per trial pin set."""

    filename = "selection.csv"

    def frame(self, data: Sequence[ConditionReport]) -> pd.DataFrame:
        df = super().frame(data)
        df.insert(0, "step", range(len(df)))
        return df


class BoundsReporter(CsvReporter[BoundReport]):
    """Writes ``bounds.csv``: one row per event with its lower bound and gap."""

    filename = "bounds.csv"
    columns = ("node", "k", "t", "T_k", "gap", "holds")

    def frame(self, data: BoundReport) -> pd.DataFrame:
        rows = [
            (
                e.node,
                e.k,
                e.t,
                math.nan if e.lower_bound is None else e.lower_bound,
                math.nan if e.gap is None else e.gap,
                format_value(e.holds(data.slack)),
            )
            for e in data.events
        ]
        return pd.DataFrame(rows, columns=list(self.columns))


class KeyValueReporter(CsvReporter[KeyValues]):
    """Writes ``key,value`` pairs, values formatted by :func:`format_value`."""

    def __init__(self, filename: str = "summary.csv") -> None:
        self.filename = filename

    def frame(self, data: KeyValues) -> pd.DataFrame:
        return pd.DataFrame(
            [(key, format_value(value)) for key, value in data],
            columns=["key", "value"],
        )


def run_summary(
    config: SimConfig,
    seed: Optional[int],
    trace: HybridTrace,
    log: EventLog,
    zeno: ZenoReport,
) -> list[tuple[str, object]]:
    """Collect the realized configuration and outcome of a run.

    The realized trigger parameters make the run replayable from its outputs.
    """
    spec = config.spec
    policy = spec.coupling
    rows: list[tuple[str, object]] = [
        ("seed", seed),
        ("n_nodes", spec.n_nodes),
        ("dim", spec.dim),
        ("dynamics", spec.dynamics.kind),
        ("gamma", spec.gamma),
        ("pins", config.pins.label()),
    ]
    if isinstance(policy, FixedCoupling):
        rows += [("policy", "fixed"), ("c", policy.c)]
    elif isinstance(policy, AdaptiveCoupling):
        saturated = isinstance(policy, SaturatedAdaptiveCoupling)
        rows += [
            ("policy", "saturated" if saturated else "adaptive"),
            ("c0", policy.c0),
            ("zeta", policy.zeta),
        ]
        if isinstance(policy, SaturatedAdaptiveCoupling):
            rows.append(("cap", policy.cap))
    rows += [
        ("t0", config.t0),
        ("t_end", config.t_end),
        ("step", config.step),
        ("event_tol", config.event_tol),
    ]
    for node in config.triggers.nodes():
        trig = config.triggers[node]
        rows += [
            (f"alpha_{node}", trig.alpha),
            (f"beta_{node}", trig.beta),
            (f"d_{node}", trig.d),
        ]
    rows += [
        ("V_initial", float(trace.v_total[0])),
        ("V_final", float(trace.v_total[-1])),
        ("W_initial", float(trace.w[0])),
        ("W_final", float(trace.w[-1])),
        ("c_final", float(trace.c[-1])),
        ("events_total", len(log)),
    ]
    for node, stats in zeno.per_node.items():
        rows += [
            (f"events_{node}", stats.count),
            (f"min_gap_{node}", stats.min_gap),
        ]
    rows.append(("min_gap", zeno.global_min_gap))
    return rows


def bound_summary(report: BoundReport) -> list[tuple[str, object]]:
    """Collect the constants and verdict of a bound report."""
    p = report.params
    rows: list[tuple[str, object]] = [
        ("epsilon", p.epsilon),
        ("mu", p.mu),
        ("c", report.c),
        ("theta", p.theta),
        ("alpha_hat", p.alpha_hat),
        ("beta_check", p.beta_check),
        ("M_proof", p.m),
        ("M_observed", report.m_observed),
    ]
    for node, sigma in report.sigma_proof.items():
        rows.append((f"sigma_proof_{node}", sigma))
    for node, sigma in report.sigma_observed.items():
        rows.append((f"sigma_observed_{node}", sigma))
    rows += [
        ("isolated", ",".join(str(i) for i in report.isolated)),
        ("events", len(report.events)),
        ("violations", len(report.violations)),
        ("sound", report.sound),
    ]
    return rows


def assumption_summary(report: OneSidedBoundReport) -> list[tuple[str, object]]:
    """Collect the result of a one-sided bound sampling check."""
    return [
        ("box", ";".join(f"{lo:.17g}:{hi:.17g}" for lo, hi in report.box)),
        ("samples", report.n_samples),
        ("seed", report.seed),
        ("gamma", report.gamma),
        ("violation_count", report.violation_count),
        ("gamma_hat", report.gamma_hat),
    ]


def _read_csv(path: Path) -> pd.DataFrame:
    if not path.exists():
        raise MissingRunArtifactsError(f"run artifact not found: {path}")
    try:
        return pd.read_csv(path, float_precision="round_trip", keep_default_na=False)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise MissingRunArtifactsError(f"unreadable run artifact {path}: {e}") from e


def _require_columns(df: pd.DataFrame, path: Path, columns: Sequence[str]) -> None:
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise MissingRunArtifactsError(f"{path} lacks columns {missing[:5]}")


def read_events(path: Path) -> EventLog:
    """Load an event log written by :class:`EventsReporter`.

    Raises:
        MissingRunArtifactsError: If the file does not exist or is not an
            event log.
    """
    df = _read_csv(path)
    _require_columns(df, path, EventsReporter.columns)
    log = EventLog()
    for row in df.itertuples(index=False):
        log.append(
            EventRecord(
                node=int(row.node),
                k=int(row.k),
                t=float(row.t),
                v_before=float(row.V_before),
                v_after=float(row.V_after),
                c=float(row.c_at_event),
            )
        )
    return log


def read_trace(path: Path, n_nodes: int, dim: int) -> HybridTrace:
    """Load a trace written by :class:`TraceReporter`.

    Raises:
        MissingRunArtifactsError: If the file does not exist or lacks the
            columns of an ``n_nodes`` by ``dim`` network.
    """
    df = _read_csv(path)
    x_cols = [f"x_{i + 1}_{j + 1}" for i in range(n_nodes) for j in range(dim)]
    z_cols = [f"z_{j + 1}" for j in range(dim)]
    v_cols = [f"V_{i + 1}" for i in range(n_nodes)]
    _require_columns(df, path, ["t", "jump", "c", *x_cols, *z_cols, *v_cols, "V", "W"])
    return HybridTrace(
        t=df["t"].to_numpy(dtype=np.float64),
        jump=df["jump"].to_numpy(dtype=np.int8),
        c=df["c"].to_numpy(dtype=np.float64),
        x=df[x_cols].to_numpy(dtype=np.float64).reshape(len(df), n_nodes, dim),
        z=df[z_cols].to_numpy(dtype=np.float64),
        v=df[v_cols].to_numpy(dtype=np.float64),
        v_total=df["V"].to_numpy(dtype=np.float64),
        w=df["W"].to_numpy(dtype=np.float64),
    )


def read_key_values(path: Path) -> dict[str, str]:
    """Load ``key,value`` pairs written by :class:`KeyValueReporter`.

    Raises:
        MissingRunArtifactsError: If the file does not exist or has no
            key and value columns.
    """
    df = _read_csv(path)
    _require_columns(df, path, ("key", "value"))
    df = df.astype(str)
    return dict(zip(df["key"], df["value"]))
