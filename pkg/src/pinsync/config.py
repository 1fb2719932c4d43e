"""Run configuration documents.

A run is described by one JSON or TOML document (chosen by file suffix).
:func:`parse_config` validates the whole document and reports every problem
with its dotted field path; :func:`realize` turns a parsed configuration into
a :class:`~pinsync.models.SimConfig` by drawing the seeded initial states and
the trigger parameters the document leaves open.
"""

import json
import logging
import math
import tomllib
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, cast

import numpy as np
from numpy.typing import NDArray

from pinsync.dynamics import ChenDynamics, LinearDynamics, NodeDynamics, get_dynamics
from pinsync.errors import ConfigError, ConfigIssue, PinsyncError
from pinsync.models import (
    AdaptiveCoupling,
    CouplingPolicy,
    FixedCoupling,
    InnerCoupling,
    NetworkSpec,
    NodeTrigger,
    PinSet,
    SaturatedAdaptiveCoupling,
    SimConfig,
    Topology,
    TriggerParams,
)
from pinsync.spectral import saturation_cap, select_pinned_nodes
from pinsync.topology import canonical_fixture, load_topology, validate_topology

logger = logging.getLogger(__name__)

CHEN_DEFAULT_Z = (0.1, -0.2, 0.1)

_TOP_KEYS = {
    "topology",
    "inner_coupling",
    "dynamics",
    "coupling",
    "pins",
    "triggers",
    "default_trigger",
    "alpha_factor",
    "initial_states",
    "simulation",
    "bounds",
    "assumption",
    "output",
}
_TRIGGER_KEYS = {"alpha", "beta", "d"}
_SIMULATION_DEFAULTS: dict[str, float] = {
    "t0": 0.0,
    "t_end": 20.0,
    "step": 1e-3,
    "event_tol": 1e-9,
    "max_events_per_node": 1_000_000,
}


@dataclass(frozen=True)
class TriggerSpec:
    """Trigger parameters of one pinned node as far as the document fixes them."""

    beta: float
    alpha: Optional[float] = None
    d: Optional[float] = None


@dataclass(frozen=True, eq=False)
class InitialStateSpec:
    """How initial states are obtained.

    Attributes:
        seed: Generator seed for drawn states and open impulse gains.
        low: Lower bound of drawn state coordinates.
        high: Upper bound of drawn state coordinates.
        x: Literal node states; when set nothing is drawn for them.
        z: Isolated-node state at t0.
    """

    seed: int
    low: float
    high: float
    x: Optional[NDArray[np.float64]]
    z: NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class RunConfig:
    """A validated run configuration.

    Attributes:
        network: Topology, inner coupling, dynamics and coupling policy.
        pins: Pinned nodes (explicit or selected automatically).
        design_c: Coupling strength used by ``check`` and automatic selection.
        triggers: Partial trigger parameters keyed by pinned node.
        alpha_factor: Factor realizing open alpha_i from V_i(t0).
        initial: Initial-state recipe.
        t0: Initial time.
        t_end: Final time.
        step: Integration step.
        event_tol: Crossing localization tolerance.
        max_events_per_node: Per-node event budget.
        epsilon: Bound constant epsilon.
        mu: Bound decay constant, ``None`` for half the smallest beta.
        box: Sampling box for the one-sided bound check, if declared.
        samples: Number of sampled pairs.
        assumption_seed: Seed of the sampling generator.
        output: Output directory.
    """

    network: NetworkSpec
    pins: PinSet
    design_c: float
    triggers: Mapping[int, TriggerSpec]
    alpha_factor: float
    initial: InitialStateSpec
    t0: float = 0.0
    t_end: float = 20.0
    step: float = 1e-3
    event_tol: float = 1e-9
    max_events_per_node: int = 1_000_000
    epsilon: float = 1.0
    mu: Optional[float] = None
    box: Optional[tuple[tuple[float, float], ...]] = None
    samples: int = 100_000
    assumption_seed: int = 42
    output: Path = field(default_factory=lambda: Path("runs"))

    def condition_c(self) -> float:
        """Return the positive coupling strength the spectral condition uses.

        Raises:
            ConfigError: If an adaptive policy starts at ``c0 = 0`` and no
                ``design_c`` is given.
        """
        if self.design_c > 0:
            return self.design_c
        raise ConfigError(
            [
                ConfigIssue(
                    "MissingField",
                    "coupling.design_c",
                    "the condition needs a positive c; set design_c when c0 = 0",
                )
            ]
        )


class _Reader:
    """Collects issues while reading values from nested mappings."""

    def __init__(self) -> None:
        self.issues: list[ConfigIssue] = []

    def add(self, kind: str, path: str, message: str) -> None:
        self.issues.append(ConfigIssue(kind, path, message))

    def section(
        self, data: Mapping[str, Any], key: str, path: str
    ) -> Optional[dict[str, Any]]:
        value = data.get(key)
        if value is None:
            return None
        if not isinstance(value, dict):
            self.add("InvariantViolation", path, "must be a table")
            return None
        return value

    def unknown(self, data: Mapping[str, Any], allowed: set[str], prefix: str) -> None:
        for key in data:
            if key not in allowed:
                self.add("UnknownField", _join(prefix, key), "unknown field")

    def number(
        self,
        data: Mapping[str, Any],
        key: str,
        prefix: str,
        default: Optional[float] = None,
        *,
        positive: bool = False,
        nonnegative: bool = False,
    ) -> Optional[float]:
        path = _join(prefix, key)
        if key not in data:
            if default is None:
                self.add("MissingField", path, "required field")
            return default
        value = data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add("InvariantViolation", path, "must be a number")
            return None
        number = float(value)
        if not math.isfinite(number):
            self.add("InvariantViolation", path, "must be finite")
        elif positive and not number > 0:
            self.add("InvariantViolation", path, "must be positive")
        elif nonnegative and number < 0:
            self.add("InvariantViolation", path, "must be nonnegative")
        else:
            return number
        return None

    def integer(
        self, data: Mapping[str, Any], key: str, prefix: str, default: int
    ) -> Optional[int]:
        value = data.get(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            self.add("InvariantViolation", _join(prefix, key), "must be an integer")
            return None
        return value

    def matrix(self, value: Any, path: str) -> Optional[NDArray[np.float64]]:
        if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
            self.add("InvariantViolation", path, "must be a list of rows")
            return None
        try:
            m = np.array(value, dtype=np.float64)
        except (TypeError, ValueError):
            self.add("InvariantViolation", path, "must be a rectangular numeric matrix")
            return None
        if m.ndim != 2:
            self.add("InvariantViolation", path, "must be a rectangular numeric matrix")
            return None
        return m

    def vector(self, value: Any, path: str) -> Optional[NDArray[np.float64]]:
        try:
            v = np.array(value, dtype=np.float64)
        except (TypeError, ValueError):
            v = None
        if v is None or v.ndim != 1:
            self.add("InvariantViolation", path, "must be a list of numbers")
            return None
        return v


def _join(prefix: str, key: str) -> str:
    return f"{prefix}.{key}" if prefix else key


def _decode(text: str, fmt: str) -> dict[str, Any]:
    try:
        if fmt == "json":
            data = json.loads(text)
        elif fmt == "toml":
            data = tomllib.loads(text)
        else:
            raise ConfigError(
                [ConfigIssue("SyntaxError", "document", f"unsupported format '{fmt}'")]
            )
    except json.JSONDecodeError as e:
        raise ConfigError(
            [ConfigIssue("SyntaxError", f"line {e.lineno}, column {e.colno}", e.msg)]
        ) from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError([ConfigIssue("SyntaxError", "document", str(e))]) from e
    if not isinstance(data, dict):
        raise ConfigError(
            [ConfigIssue("SyntaxError", "document", "top level must be a table")]
        )
    return data


def _read_topology(
    reader: _Reader, data: Mapping[str, Any], base_dir: Path
) -> Optional[Topology]:
    section = reader.section(data, "topology", "topology")
    if section is None:
        if "topology" not in data:
            reader.add("MissingField", "topology", "required field")
        return None
    reader.unknown(section, {"matrix", "file", "fixture"}, "topology")
    given = [k for k in ("matrix", "file", "fixture") if k in section]
    if len(given) != 1:
        reader.add(
            "InvariantViolation",
            "topology",
            "exactly one of matrix, file or fixture is required",
        )
        return None

    kind = given[0]
    try:
        if kind == "matrix":
            m = reader.matrix(section["matrix"], "topology.matrix")
            return validate_topology(m) if m is not None else None
        if kind == "file":
            path = Path(str(section["file"]))
            return load_topology(path if path.is_absolute() else base_dir / path)
        if section["fixture"] != "canonical8":
            reader.add("InvariantViolation", "topology.fixture", "unknown fixture")
            return None
        return canonical_fixture()
    except (PinsyncError, ValueError, OSError) as e:
        reader.add("InvariantViolation", f"topology.{kind}", str(e))
        return None


def _read_dynamics(reader: _Reader, data: Mapping[str, Any]) -> Optional[NodeDynamics]:
    section = reader.section(data, "dynamics", "dynamics")
    if section is None:
        if "dynamics" not in data:
            reader.add("MissingField", "dynamics", "required field")
        return None
    reader.unknown(section, {"kind", "matrix", "dim", "gamma"}, "dynamics")
    kind = section.get("kind")
    params: dict[str, Any] = {}
    if "gamma" in section:
        gamma = reader.number(section, "gamma", "dynamics", nonnegative=True)
        if gamma is None:
            return None
        params["gamma"] = gamma
    if kind == "linear":
        if "matrix" not in section:
            reader.add("MissingField", "dynamics.matrix", "required field")
            return None
        m = reader.matrix(section["matrix"], "dynamics.matrix")
        if m is None:
            return None
        params["matrix"] = m
    elif kind == "zero":
        dim = reader.integer(section, "dim", "dynamics", 3)
        if dim is None:
            return None
        params["dim"] = dim
        params.pop("gamma", None)
    elif kind is None:
        reader.add("MissingField", "dynamics.kind", "required field")
        return None
    try:
        return get_dynamics(str(kind), **params)
    except (PinsyncError, ValueError, TypeError) as e:
        reader.add("InvariantViolation", "dynamics", str(e))
        return None


def _read_inner(
    reader: _Reader, data: Mapping[str, Any], dim: int
) -> Optional[InnerCoupling]:
    value = data.get("inner_coupling")
    try:
        if value is None:
            return InnerCoupling.identity(dim)
        if isinstance(value, dict):
            reader.unknown(value, {"diag"}, "inner_coupling")
            diag = reader.vector(value.get("diag"), "inner_coupling.diag")
            return InnerCoupling.diagonal(diag) if diag is not None else None
        m = reader.matrix(value, "inner_coupling")
        return InnerCoupling(m) if m is not None else None
    except (PinsyncError, ValueError) as e:
        reader.add("InvariantViolation", "inner_coupling", str(e))
        return None


def _read_pins(
    reader: _Reader,
    data: Mapping[str, Any],
    topology: Topology,
    gamma: float,
    design_c: Optional[float],
) -> Optional[PinSet]:
    value = data.get("pins", "auto")
    if value == "auto":
        if design_c is None:
            reader.add(
                "MissingField",
                "coupling.design_c",
                "automatic pin selection under an adaptive policy needs design_c",
            )
            return None
        pins, _ = select_pinned_nodes(topology, gamma, design_c)
        logger.debug("Selected pins %s for c=%s", list(pins), design_c)
        return pins
    if not isinstance(value, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in value
    ):
        reader.add(
            "InvariantViolation", "pins", "must be 'auto' or a list of node indices"
        )
        return None
    try:
        pins = PinSet.of(value)
        pins.check_for(topology.n_nodes)
    except (PinsyncError, ValueError, IndexError) as e:
        reader.add("InvariantViolation", "pins", str(e))
        return None
    return pins


@dataclass(frozen=True)
class _CouplingBlock:
    policy: str
    c: Optional[float] = None
    c0: float = 0.0
    zeta: float = 0.0
    cap: Optional[float] = None
    margin: Optional[float] = None
    design_c: Optional[float] = None


def _read_coupling(
    reader: _Reader, data: Mapping[str, Any]
) -> Optional[_CouplingBlock]:
    section = reader.section(data, "coupling", "coupling")
    if section is None:
        if "coupling" not in data:
            reader.add("MissingField", "coupling", "required field")
        return None
    policy = section.get("policy", "fixed")
    allowed = {
        "fixed": {"policy", "c"},
        "adaptive": {"policy", "c0", "zeta", "design_c"},
        "saturated": {"policy", "c0", "zeta", "cap", "margin", "design_c"},
    }
    if policy not in allowed:
        reader.add(
            "InvariantViolation",
            "coupling.policy",
            "must be one of fixed, adaptive, saturated",
        )
        return None
    before = len(reader.issues)
    reader.unknown(section, allowed[policy], "coupling")

    if policy == "fixed":
        c = reader.number(section, "c", "coupling", positive=True)
        return _CouplingBlock(policy, c=c, design_c=c) if c is not None else None

    c0 = reader.number(section, "c0", "coupling", nonnegative=True)
    zeta = reader.number(section, "zeta", "coupling", positive=True)
    design_c = None
    if "design_c" in section:
        design_c = reader.number(section, "design_c", "coupling", positive=True)
    cap = margin = None
    if policy == "saturated":
        has_cap, has_margin = "cap" in section, "margin" in section
        if has_cap == has_margin:
            reader.add(
                "InvariantViolation" if has_cap else "MissingField",
                "coupling.cap",
                "exactly one of cap or margin is required",
            )
        elif has_cap:
            cap = reader.number(section, "cap", "coupling", positive=True)
        else:
            margin = reader.number(section, "margin", "coupling", positive=True)

    if len(reader.issues) > before or c0 is None or zeta is None:
        return None
    if design_c is None and c0 > 0:
        design_c = c0
    return _CouplingBlock(
        policy, c0=c0, zeta=zeta, cap=cap, margin=margin, design_c=design_c
    )


def _build_policy(
    reader: _Reader,
    block: _CouplingBlock,
    topology: Topology,
    gamma: float,
    pins: PinSet,
) -> Optional[CouplingPolicy]:
    try:
        if block.policy == "fixed" and block.c is not None:
            return FixedCoupling(block.c)
        if block.policy == "adaptive":
            return AdaptiveCoupling(block.c0, block.zeta)
        cap = block.cap
        if cap is None and block.margin is not None:
            cap = saturation_cap(gamma, topology, pins, block.margin)
        if cap is None:
            return None
        return SaturatedAdaptiveCoupling(block.c0, block.zeta, cap)
    except (PinsyncError, ValueError) as e:
        reader.add("InvariantViolation", "coupling", str(e))
        return None


def _read_triggers(
    reader: _Reader, data: Mapping[str, Any], pins: PinSet, n_nodes: int
) -> dict[int, TriggerSpec]:
    default = reader.section(data, "default_trigger", "default_trigger") or {}
    reader.unknown(default, _TRIGGER_KEYS, "default_trigger")
    table = reader.section(data, "triggers", "triggers") or {}

    blocks: dict[int, dict[str, Any]] = {}
    for key, block in table.items():
        path = f"triggers.{key}"
        try:
            node = int(key)
        except ValueError:
            reader.add("InvariantViolation", path, "key must be a node index")
            continue
        if not 0 <= node < n_nodes:
            reader.add(
                "InvariantViolation", path, f"node index out of range [0, {n_nodes})"
            )
            continue
        if not isinstance(block, dict):
            reader.add("InvariantViolation", path, "must be a table")
            continue
        reader.unknown(block, _TRIGGER_KEYS, path)
        if node not in pins:
            logger.debug("Ignoring trigger block of unpinned node %d", node)
            continue
        blocks[node] = block

    specs: dict[int, TriggerSpec] = {}
    for node in sorted(pins):
        block = {**default, **blocks.get(node, {})}
        path = f"triggers.{node}"
        beta = reader.number(block, "beta", path, positive=True)
        alpha = (
            reader.number(block, "alpha", path, positive=True)
            if "alpha" in block
            else None
        )
        d = None
        if "d" in block:
            d = reader.number(block, "d", path)
            if d is not None and not 0 < d < 1:
                reader.add(
                    "InvariantViolation", f"{path}.d", "must be in open interval (0,1)"
                )
                d = None
        if beta is not None:
            specs[node] = TriggerSpec(beta=beta, alpha=alpha, d=d)
    return specs


def _read_initial(
    reader: _Reader, data: Mapping[str, Any], dynamics: NodeDynamics, n_nodes: int
) -> Optional[InitialStateSpec]:
    section = reader.section(data, "initial_states", "initial_states") or {}
    reader.unknown(section, {"seed", "low", "high", "x", "z"}, "initial_states")
    seed = reader.integer(section, "seed", "initial_states", 0)
    if seed is not None and seed < 0:
        reader.add("InvariantViolation", "initial_states.seed", "must be nonnegative")
        seed = None
    dim = dynamics.dim

    x = None
    if "x" in section:
        if "low" in section or "high" in section:
            reader.add(
                "InvariantViolation",
                "initial_states",
                "give either literal x or a low/high range, not both",
            )
            return None
        x = reader.matrix(section["x"], "initial_states.x")
        if x is not None and x.shape != (n_nodes, dim):
            reader.add(
                "InvariantViolation",
                "initial_states.x",
                f"must have shape ({n_nodes}, {dim})",
            )
            x = None
    low = reader.number(section, "low", "initial_states", -1.0)
    high = reader.number(section, "high", "initial_states", 1.0)
    if low is not None and high is not None and not low < high:
        reader.add("InvariantViolation", "initial_states", "low must be below high")

    if "z" in section:
        z = reader.vector(section["z"], "initial_states.z")
        if z is not None and z.shape != (dim,):
            reader.add(
                "InvariantViolation", "initial_states.z", f"must have {dim} entries"
            )
            z = None
    elif isinstance(dynamics, ChenDynamics):
        z = np.array(CHEN_DEFAULT_Z)
    else:
        z = np.zeros(dim)

    if seed is None or low is None or high is None or z is None:
        return None
    if "x" in section and x is None:
        return None
    return InitialStateSpec(seed=seed, low=low, high=high, x=x, z=z)


def parse_config(
    text: str,
    fmt: str = "json",
    base_dir: Optional[Path] = None,
) -> RunConfig:
    """Parse and validate a configuration document.

    Args:
        text: Document text.
        fmt: ``json`` or ``toml``.
        base_dir: Directory that relative topology file paths resolve
            against; defaults to the working directory.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: Listing every problem found, with field paths.
    """
    data = _decode(text, fmt)
    reader = _Reader()
    reader.unknown(data, _TOP_KEYS, "")

    topology = _read_topology(reader, data, base_dir or Path.cwd())
    dynamics = _read_dynamics(reader, data)
    inner = _read_inner(reader, data, dynamics.dim) if dynamics is not None else None
    if (
        isinstance(dynamics, LinearDynamics)
        and inner is not None
        and "gamma" not in data["dynamics"]
    ):
        gamma = max(0.0, dynamics.gamma_for(inner.matrix))
        dynamics = LinearDynamics(dynamics.matrix, gamma=gamma)
    block = _read_coupling(reader, data)

    sim = reader.section(data, "simulation", "simulation") or {}
    reader.unknown(sim, set(_SIMULATION_DEFAULTS), "simulation")
    times = {
        key: reader.number(sim, key, "simulation", default)
        for key, default in _SIMULATION_DEFAULTS.items()
        if key != "max_events_per_node"
    }
    max_events = reader.integer(sim, "max_events_per_node", "simulation", 1_000_000)

    bounds = reader.section(data, "bounds", "bounds") or {}
    reader.unknown(bounds, {"epsilon", "mu"}, "bounds")
    epsilon = reader.number(bounds, "epsilon", "bounds", 1.0, positive=True)
    mu = None
    if "mu" in bounds:
        mu = reader.number(bounds, "mu", "bounds", positive=True)

    assumption = reader.section(data, "assumption", "assumption") or {}
    reader.unknown(assumption, {"box", "samples", "seed"}, "assumption")
    box = None
    if "box" in assumption:
        m = reader.matrix(assumption["box"], "assumption.box")
        if m is not None and m.shape[1] != 2:
            reader.add(
                "InvariantViolation", "assumption.box", "rows must be [low, high]"
            )
        elif m is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in m)
    samples = reader.integer(assumption, "samples", "assumption", 100_000)
    assumption_seed = reader.integer(assumption, "seed", "assumption", 42)

    alpha_factor = reader.number(data, "alpha_factor", "", 1.01, positive=True)
    output = data.get("output", "runs")
    if not isinstance(output, str):
        reader.add("InvariantViolation", "output", "must be a path string")

    if topology is None or dynamics is None or inner is None or block is None:
        raise ConfigError(reader.issues)

    gamma = dynamics.one_sided_gamma
    pins = _read_pins(reader, data, topology, gamma, block.design_c)
    if pins is None:
        raise ConfigError(reader.issues)

    policy = _build_policy(reader, block, topology, gamma, pins)
    triggers = _read_triggers(reader, data, pins, topology.n_nodes)
    initial = _read_initial(reader, data, dynamics, topology.n_nodes)

    network = None
    if policy is not None:
        try:
            network = NetworkSpec(topology, inner, dynamics, policy)
        except (PinsyncError, ValueError) as e:
            reader.add("InvariantViolation", "dynamics", str(e))

    if reader.issues or network is None or initial is None:
        raise ConfigError(reader.issues)

    # Every value below was validated; a None would have raised above.
    config = RunConfig(
        network=network,
        pins=pins,
        design_c=block.design_c or 0.0,
        triggers=triggers,
        alpha_factor=cast(float, alpha_factor),
        initial=initial,
        t0=cast(float, times["t0"]),
        t_end=cast(float, times["t_end"]),
        step=cast(float, times["step"]),
        event_tol=cast(float, times["event_tol"]),
        max_events_per_node=cast(int, max_events),
        epsilon=cast(float, epsilon),
        mu=mu,
        box=box,
        samples=cast(int, samples),
        assumption_seed=cast(int, assumption_seed),
        output=Path(str(output)),
    )
    issues = _check_times(config) + _check_gains(config)
    if issues:
        raise ConfigError(issues)
    return config


def _check_times(config: RunConfig) -> list[ConfigIssue]:
    issues = []
    if not config.t_end > config.t0:
        issues.append(
            ConfigIssue("InvariantViolation", "simulation.t_end", "must exceed t0")
        )
    if not 0 < config.step <= config.t_end - config.t0:
        issues.append(
            ConfigIssue(
                "InvariantViolation", "simulation.step", "must be in (0, t_end - t0]"
            )
        )
    if not 0 < config.event_tol < config.step:
        issues.append(
            ConfigIssue(
                "InvariantViolation", "simulation.event_tol", "must be in (0, step)"
            )
        )
    if config.max_events_per_node < 1:
        issues.append(
            ConfigIssue(
                "InvariantViolation",
                "simulation.max_events_per_node",
                "must be positive",
            )
        )
    return issues


def _check_gains(config: RunConfig) -> list[ConfigIssue]:
    """Reject gains whose impulse cannot clear the localization slack.

    A localized event overshoots the threshold by up to about
    ``event_tol * beta_i`` relative, so ``(1 - d_i)^2`` must stay below
    ``1 - 2 * event_tol * beta_i``.
    """
    issues = []
    for node, trig in sorted(config.triggers.items()):
        if trig.d is None:
            continue
        if (1.0 - trig.d) ** 2 >= 1.0 - 2.0 * config.event_tol * trig.beta:
            issues.append(
                ConfigIssue(
                    "InvariantViolation",
                    f"triggers.{node}.d",
                    "too small to clear the event localization tolerance",
                )
            )
    return issues


def load_config(path: Path) -> RunConfig:
    """Read and parse a configuration file.

    The format follows the suffix: ``.json`` or ``.toml``. Relative topology
    paths resolve against the file's directory.

    Raises:
        FileNotFoundError: If the file does not exist.
        ConfigError: If the document is invalid or the suffix unsupported.
    """
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    fmt = path.suffix.lower().lstrip(".")
    if fmt not in ("json", "toml"):
        raise ConfigError(
            [
                ConfigIssue(
                    "SyntaxError", str(path), "config file must end in .json or .toml"
                )
            ]
        )
    return parse_config(path.read_text(encoding="utf-8"), fmt, path.parent)


def realize(config: RunConfig, seed: Optional[int] = None) -> SimConfig:
    """Draw the random parts of a run and build its SimConfig.

    One generator seeded with ``seed`` (or the document's seed) first draws
    the node states uniformly on ``(low, high)`` unless they are literal,
    then one impulse gain uniformly on (0, 1) per pinned node without a
    declared gain, in ascending node order. Open alpha_i become
    ``alpha_factor * V_i(t0)``.

    Args:
        config: Parsed configuration.
        seed: Seed overriding the document's.

    Returns:
        The simulation configuration.

    Raises:
        ConfigError: If an open alpha_i would be zero.
    """
    spec = config.network
    rng = np.random.default_rng(config.initial.seed if seed is None else seed)
    if config.initial.x is None:
        x0 = rng.uniform(
            config.initial.low, config.initial.high, size=(spec.n_nodes, spec.dim)
        )
    else:
        x0 = config.initial.x
    z0 = config.initial.z

    triggers: dict[int, NodeTrigger] = {}
    issues: list[ConfigIssue] = []
    for node in sorted(config.pins):
        partial = config.triggers[node]
        d = partial.d
        if d is None:
            d = float(rng.uniform(np.nextafter(0.0, 1.0), 1.0))
        alpha = partial.alpha
        if alpha is None:
            alpha = config.alpha_factor * float(np.sum((x0[node] - z0) ** 2))
            if not alpha > 0:
                issues.append(
                    ConfigIssue(
                        "InvariantViolation",
                        f"triggers.{node}.alpha",
                        "V_i(t0) is zero; alpha must be given explicitly",
                    )
                )
                continue
        triggers[node] = NodeTrigger(alpha=alpha, beta=partial.beta, d=d)
    if issues:
        raise ConfigError(issues)

    return SimConfig(
        spec=spec,
        pins=config.pins,
        triggers=TriggerParams(triggers),
        t0=config.t0,
        t_end=config.t_end,
        step=config.step,
        initial_states=x0,
        initial_isolated=z0,
        event_tol=config.event_tol,
        max_events_per_node=config.max_events_per_node,
    )
