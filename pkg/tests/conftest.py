"""Pytest configuration and shared fixtures for pinsync tests."""

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from pinsync.config import RunConfig, load_config, realize
from pinsync.dynamics import ChenDynamics, ZeroDynamics
from pinsync.models import (
    EventLog,
    FixedCoupling,
    HybridTrace,
    InnerCoupling,
    NetworkSpec,
    NodeTrigger,
    PinSet,
    SimConfig,
    Topology,
    TriggerParams,
)
from pinsync.simulator import simulate
from pinsync.topology import canonical_fixture, validate_topology

# Path to test fixtures directory
FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    """Return path to the fixtures directory."""
    return FIXTURES_DIR


@pytest.fixture
def path_topology() -> Topology:
    """Return the 3-node path graph 0-1-2."""
    return validate_topology([[-1, 1, 0], [1, -2, 1], [0, 1, -1]])


@pytest.fixture
def fixture_topology() -> Topology:
    """Return the canonical 8-node network."""
    return canonical_fixture()


@pytest.fixture
def single_node_config() -> SimConfig:
    """Return the one-node, zero-dynamics run with closed-form event times."""
    spec = NetworkSpec(
        topology=validate_topology([[0.0]]),
        inner=InnerCoupling.identity(3),
        dynamics=ZeroDynamics(3),
        coupling=FixedCoupling(1.0),
    )
    return SimConfig(
        spec=spec,
        pins=PinSet.of([0]),
        triggers=TriggerParams({0: NodeTrigger(alpha=1.0, beta=1.0, d=0.5)}),
        t0=0.0,
        t_end=5.0,
        step=1e-3,
        initial_states=np.array([[0.5, 0.0, 0.0]]),
        initial_isolated=np.zeros(3),
    )


@pytest.fixture
def chen_spec(fixture_topology: Topology) -> NetworkSpec:
    """Return the Chen network on the canonical topology with c = 8."""
    return NetworkSpec(
        topology=fixture_topology,
        inner=InnerCoupling.diagonal([1.0, 2.0, 1.0]),
        dynamics=ChenDynamics(),
        coupling=FixedCoupling(8.0),
    )


@pytest.fixture(scope="session")
def chen_run_config() -> RunConfig:
    """Return the parsed 20-time-unit Chen fixture configuration."""
    return load_config(FIXTURES_DIR / "chen_fixed.json")


@pytest.fixture(scope="session")
def chen_sim_config(chen_run_config: RunConfig) -> SimConfig:
    """Return the realized Chen fixture run."""
    return realize(chen_run_config)


@pytest.fixture(scope="session")
def chen_run(chen_sim_config: SimConfig) -> tuple[HybridTrace, EventLog]:
    """Simulate the Chen fixture once per session."""
    return simulate(chen_sim_config)


@pytest.fixture
def short_chen_config(chen_sim_config: SimConfig) -> SimConfig:
    """Return the Chen fixture cut to one time unit."""
    return replace(chen_sim_config, t_end=1.0)
