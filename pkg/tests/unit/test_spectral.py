"""Tests for the spectral condition, eigensolver and pin selection."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pinsync.errors import (
    AllNodesPinnedError,
    EmptyMatrixError,
    NotSymmetricError,
    PreconditionViolationError,
)
from pinsync.models import PinSet
from pinsync.spectral import (
    REFERENCE_C,
    REFERENCE_GAMMA,
    REFERENCE_THRESHOLDS,
    check_sync_condition,
    jacobi_eigenvalues,
    lambda_max_symmetric,
    min_coupling_strength,
    reduced_matrix,
    saturation_cap,
    select_pinned_nodes,
)
from pinsync.topology import from_adjacency, from_edges, validate_topology

GOLDEN = (math.sqrt(5.0) - 3.0) / 2.0


def _closed_form_lambda_max(m: np.ndarray) -> float:
    """Largest eigenvalue of a symmetric matrix of size 1 to 3."""
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    if n == 2:
        a, b, d = m[0, 0], m[0, 1], m[1, 1]
        return float((a + d) / 2 + math.hypot((a - d) / 2, b))
    q = float(np.trace(m)) / 3.0
    off = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    p2 = float(np.sum((np.diag(m) - q) ** 2)) + 2.0 * off
    if p2 == 0.0:
        return q
    p = math.sqrt(p2 / 6.0)
    r = float(np.linalg.det((m - q * np.eye(3)) / p)) / 2.0
    phi = math.acos(min(1.0, max(-1.0, r))) / 3.0
    return q + 2.0 * p * math.cos(phi)


def _pivot_jacobi_lambda_max(m: np.ndarray) -> float:
    """Largest eigenvalue by classical largest-pivot Jacobi rotations."""
    a = m.astype(float).copy()
    n = a.shape[0]
    for _ in range(100 * n * n):
        off = np.abs(a - np.diag(np.diag(a)))
        p, q = np.unravel_index(np.argmax(off), off.shape)
        if off[p, q] < 1e-12:
            break
        phi = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
        rot = np.eye(n)
        rot[p, p] = rot[q, q] = math.cos(phi)
        rot[p, q] = math.sin(phi)
        rot[q, p] = -math.sin(phi)
        a = rot.T @ a @ rot
    return float(np.max(np.diag(a)))


def _random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    m = rng.uniform(-5.0, 5.0, size=(n, n))
    return (m + m.T) / 2.0


def _random_topology(rng: np.random.Generator, n: int):
    weights = rng.uniform(0.1, 2.0, size=(n, n))
    mask = rng.random((n, n)) < 0.6
    adjacency = np.triu(weights * mask, 1)
    return from_adjacency(adjacency + adjacency.T)


def _random_connected_topology(rng: np.random.Generator, n: int):
    """Random spanning tree plus extra edges, unit weights."""
    order = [int(i) for i in rng.permutation(n)]
    edges = {
        (order[k], order[int(rng.integers(0, k))]) for k in range(1, n)
    }
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                edges.add((i, j))
    return from_edges(n, edges)


class TestReducedMatrix:
    """Tests for reduced_matrix."""

    def test_delete_first_node(self, path_topology):
        np.testing.assert_array_equal(
            reduced_matrix(path_topology, PinSet.of([0])), [[-2, 1], [1, -1]]
        )

    def test_single_unpinned_node(self, path_topology):
        np.testing.assert_array_equal(
            reduced_matrix(path_topology, PinSet.of([2, 0])), [[-2]]
        )

    def test_no_pins(self, path_topology):
        np.testing.assert_array_equal(
            reduced_matrix(path_topology, PinSet()), path_topology.entries
        )

    def test_all_pinned(self, path_topology):
        with pytest.raises(AllNodesPinnedError):
            reduced_matrix(path_topology, PinSet.of([0, 1, 2]))


class TestLambdaMaxSymmetric:
    """Tests for the Jacobi eigensolver."""

    def test_two_by_two(self):
        assert lambda_max_symmetric([[-2, 1], [1, -1]]) == pytest.approx(
            GOLDEN, abs=1e-12
        )

    def test_diagonal(self):
        assert lambda_max_symmetric(np.diag([-1.0, -3.0])) == -1.0

    def test_one_by_one(self):
        assert lambda_max_symmetric([[0.0]]) == 0.0

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetricError):
            lambda_max_symmetric([[0.0, 1.0], [1.0 + 1e-9, 0.0]])

    def test_symmetry_tolerance(self):
        """Test that asymmetry below 1e-10 is accepted."""
        lambda_max_symmetric([[0.0, 1.0], [1.0 + 1e-12, 0.0]])

    def test_empty(self):
        with pytest.raises(EmptyMatrixError):
            lambda_max_symmetric(np.zeros((0, 0)))

    def test_all_eigenvalues_sorted(self):
        eigs = jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0]))
        np.testing.assert_array_equal(eigs, [-1.0, 2.0, 3.0])

    def test_subnormal_off_diagonal(self):
        """Test that negligible off-diagonal entries are dropped without overflow."""
        m = np.array([[1.0, 1e-310, 0.0], [1e-310, 2.0, 0.5], [0.0, 0.5, -1.0]])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            eigs = jacobi_eigenvalues(m)
        assert eigs[-1] == pytest.approx(_closed_form_lambda_max(m), abs=1e-12)

    def test_matches_oracles_on_random_matrices(self):
        """Test 1000 seeded matrices against closed forms and pivot Jacobi."""
        rng = np.random.default_rng(20240101)
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            m = _random_symmetric(rng, n)
            if n <= 3:
                expected = _closed_form_lambda_max(m)
            else:
                expected = _pivot_jacobi_lambda_max(m)
            assert lambda_max_symmetric(m) == pytest.approx(expected, abs=1e-8)

    @settings(max_examples=60, deadline=None)
    @given(
        arrays(
            np.float64,
            st.integers(1, 8).map(lambda n: (n, n)),
            elements=st.floats(-10, 10, allow_nan=False),
        ),
        st.floats(-50, 50, allow_nan=False),
    )
    def test_shift(self, raw, shift):
        """Test lambda_max(m + sI) = lambda_max(m) + s."""
        m = (raw + raw.T) / 2.0
        shifted = m + shift * np.eye(m.shape[0])
        assert lambda_max_symmetric(shifted) == pytest.approx(
            lambda_max_symmetric(m) + shift, abs=1e-8
        )


class TestCheckSyncCondition:
    """Tests for check_sync_condition."""

    def test_not_satisfied_below_threshold(self, path_topology):
        report = check_sync_condition(1.0, 2.0, path_topology, PinSet.of([0]))
        assert report.lambda_max_abar == pytest.approx(GOLDEN, abs=1e-12)
        assert not report.satisfied

    def test_satisfied_above_threshold(self, path_topology):
        report = check_sync_condition(1.0, 3.0, path_topology, PinSet.of([0]))
        assert report.satisfied
        assert report.min_coupling == pytest.approx(2.6180340, abs=1e-6)

    def test_all_pinned(self, path_topology):
        """Test that pinning every node needs no topology condition."""
        report = check_sync_condition(
            30.0, 0.1, path_topology, PinSet.of([0, 1, 2])
        )
        assert report.satisfied
        assert report.all_pinned
        assert report.min_coupling == 0.0

    def test_no_pins_on_connected_network(self, fixture_topology):
        """Test that the unreduced coupling matrix has eigenvalue zero."""
        report = check_sync_condition(REFERENCE_GAMMA, 8.0, fixture_topology, PinSet())
        assert report.lambda_max_abar == 0.0
        assert report.min_coupling == math.inf
        assert not report.satisfied

    @pytest.mark.parametrize("gamma", [0.0, REFERENCE_GAMMA])
    def test_no_pins_on_random_connected_networks(self, gamma):
        """Test that round-off in the zero eigenvalue never passes the check."""
        rng = np.random.default_rng(2024)
        for _ in range(120):
            topology = _random_connected_topology(rng, int(rng.integers(3, 9)))
            report = check_sync_condition(gamma, 8.0, topology, PinSet())
            assert report.lambda_max_abar == 0.0
            assert report.min_coupling == math.inf
            assert not report.satisfied

    def test_published_threshold(self):
        """Test the threshold arithmetic for lambda_max = -4.28."""
        assert min_coupling_strength(REFERENCE_GAMMA, -4.28) == pytest.approx(
            7.2276, abs=5e-5
        )
        assert REFERENCE_GAMMA + REFERENCE_C * -4.28 < 0
        assert REFERENCE_GAMMA + 7.0 * -4.28 > 0

    @pytest.mark.parametrize("row", REFERENCE_THRESHOLDS, ids=lambda r: r.nodes)
    def test_reference_rows(self, row):
        assert min_coupling_strength(REFERENCE_GAMMA, row.lambda_max) == (
            pytest.approx(row.min_coupling, rel=1e-4)
        )
        satisfied = REFERENCE_GAMMA + REFERENCE_C * row.lambda_max < 0
        assert satisfied == row.satisfied

    def test_min_coupling_sentinels(self):
        assert min_coupling_strength(1.0, -math.inf) == 0.0
        assert min_coupling_strength(1.0, 0.0) == math.inf
        assert min_coupling_strength(1.0, 0.5) == math.inf
        assert min_coupling_strength(1.0, -1e-16) == math.inf
        assert min_coupling_strength(1.0, -1e-8, scale=100.0) == math.inf
        assert min_coupling_strength(1.0, -1e-8) == pytest.approx(1e8)

    def test_monotone_in_c(self, fixture_topology):
        """Test that a satisfied condition stays satisfied for larger c."""
        pins = PinSet.of([0, 7, 2, 4, 5])
        first = None
        for c in np.linspace(0.5, 20.0, 40):
            report = check_sync_condition(REFERENCE_GAMMA, c, fixture_topology, pins)
            if report.satisfied and first is None:
                first = c
            if first is not None:
                assert report.satisfied
        assert first is not None

    def test_interlacing_on_random_topologies(self):
        """Test that enlarging the pin set never raises lambda_max."""
        rng = np.random.default_rng(99)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            topology = _random_topology(rng, n)
            order = [int(i) for i in rng.permutation(n)]
            small = int(rng.integers(0, n - 1))
            large = int(rng.integers(small + 1, n))
            lam_small = check_sync_condition(
                1.0, 1.0, topology, PinSet.of(order[:small])
            ).lambda_max_abar
            lam_large = check_sync_condition(
                1.0, 1.0, topology, PinSet.of(order[:large])
            ).lambda_max_abar
            assert lam_large <= lam_small + 1e-10


class TestSelectPinnedNodes:
    """Tests for the greedy pin selection."""

    def test_path_graph_picks_hub(self, path_topology):
        """Test that the largest-degree node is added first."""
        pins, trail = select_pinned_nodes(path_topology, 1.0, 3.0)
        assert pins.pinned == (1,)
        assert len(trail) == 2
        assert trail[0].pins.l == 0
        assert not trail[0].satisfied
        assert trail[1].satisfied
        assert trail[1].lambda_max_abar == pytest.approx(-1.0, abs=1e-12)

    def test_all_nodes_mandatory(self):
        """Test that low-degree nodes are all pinned up front."""
        topology = validate_topology([[-1, 1], [1, -1]])
        pins, trail = select_pinned_nodes(topology, 10.0, 1.0)
        assert sorted(pins) == [0, 1]
        assert len(trail) == 1
        assert trail[0].all_pinned

    def test_fixture_network(self, fixture_topology):
        """Test the selection trail on the canonical network."""
        pins, trail = select_pinned_nodes(fixture_topology, REFERENCE_GAMMA, 8.0)
        assert pins.pinned == (0, 7, 2, 4, 5)
        assert [r.pins.l for r in trail] == [1, 2, 3, 4, 5]
        assert [r.satisfied for r in trail] == [False] * 4 + [True]
        assert trail[-1].lambda_max_abar == pytest.approx(-4.0, abs=1e-9)
        assert trail[-1].min_coupling == pytest.approx(REFERENCE_GAMMA / 4.0)

    def test_zero_gamma_on_connected_network(self, fixture_topology):
        """Test that an empty mandatory set still needs a pinned node."""
        pins, trail = select_pinned_nodes(fixture_topology, 0.0, 8.0)
        assert trail[0].pins.l == 0
        assert not trail[0].satisfied
        assert pins.pinned == (7,)
        assert trail[-1].satisfied

    def test_deterministic(self, fixture_topology):
        first = select_pinned_nodes(fixture_topology, REFERENCE_GAMMA, 8.0)
        second = select_pinned_nodes(fixture_topology, REFERENCE_GAMMA, 8.0)
        assert first[0] == second[0]

    def test_rejects_nonpositive_c(self, path_topology):
        with pytest.raises(ValueError):
            select_pinned_nodes(path_topology, 1.0, 0.0)


class TestSaturationCap:
    """Tests for the adaptive coupling cap."""

    def test_cap(self, path_topology):
        cap = saturation_cap(1.0, path_topology, PinSet.of([1]), 0.01)
        assert cap == pytest.approx(1.01)

    def test_margin_must_be_positive(self, path_topology):
        with pytest.raises(PreconditionViolationError):
            saturation_cap(1.0, path_topology, PinSet.of([1]), 0.0)

    def test_no_finite_threshold(self):
        """Test a pin set that leaves an isolated unpinned node."""
        topology = validate_topology([[-1, 1, 0], [1, -1, 0], [0, 0, 0]])
        with pytest.raises(PreconditionViolationError):
            saturation_cap(1.0, topology, PinSet.of([0]), 0.1)
