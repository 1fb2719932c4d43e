"""Tests for the CSV reporters and readers."""

import math

import numpy as np
import pytest

from pinsync.bounds import bound_report, zeno_diagnostics
from pinsync.errors import MissingRunArtifactsError
from pinsync.models import EventLog, EventRecord, PinSet
from pinsync.reporters.csv import (
    BoundsReporter,
    ConditionReporter,
    EventsReporter,
    KeyValueReporter,
    SelectionReporter,
    TraceReporter,
    bound_summary,
    format_value,
    read_events,
    read_key_values,
    read_trace,
    run_summary,
)
from pinsync.simulator import simulate
from pinsync.spectral import (
    REFERENCE_GAMMA,
    check_sync_condition,
    select_pinned_nodes,
)


@pytest.fixture
def single_run(single_node_config):
    """Simulate the closed-form single-node run."""
    return simulate(single_node_config)


def _header(text: str) -> list[str]:
    return text.split("\n", 1)[0].split(",")


class TestFormatValue:
    """Tests for summary value formatting."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [
            (None, ""),
            (True, "true"),
            (False, "false"),
            (5, "5"),
            (0.1, "0.10000000000000001"),
            (1 / 3, "0.33333333333333331"),
            (math.inf, "inf"),
            ("fixed", "fixed"),
        ],
    )
    def test_examples(self, value, expected):
        assert format_value(value) == expected

    def test_seventeen_digits_recover_float(self):
        value = math.log(4)
        assert float(format_value(value)) == value


class TestTraceReporter:
    """Tests for trace.csv."""

    def test_columns(self, single_run):
        trace, _ = single_run
        text = TraceReporter().render(trace)
        assert _header(text) == [
            "t", "jump", "c",
            "x_1_1", "x_1_2", "x_1_3",
            "z_1", "z_2", "z_3",
            "V_1", "V", "W",
        ]  # fmt: skip

    def test_one_line_per_row(self, single_run):
        trace, _ = single_run
        text = TraceReporter().render(trace)
        assert text.endswith("\n")
        assert text.count("\n") == len(trace) + 1

    def test_network_column_order(self, short_chen_config):
        trace, _ = simulate(short_chen_config)
        header = _header(TraceReporter().render(trace))
        assert header[3:6] == ["x_1_1", "x_1_2", "x_1_3"]
        assert header[26] == "x_8_3"
        assert header[27:30] == ["z_1", "z_2", "z_3"]
        assert header[30] == "V_1"
        assert header[-3:] == ["V_8", "V", "W"]

    def test_read_back_exactly(self, single_run, tmp_path):
        trace, _ = single_run
        path = tmp_path / "trace.csv"
        TraceReporter().write(trace, path)
        loaded = read_trace(path, n_nodes=1, dim=3)
        np.testing.assert_array_equal(loaded.t, trace.t)
        np.testing.assert_array_equal(loaded.jump, trace.jump)
        np.testing.assert_array_equal(loaded.x, trace.x)
        np.testing.assert_array_equal(loaded.v_total, trace.v_total)
        np.testing.assert_array_equal(loaded.w, trace.w)

    def test_read_wrong_shape(self, single_run, tmp_path):
        trace, _ = single_run
        path = tmp_path / "trace.csv"
        TraceReporter().write(trace, path)
        with pytest.raises(MissingRunArtifactsError, match="lacks columns"):
            read_trace(path, n_nodes=2, dim=3)


class TestEventsReporter:
    """Tests for events.csv."""

    def test_format(self):
        log = EventLog()
        log.append(EventRecord(2, 1, 0.1, 0.5, 0.125, 8.0))
        assert EventsReporter().render(log) == (
            "node,k,t,V_before,V_after,c_at_event\n"
            "2,1,0.10000000000000001,0.5,0.125,8\n"
        )

    def test_empty_log_keeps_header(self):
        assert EventsReporter().render(EventLog()) == (
            "node,k,t,V_before,V_after,c_at_event\n"
        )

    def test_read_back(self, single_run, tmp_path):
        _, log = single_run
        path = tmp_path / "events.csv"
        EventsReporter().write(log, path)
        assert read_events(path).records == log.records

    def test_read_missing(self, tmp_path):
        with pytest.raises(MissingRunArtifactsError):
            read_events(tmp_path / "events.csv")

    def test_read_foreign_table(self, tmp_path):
        path = tmp_path / "events.csv"
        path.write_text("node,t\n0,1.5\n")
        with pytest.raises(MissingRunArtifactsError, match="lacks columns"):
            read_events(path)


class TestConditionReporters:
    """Tests for condition.csv and selection.csv."""

    def test_condition_row(self, path_topology):
        report = check_sync_condition(1.0, 3.0, path_topology, PinSet.of([0]))
        text = ConditionReporter().render([report])
        header, row, _ = text.split("\n")
        assert header == "pins,l,gamma,c,lambda_max,min_coupling,satisfied"
        fields = row.split(",")
        assert fields[:4] == ["0", "1", "1", "3"]
        assert float(fields[4]) == pytest.approx((math.sqrt(5) - 3) / 2)
        assert fields[-1] == "True"

    def test_all_pinned_row(self, path_topology):
        report = check_sync_condition(1.0, 3.0, path_topology, PinSet.of([2, 0, 1]))
        row = ConditionReporter().render([report]).split("\n")[1]
        assert row == '"0,1,2",3,1,3,-inf,0,True'

    def test_selection_trail(self, fixture_topology):
        _, trail = select_pinned_nodes(fixture_topology, REFERENCE_GAMMA, 8.0)
        lines = SelectionReporter().render(trail).strip().split("\n")
        assert lines[0].split(",")[:2] == ["step", "pins"]
        assert len(lines) == 1 + len(trail)
        assert lines[1].startswith("0,0,1,")
        assert lines[-1].startswith('4,"0,2,4,5,7",5,')
        assert lines[-1].endswith(",True")


class TestBoundsReporter:
    """Tests for bounds.csv."""

    def test_isolated_run(self, single_node_config, single_run):
        trace, log = single_run
        report = bound_report(single_node_config, trace, log)
        lines = BoundsReporter().render(report).strip().split("\n")
        assert lines[0] == "node,k,t,T_k,gap,holds"
        assert len(lines) == 4
        # no bound for an isolated node; the last event has no gap
        assert lines[1].split(",")[3] == ""
        assert lines[3].split(",")[3:] == ["", "", ""]


class TestKeyValues:
    """Tests for summary files."""

    def test_run_summary(self, single_node_config, single_run, tmp_path):
        trace, log = single_run
        zeno = zeno_diagnostics(log, (0.0, 5.0), nodes=[0])
        rows = run_summary(single_node_config, 11, trace, log, zeno)
        path = tmp_path / "summary.csv"
        KeyValueReporter().write(rows, path)
        values = read_key_values(path)
        assert values["seed"] == "11"
        assert values["policy"] == "fixed"
        assert values["pins"] == "0"
        assert values["dynamics"] == "zero"
        assert values["events_total"] == "3"
        assert float(values["alpha_0"]) == 1.0
        assert float(values["d_0"]) == 0.5
        assert float(values["min_gap"]) == pytest.approx(math.log(4), abs=1e-6)

    def test_missing_seed_is_blank(self, single_node_config, single_run):
        trace, log = single_run
        zeno = zeno_diagnostics(log, (0.0, 5.0))
        rows = dict(run_summary(single_node_config, None, trace, log, zeno))
        text = KeyValueReporter().render([("seed", rows["seed"])])
        assert text == "key,value\nseed,\n"

    def test_bound_summary(self, single_node_config, single_run):
        trace, log = single_run
        rows = dict(bound_summary(bound_report(single_node_config, trace, log)))
        assert rows["isolated"] == "0"
        assert rows["theta"] == 0.0
        assert rows["violations"] == 0
        assert rows["sound"] is True

    def test_custom_filename(self):
        assert KeyValueReporter("assumption.csv").filename == "assumption.csv"

    def test_read_without_key_value_columns(self, tmp_path):
        path = tmp_path / "summary.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(MissingRunArtifactsError, match="lacks columns"):
            read_key_values(path)

    def test_read_empty_file(self, tmp_path):
        path = tmp_path / "summary.csv"
        path.write_text("")
        with pytest.raises(MissingRunArtifactsError, match="unreadable"):
            read_key_values(path)
