"""End-to-end tests for the pinsync command line."""

import json
import math

import pytest
from typer.testing import CliRunner

from pinsync.cli import app
from pinsync.reporters.csv import read_events, read_key_values

runner = CliRunner()

RUN_FILES = ("trace.csv", "events.csv", "summary.csv")


def _write_config(tmp_path, fixtures_dir, **overrides):
    """Write a variant of the path-graph check config and return its path."""
    data = json.loads((fixtures_dir / "path_check.json").read_text())
    data["topology"] = {"file": str(fixtures_dir / "path3.txt")}
    data.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return path


class TestCheck:
    """Tests for the check command."""

    def test_satisfied(self, tmp_path, fixtures_dir):
        result = runner.invoke(
            app,
            ["check", "-c", str(fixtures_dir / "path_check.json"), "-o", str(tmp_path)],
        )

        assert result.exit_code == 0
        assert "Synchronization condition satisfied" in result.output
        lines = (tmp_path / "condition.csv").read_text().splitlines()
        assert lines[0] == "pins,l,gamma,c,lambda_max,min_coupling,satisfied"
        assert lines[1].endswith(",True")

    def test_not_satisfied(self, tmp_path, fixtures_dir):
        config = _write_config(tmp_path, fixtures_dir, coupling={"c": 2.0})

        result = runner.invoke(app, ["check", "-c", str(config), "-o", str(tmp_path)])

        assert result.exit_code == 2
        assert "not satisfied" in result.output

    def test_invalid_config(self, tmp_path, fixtures_dir):
        config = _write_config(
            tmp_path, fixtures_dir, default_trigger={"beta": 1.0, "d": 1.0}
        )

        result = runner.invoke(app, ["check", "-c", str(config), "-o", str(tmp_path)])

        assert result.exit_code == 1
        assert "invalid configuration" in result.output
        assert "triggers.0.d" in result.output
        assert not (tmp_path / "condition.csv").exists()

    def test_adaptive_without_design_c(self, tmp_path, fixtures_dir):
        """Test that a zero starting coupling cannot be checked."""
        config = _write_config(
            tmp_path,
            fixtures_dir,
            coupling={"policy": "adaptive", "c0": 0.0, "zeta": 1.0},
        )

        result = runner.invoke(app, ["check", "-c", str(config), "-o", str(tmp_path)])

        assert result.exit_code == 1
        assert "coupling.design_c" in result.output
        assert not (tmp_path / "condition.csv").exists()

    def test_missing_config_file(self, tmp_path):
        result = runner.invoke(app, ["check", "-c", str(tmp_path / "absent.json")])

        assert result.exit_code != 0


class TestSelect:
    """Tests for the select command."""

    def test_writes_trail_and_markdown(self, tmp_path, fixtures_dir):
        markdown = tmp_path / "selection.md"

        result = runner.invoke(
            app,
            [
                "select",
                "-c",
                str(fixtures_dir / "chen_fixed.json"),
                "-o",
                str(tmp_path),
                "--markdown",
                str(markdown),
            ],
        )

        assert result.exit_code == 0
        assert "Pinned nodes: 0,2,4,5,7" in result.output
        assert "Generated:" in result.output
        trail = (tmp_path / "selection.csv").read_text().splitlines()
        assert len(trail) == 6
        assert "| 5 | 1,3,5,6,8 |" in markdown.read_text()

    def test_custom_template(self, tmp_path, fixtures_dir):
        template = tmp_path / "short.md.j2"
        template.write_text("{{ final_nodes }}\n")
        markdown = tmp_path / "selection.md"

        result = runner.invoke(
            app,
            [
                "select",
                "-c",
                str(fixtures_dir / "path_check.json"),
                "-o",
                str(tmp_path),
                "--markdown",
                str(markdown),
                "--template",
                str(template),
            ],
        )

        assert result.exit_code == 0
        assert markdown.read_text() == "2"


class TestSimulate:
    """Tests for the simulate command."""

    def test_single_node_events(self, tmp_path, fixtures_dir):
        result = runner.invoke(
            app,
            ["simulate", "-c", str(fixtures_dir / "single_node.json")]
            + ["-o", str(tmp_path)],
        )

        assert result.exit_code == 0
        for name in RUN_FILES:
            assert (tmp_path / name).exists()
        times = [r.t for r in read_events(tmp_path / "events.csv")]
        expected = [k * math.log(4) for k in (1, 2, 3)]
        assert times == pytest.approx(expected, abs=1e-6)
        summary = read_key_values(tmp_path / "summary.csv")
        assert summary["events_total"] == "3"

    def test_byte_identical_reruns(self, tmp_path, fixtures_dir):
        """Test that the same config and seed reproduce every output byte."""
        config = str(fixtures_dir / "chen_fixed.toml")
        first, second = tmp_path / "first", tmp_path / "second"

        for out in (first, second):
            result = runner.invoke(app, ["simulate", "-c", config, "-o", str(out)])
            assert result.exit_code == 0

        for name in RUN_FILES:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_seed_override(self, tmp_path, fixtures_dir):
        config = str(fixtures_dir / "chen_fixed.toml")
        base, other = tmp_path / "base", tmp_path / "other"

        runner.invoke(app, ["simulate", "-c", config, "-o", str(base)])
        result = runner.invoke(
            app, ["simulate", "-c", config, "-o", str(other), "--seed", "8"]
        )

        assert result.exit_code == 0
        assert read_key_values(other / "summary.csv")["seed"] == "8"
        assert (base / "trace.csv").read_bytes() != (other / "trace.csv").read_bytes()


class TestBounds:
    """Tests for the bounds command."""

    def test_after_simulate(self, tmp_path, fixtures_dir):
        config = str(fixtures_dir / "chen_fixed.toml")
        runner.invoke(app, ["simulate", "-c", config, "-o", str(tmp_path)])

        result = runner.invoke(app, ["bounds", "-c", config, "-o", str(tmp_path)])

        assert result.exit_code == 0
        assert "respect the bound" in result.output
        summary = read_key_values(tmp_path / "bounds_summary.csv")
        assert summary["sound"] == "true"
        assert summary["isolated"] == ""
        header = (tmp_path / "bounds.csv").read_text().splitlines()[0]
        assert header == "node,k,t,T_k,gap,holds"

    def test_isolated_node_reported(self, tmp_path, fixtures_dir):
        config = str(fixtures_dir / "single_node.json")
        runner.invoke(app, ["simulate", "-c", config, "-o", str(tmp_path)])

        result = runner.invoke(app, ["bounds", "-c", config, "-o", str(tmp_path)])

        assert result.exit_code == 0
        assert "Pinned node 0 is isolated" in result.output

    def test_without_run_artifacts(self, tmp_path, fixtures_dir):
        result = runner.invoke(
            app,
            ["bounds", "-c", str(fixtures_dir / "single_node.json")]
            + ["-o", str(tmp_path)],
        )

        assert result.exit_code == 1
        assert "not found" in result.output

    def test_malformed_summary(self, tmp_path, fixtures_dir):
        config = str(fixtures_dir / "single_node.json")
        runner.invoke(app, ["simulate", "-c", config, "-o", str(tmp_path)])
        (tmp_path / "summary.csv").write_text("a,b\n1,2\n")

        result = runner.invoke(app, ["bounds", "-c", config, "-o", str(tmp_path)])

        assert result.exit_code == 1
        assert isinstance(result.exception, SystemExit)
        assert "Error:" in result.output


class TestVerifyAssumption:
    """Tests for the verify-assumption command."""

    def test_chen_box(self, tmp_path, fixtures_dir):
        result = runner.invoke(
            app,
            [
                "verify-assumption",
                "-c",
                str(fixtures_dir / "chen_fixed.json"),
                "-o",
                str(tmp_path),
            ],
        )

        assert result.exit_code == 0
        values = read_key_values(tmp_path / "assumption.csv")
        assert values["samples"] == "2000"
        assert values["seed"] == "42"
        assert math.isfinite(float(values["gamma_hat"]))

    def test_requires_box(self, tmp_path, fixtures_dir):
        result = runner.invoke(
            app,
            [
                "verify-assumption",
                "-c",
                str(fixtures_dir / "path_check.json"),
                "-o",
                str(tmp_path),
            ],
        )

        assert result.exit_code == 1
        assert "assumption.box" in result.output
