"""Tests for atomic report writing."""

from unittest.mock import patch

import pytest

from pinsync.reporters.csv import KeyValueReporter


def test_write_replaces_existing_file(tmp_path):
    path = tmp_path / "summary.csv"
    path.write_text("stale\n")

    KeyValueReporter().write([("seed", 3)], path)

    assert path.read_text() == "key,value\nseed,3\n"
    assert [p.name for p in tmp_path.iterdir()] == ["summary.csv"]


def test_failed_replace_keeps_old_content(tmp_path):
    """Test that a failed write leaves neither a partial file nor a temp file."""
    path = tmp_path / "summary.csv"
    path.write_text("previous\n")

    with patch("pinsync.reporters.base.os.replace", side_effect=OSError("disk")):
        with pytest.raises(OSError, match="disk"):
            KeyValueReporter().write([("seed", 3)], path)

    assert path.read_text() == "previous\n"
    assert [p.name for p in tmp_path.iterdir()] == ["summary.csv"]
