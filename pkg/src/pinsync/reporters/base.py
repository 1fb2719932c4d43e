"""Base interface for output reporters.

Reporters turn analysis and simulation results into text documents (CSV
tables, Markdown reports) and write them atomically.
"""

import os
import tempfile
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Generic, TypeVar

T = TypeVar("T")


class BaseReporter(ABC, Generic[T]):
    """Abstract base class for output reporters.

    Subclasses render one kind of result to a string; :meth:`write` stores it
    so that readers never see a partially written file.
    """

    @abstractmethod
    def render(self, data: T) -> str:
        """Render a result to formatted output.

        Args:
            data: Result to render.

        Returns:
            Rendered output as a string.
        """
        ...

    def write(self, data: T, output_path: Path) -> None:
        """Render and write output to a file atomically.

        The content goes to a temporary file in the target directory, which
        then replaces ``output_path``.

        Args:
            data: Result to render.
            output_path: Path to write the output file.
        """
        content = self.render(data)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(
            dir=output_path.parent, prefix=f".{output_path.name}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(content)
            os.replace(tmp_name, output_path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise

    @property
    @abstractmethod
    def format_name(self) -> str:
        """Return the output format name, e.g. "csv" or "markdown"."""
        ...

    @property
    @abstractmethod
    def default_extension(self) -> str:
        """Return the default file extension for this format."""
        ...
