"""Markdown reporter for pinning-node selection trails.

Renders the trail of :func:`pinsync.spectral.select_pinned_nodes` as a
Markdown table with 1-based node labels, using Jinja2 templates.
"""

import math
from collections.abc import Sequence
from importlib.resources import files
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader, Template

from pinsync.models import ConditionReport
from pinsync.reporters.base import BaseReporter


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.4f}"


class MarkdownReporter(BaseReporter[Sequence[ConditionReport]]):
    """Reporter that renders a selection trail as a Markdown table.

    Attributes:
        template: The Jinja2 template to use for rendering.
    """

    def __init__(self, template_path: Optional[Path] = None) -> None:
        """Initialize the Markdown reporter.

        Args:
            template_path: Optional path to a custom Jinja2 template.
                If not provided, uses the bundled ``selection.md.j2``.
        """
        if template_path:
            env = Environment(
                loader=FileSystemLoader(template_path.parent),
                autoescape=True,
            )
            self.template = env.get_template(template_path.name)
        else:
            self.template = self._load_default_template()

    def _load_default_template(self) -> Template:
        template_content = (
            files("pinsync.templates")
            .joinpath("selection.md.j2")
            .read_text(encoding="utf-8")
        )
        env = Environment(autoescape=True)
        return env.from_string(template_content)

    def render(self, data: Sequence[ConditionReport]) -> str:
        """Render a selection trail to Markdown.

        Args:
            data: Condition reports in selection order; must not be empty.

        Returns:
            Rendered Markdown document as a string.
        """
        if not data:
            raise ValueError("selection trail is empty")
        final = data[-1]
        rows = [
            {
                "l": r.pins.l,
                "nodes": r.pins.label(one_based=True) or "-",
                "lambda_max": _fmt(r.lambda_max_abar),
                "min_coupling": _fmt(r.min_coupling),
                "satisfied": "True" if r.satisfied else "False",
            }
            for r in data
        ]
        return self.template.render(
            rows=rows,
            final=final,
            final_nodes=final.pins.label(one_based=True),
            gamma=final.gamma,
            c=final.c,
        )

    @property
    def format_name(self) -> str:
        return "markdown"

    @property
    def default_extension(self) -> str:
        return ".md"
