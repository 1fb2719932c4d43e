# Sphinx configuration for the pinsync documentation.

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

project = "pinsync"
copyright = "2025, pinsync Contributors"
author = "pinsync Contributors"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "myst_parser",
    "sphinxcontrib.mermaid",
]

napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_include_init_with_doc = True

myst_enable_extensions = ["colon_fence", "dollarmath"]

# Array types in signatures resolve against the numerical stack.
intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
}

templates_path = ["_templates"]
exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
os.makedirs("_static", exist_ok=True)

autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
    "undoc-members": True,
}
autodoc_typehints = "description"
autodoc_type_aliases = {"ArrayLike": "numpy.typing.ArrayLike"}

# Dataclass fields are documented twice otherwise.
suppress_warnings = ["ref.python"]
