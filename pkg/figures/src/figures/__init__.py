"""Render the six standard figures from unruh-preth scenario outputs.

This package never recomputes physics: it reads the CSV/JSON files emitted
by the ``unruh-preth`` scenario runner and plots them.  The simulation
library is fully usable without it.
"""

from .render import FIGURE_IDS, SchemaError, render

__version__ = "0.1.0"
