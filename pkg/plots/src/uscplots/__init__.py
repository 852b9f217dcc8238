"""Figure rendering for uscsim CSV/JSON outputs."""

from .render import SchemaError, colormap_for, render

__all__ = ["SchemaError", "colormap_for", "render"]
