"""figkit: figure panels for entperc CSV artifacts."""

from .discover import render_all, render_manifest
from .geometry import polyline_self_intersections
from .panels import DPI, PanelSpec, SchemaError, load_columns, render, spec_from_json

__version__ = "0.1.0"
