"""Panel rendering from simulation CSV artifacts.

A panel is a pure function of its input CSV bytes and its spec: fixed DPI,
fixed fonts and stripped metadata make repeated renders byte-identical at a
fixed matplotlib version.  No quantity is computed here beyond plotting;
every plotted column must already exist in the CSV.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

DPI = 150
_SAVE_KW = {"dpi": DPI, "metadata": {"Software": "figkit"}}

KINDS = ("timeseries", "parametric", "heatmap", "surface")


class SchemaError(ValueError):
    """A referenced CSV column does not exist."""


@dataclass(frozen=True)
class PanelSpec:
    kind: str
    inputs: list
    output: str
    x: str = ""
    y: str = ""
    series: tuple = ()
    z: str = ""
    overlay: str = ""          # optional CSV path drawn as a line (x, y columns)
    labels: dict = field(default_factory=dict)
    limits: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown panel kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("panel needs at least one input CSV")


def load_columns(path, names):
    """Read the named columns of a CSV; unknown names raise SchemaError."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.dtype.names is None:
        raise SchemaError(f"{path}: no header row")
    out = []
    for name in names:
        if name not in data.dtype.names:
            raise SchemaError(f"{path}: missing column '{name}'")
        out.append(np.atleast_1d(data[name]))
    return out


def spec_from_json(path) -> PanelSpec:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    raw["series"] = tuple(raw.get("series", ()))
    return PanelSpec(**raw)


def _style(ax, spec):
    ax.set_xlabel(spec.labels.get("x", spec.x))
    ax.set_ylabel(spec.labels.get("y", spec.y or ",".join(spec.series)))
    if "title" in spec.labels:
        ax.set_title(spec.labels["title"])
    if "x" in spec.limits:
        ax.set_xlim(spec.limits["x"])
    if "y" in spec.limits:
        ax.set_ylim(spec.limits["y"])


def render(spec: PanelSpec) -> Path:
    """Render one panel; returns the written image path."""
    fig = plt.figure(figsize=(5.0, 3.8))
    try:
        if spec.kind == "timeseries":
            ax = fig.add_subplot(111)
            for path in spec.inputs:
                cols = load_columns(path, [spec.x, *spec.series])
                for name, ys in zip(spec.series, cols[1:]):
                    ax.plot(cols[0], ys, lw=1.2,
                            label=f"{Path(path).parent.name}:{name}")
            ax.legend(fontsize=6)
            _style(ax, spec)
        elif spec.kind == "parametric":
            ax = fig.add_subplot(111)
            for path in spec.inputs:
                xs, ys = load_columns(path, [spec.x, spec.y])
                # points joined in row (time) order so branches stay visible
                ax.plot(xs, ys, "-o", lw=0.9, ms=2,
                        label=Path(path).parent.name)
            if spec.overlay:
                ox, oy = load_columns(spec.overlay, [spec.x, spec.y])
                ax.plot(ox, oy, "k-", lw=1.5, label="reference")
            ax.legend(fontsize=6)
            _style(ax, spec)
        elif spec.kind == "heatmap":
            ax = fig.add_subplot(111)
            xs, ys, zs = load_columns(spec.inputs[0], [spec.x, spec.y, spec.z])
            xu, yu = np.unique(xs), np.unique(ys)
            grid = np.full((yu.size, xu.size), np.nan)
            grid[np.searchsorted(yu, ys), np.searchsorted(xu, xs)] = zs
            mesh = ax.pcolormesh(xu, yu, grid, shading="nearest")
            fig.colorbar(mesh, ax=ax, label=spec.z)
            if spec.overlay:
                ox, oy = load_columns(spec.overlay, [spec.x, spec.y])
                ax.plot(ox, oy, "w--", lw=1.5)
                ax.set_xlim(xu.min(), xu.max())
                ax.set_ylim(yu.min(), yu.max())
            _style(ax, spec)
        else:  # surface
            ax = fig.add_subplot(111, projection="3d")
            xs, ys, zs = load_columns(spec.inputs[0], [spec.x, spec.y, spec.z])
            xu, yu = np.unique(xs), np.unique(ys)
            grid = np.full((yu.size, xu.size), np.nan)
            grid[np.searchsorted(yu, ys), np.searchsorted(xu, xs)] = zs
            mx, my = np.meshgrid(xu, yu)
            ax.plot_surface(mx, my, grid, cmap="viridis", linewidth=0)
            ax.set_xlabel(spec.x)
            ax.set_ylabel(spec.y)
            ax.set_zlabel(spec.z)
        out = Path(spec.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, **_SAVE_KW)
        return out
    finally:
        plt.close(fig)
