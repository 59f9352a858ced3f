"""Walk run manifests and render a default panel per artifact kind."""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .panels import PanelSpec, render

# artifact_kind -> (panel kind, column roles); run-relative CSV names are
# fixed by the producing tool's schemas
_DEFAULTS = {
    "trajectory": [
        ("timeseries", {"inputs": ["trajectory.csv"], "x": "t",
                        "series": ("p_hat", "P_hat")}, "timeseries.png"),
        ("parametric", {"inputs": ["trajectory.csv"], "x": "p_hat",
                        "y": "P_hat"}, "parametric.png"),
    ],
    "two_colour_dynamic": [
        ("timeseries", {"inputs": ["dynamic.csv"], "x": "t",
                        "series": ("p", "P")}, "timeseries.png"),
        ("parametric", {"inputs": ["dynamic.csv"], "x": "p", "y": "P"},
         "parametric.png"),
    ],
    "meanfield_dynamic": [
        ("timeseries", {"inputs": ["dynamic.csv"], "x": "t",
                        "series": ("p", "P")}, "timeseries.png"),
        ("parametric", {"inputs": ["dynamic.csv"], "x": "p", "y": "P"},
         "parametric.png"),
    ],
    "two_colour_sweep": [
        ("heatmap", {"inputs": ["sweep.csv"], "x": "phi1", "y": "phi2",
                     "z": "S"}, "heatmap.png"),
    ],
    "meanfield_grid": [
        ("heatmap", {"inputs": ["grid.csv"], "x": "phi1", "y": "phi2",
                     "z": "S"}, "heatmap.png"),
        ("surface", {"inputs": ["grid.csv"], "x": "phi1", "y": "phi2",
                     "z": "S"}, "surface.png"),
    ],
    "correlations": [
        ("heatmap", {"inputs": ["correlations.csv"], "x": "lambda",
                     "y": "sigma", "z": "rho_par"}, "rho_par.png"),
        ("heatmap", {"inputs": ["correlations.csv"], "x": "lambda",
                     "y": "sigma", "z": "eta"}, "eta.png"),
    ],
    "analytic_p": [
        ("timeseries", {"inputs": ["analytic_p.csv"], "x": "t",
                        "series": ("p",)}, "timeseries.png"),
    ],
}


def _critical_line_overlay(manifest_path: Path) -> str:
    # a sibling run of the same preset may provide the critical line
    candidate = manifest_path.parent.parent / "critical_line" / "critical_line.csv"
    return str(candidate) if candidate.exists() else ""


def render_manifest(manifest_path: Path, out_dir: Path | None = None) -> list[Path]:
    """Render the default panels for one run manifest."""
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as fh:
        payload = json.load(fh)
    kind = payload.get("artifact_kind")
    if kind not in _DEFAULTS:
        print(f"figkit: skipping {manifest_path} (unknown kind {kind!r})",
              file=sys.stderr)
        return []
    base = manifest_path.parent
    out_base = Path(out_dir) if out_dir is not None else base
    written = []
    for panel_kind, roles, image_name in _DEFAULTS[kind]:
        roles = dict(roles)
        roles["inputs"] = [str(base / name) for name in roles["inputs"]]
        if kind == "meanfield_grid" and panel_kind == "heatmap":
            roles["overlay"] = _critical_line_overlay(manifest_path)
        spec = PanelSpec(kind=panel_kind, output=str(out_base / image_name),
                         **roles)
        written.append(render(spec))
    return written


def render_all(directory, out_dir=None) -> list[Path]:
    """Render every manifest under a directory tree."""
    directory = Path(directory)
    manifests = sorted(directory.rglob("manifest.json"))
    if not manifests:
        print(f"figkit: no manifests under {directory}", file=sys.stderr)
        return []
    written = []
    for manifest in manifests:
        sub = None
        if out_dir is not None:
            sub = Path(out_dir) / manifest.parent.relative_to(directory)
        written.extend(render_manifest(manifest, sub))
    return written
