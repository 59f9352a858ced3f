"""CSV artifact writing and run manifests.

Every run writes its CSVs first, then a ``manifest.json`` echoing the fully
resolved configuration together with a sha256 checksum per output.  The
manifest is written atomically (temp file + rename) so a manifest on disk
always describes complete outputs.  CSV numbers are locale-independent with
up to 17 significant digits, which makes reruns byte-comparable.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Iterable, Sequence


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int,)):
        return str(v)
    return f"{float(v):.17g}"


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write rows to a CSV file; returns the number of data rows."""
    n = 0
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
            n += 1
    return n


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(directory, *, subcommand: str, artifact_kind: str,
                   config: dict, outputs: Sequence[str], wall_clock: float,
                   version: str, extra: dict | None = None) -> Path:
    """Atomically write manifest.json describing the run's outputs."""
    directory = Path(directory)
    payload = {
        "tool": "entperc",
        "version": version,
        "subcommand": subcommand,
        "artifact_kind": artifact_kind,
        "config": config,
        "outputs": {name: {"sha256": sha256_file(directory / name)}
                    for name in outputs},
        "wall_clock_seconds": wall_clock,
    }
    if extra:
        payload.update(extra)
    path = directory / "manifest.json"
    tmp = directory / "manifest.json.tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
    return path


def verify_manifest(manifest_path) -> bool:
    """Recompute output checksums; False if any file changed or is missing."""
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="ascii") as fh:
        payload = json.load(fh)
    base = manifest_path.parent
    for name, meta in payload.get("outputs", {}).items():
        target = base / name
        if not target.exists() or sha256_file(target) != meta["sha256"]:
            return False
    return True
