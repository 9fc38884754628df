"""CSV / manifest / SVG helpers for the command-line surface.

Matrix files are headerless comma-separated text written with 17
significant digits, so reading them back reproduces the in-memory doubles
exactly. Responses may encode missing cells as the literal NA; these are
converted to an observation mask on load.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np

from .errors import InputError


def write_matrix(path: Path | str, matrix: np.ndarray) -> None:
    matrix = np.atleast_2d(np.asarray(matrix))
    np.savetxt(path, matrix, fmt="%.17g", delimiter=",")


def read_matrix(path: Path | str) -> np.ndarray:
    try:
        out = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read matrix from {path}: {exc}") from exc
    return out


def read_responses(path: Path | str) -> tuple[np.ndarray, np.ndarray]:
    """Read a response matrix; NA cells become mask = False, value 0."""
    try:
        raw = np.genfromtxt(
            path, delimiter=",", missing_values="NA", filling_values=np.nan, ndmin=2
        )
    except OSError as exc:
        raise InputError(f"cannot read responses from {path}: {exc}") from exc
    mask = ~np.isnan(raw)
    if not mask.any():
        raise InputError(f"{path} contains no observed responses")
    values = np.where(mask, raw, 0.0)
    if not np.allclose(values, np.round(values)):
        raise InputError(f"{path}: responses must be integers (or NA)")
    return values.astype(np.int64), mask


def checksum(path: Path | str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Manifest:
    """Per-run record: command, config echo, seeds, checksums, timings,
    output file list. Serialized as JSON and round-trippable."""

    def __init__(self, command: str, config: dict | None = None):
        self.record = {
            "command": command,
            "config": config or {},
            "seeds": {},
            "input_checksums": {},
            "timings": {},
            "outputs": [],
            "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
        }

    def add_input(self, path: Path | str) -> None:
        self.record["input_checksums"][str(path)] = checksum(path)

    def add_seed(self, name: str, value: int) -> None:
        self.record["seeds"][name] = value

    def add_timing(self, stage: str, seconds: float) -> None:
        self.record["timings"][stage] = self.record["timings"].get(stage, 0.0) + seconds

    def add_output(self, path: Path | str) -> None:
        self.record["outputs"].append(str(path))

    def write(self, path: Path | str) -> None:
        with open(path, "w") as fh:
            json.dump(self.record, fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: Path | str) -> "Manifest":
        with open(path) as fh:
            record = json.load(fh)
        manifest = cls.__new__(cls)
        manifest.record = record
        return manifest


def write_scree_svg(
    path: Path | str,
    standardized_values: np.ndarray,
    suggested_k: int,
    width: int = 640,
    height: int = 420,
) -> None:
    """Minimal standalone SVG scree plot (descending line with markers)."""
    values = np.asarray(standardized_values, dtype=float)
    n = len(values)
    margin = 50.0
    plot_w, plot_h = width - 2 * margin, height - 2 * margin
    vmax = float(values.max()) if values.max() > 0 else 1.0
    xs = margin + plot_w * np.arange(n) / max(n - 1, 1)
    ys = margin + plot_h * (1.0 - values / vmax)

    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="2"/>',
    ]
    for k, (x, y) in enumerate(zip(xs, ys), start=1):
        color = "crimson" if k == suggested_k else "steelblue"
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{x:.2f}" y="{height - margin / 2:.2f}" '
            f'font-size="11" text-anchor="middle">{k}</text>'
        )
    parts.append(
        f'<text x="{width / 2:.0f}" y="20" font-size="13" text-anchor="middle">'
        "Standardized singular values</text>"
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
