"""Depth-map acquisition: file, external estimator command, or builtin proxy.

The external estimator is never bundled; it is reached through a file
based subprocess contract:

    <program> <args...> <input.png> <output.png>

where the output must be a single-channel PNG (8- or 16-bit, 16-bit
rescaled to [0, 255]) with the same dimensions as the input.  The
environment variable ``QUATPAINT_DEPTH_CMD`` may supply a default
command provider.
"""

from __future__ import annotations

import enum
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import imaging

DEPTH_CMD_ENV = "QUATPAINT_DEPTH_CMD"


class Polarity(enum.Enum):
    """Depth-map convention: where far objects sit on the gray scale."""

    WHITE_BACKGROUND = "white"   # far objects bright, near 255
    BLACK_BACKGROUND = "black"   # far objects dark, near 0


class ProviderFailure(RuntimeError):
    """Depth provider could not deliver a usable map."""


@dataclass(frozen=True)
class DepthMap:
    """Grayscale depth values in [0, 255] with their polarity convention."""

    values: np.ndarray
    polarity: Polarity = Polarity.WHITE_BACKGROUND

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("depth map must be 2-D")
        if v.min() < 0 or v.max() > 255:
            raise ValueError("depth values must lie in [0, 255]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class DepthProviderSpec:
    """How to obtain a depth map: 'file', 'command', or 'heuristic'."""

    kind: str
    path: str | None = None
    program: str | None = None
    args: tuple[str, ...] = ()
    polarity: Polarity = Polarity.WHITE_BACKGROUND

    def __post_init__(self):
        if self.kind not in ("file", "command", "heuristic"):
            raise ValueError(f"unknown depth provider kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ValueError("file provider needs a path")
        if self.kind == "command" and not self.program:
            raise ValueError("command provider needs a program")


def spec_from_env(polarity: Polarity = Polarity.WHITE_BACKGROUND
                  ) -> DepthProviderSpec | None:
    """Command provider from QUATPAINT_DEPTH_CMD, if set."""
    cmd = os.environ.get(DEPTH_CMD_ENV)
    if not cmd:
        return None
    parts = shlex.split(cmd)
    return DepthProviderSpec(kind="command", program=parts[0],
                             args=tuple(parts[1:]), polarity=polarity)


def luminance(image) -> np.ndarray:
    """Plain channel mean in [0, 255]."""
    return np.mean(imaging.validate_image(image), axis=2)


def heuristic_depth(image) -> np.ndarray:
    """Builtin depth proxy: vertical ramp blended 50/50 with luminance.

    Exists only so the pipeline and tests can run without the external
    estimator; every report that uses it is labeled accordingly.
    """
    img = imaging.validate_image(image)
    rows = img.shape[0]
    if rows > 1:
        ramp = 255.0 * np.arange(rows) / (rows - 1)
    else:
        ramp = np.zeros(1)
    blend = 0.5 * ramp[:, None] + 0.5 * luminance(img)
    return np.clip(blend, 0.0, 255.0)


def _load_depth_file(path, shape) -> np.ndarray:
    try:
        values = imaging.load_gray(path)
    except OSError as exc:
        raise ProviderFailure(f"cannot read depth file {path}: {exc}") from exc
    if values.shape != shape:
        raise ProviderFailure(
            f"depth file {path} has shape {values.shape}, expected {shape}")
    return np.clip(values, 0.0, 255.0)


def _run_depth_command(spec: DepthProviderSpec, image) -> np.ndarray:
    img = imaging.validate_image(image)
    with tempfile.TemporaryDirectory(prefix="quatpaint-depth-") as tmp:
        in_path = os.path.join(tmp, "input.png")
        out_path = os.path.join(tmp, "output.png")
        imaging.save_image(in_path, img)
        cmd = [spec.program, *spec.args, in_path, out_path]
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True)
        except OSError as exc:
            raise ProviderFailure(
                f"cannot launch depth command {spec.program!r}: {exc}"
            ) from exc
        if proc.returncode != 0:
            raise ProviderFailure(
                f"depth command exited with {proc.returncode}; "
                f"stderr: {proc.stderr.strip()}")
        if not os.path.exists(out_path):
            raise ProviderFailure("depth command produced no output file")
        return _load_depth_file(out_path, img.shape[:2])


def estimate_depth(spec: DepthProviderSpec, image) -> DepthMap:
    """Obtain a depth map for ``image`` via the configured provider."""
    img = imaging.validate_image(image)
    if spec.kind == "file":
        values = _load_depth_file(spec.path, img.shape[:2])
    elif spec.kind == "command":
        values = _run_depth_command(spec, img)
    else:
        values = heuristic_depth(img)
    return DepthMap(values, spec.polarity)


def apply_polarity(depth: DepthMap, target: Polarity) -> DepthMap:
    """Flip 255 - d if the conventions differ; identity otherwise."""
    if depth.polarity is target:
        return depth
    return DepthMap(255.0 - depth.values, target)
