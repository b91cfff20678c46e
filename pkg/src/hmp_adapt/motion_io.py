"""Motion sequences, their CSV form, and the preprocessing steps.

A motion is N frames of J joints x 3 coordinates (mm) at a fixed frame
rate, plus metadata (action, subject, source tag, recording index).  The
CSV format is one header line

    #fps=<int>,action=<str>,subject=<str>,source=<mocap|estimated|synthetic>,recording=<int>

followed by a column-name line ``j0_x,j0_y,j0_z,...`` and one row per
frame.  Values are written as the shortest decimal text that parses back
to the identical float64, so write -> read is bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .skeleton import Skeleton

SOURCES = ("mocap", "estimated", "synthetic")

VERTICAL_AXIS = 1  # +y up; the x-z plane is horizontal


class MotionFormatError(ValueError):
    """A motion file or motion value violates the format contract."""


class MalformedHeader(MotionFormatError):
    pass


class JointCountMismatch(MotionFormatError):
    pass


class NonFiniteValue(MotionFormatError):
    pass


class EmptySequence(MotionFormatError):
    pass


class NonIntegerRatio(MotionFormatError):
    pass


class DegenerateHips(MotionFormatError):
    pass


@dataclass(frozen=True)
class Motion:
    """Frames (N, J, 3) in mm at ``fps`` frames per second.

    Treated as immutable: every operation returns a new Motion and never
    mutates ``frames`` in place.
    """

    frames: np.ndarray
    fps: int
    action: str = ""
    subject: str = ""
    source: str = "synthetic"
    recording: int = 1

    def __post_init__(self):
        object.__setattr__(self, "frames", np.asarray(self.frames, dtype=np.float64))

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def n_joints(self) -> int:
        return self.frames.shape[1]

    def validate(self, skeleton: Skeleton | None = None) -> None:
        if self.frames.ndim != 3 or self.frames.shape[2] != 3:
            raise MotionFormatError(f"frames must be (N, J, 3), got {self.frames.shape}")
        if self.n_frames < 1:
            raise EmptySequence("motion must contain at least one frame")
        if not self.fps > 0:
            raise MotionFormatError(f"fps must be positive, got {self.fps}")
        if not np.isfinite(self.frames).all():
            raise NonFiniteValue("motion contains non-finite coordinates")
        if self.source not in SOURCES:
            raise MotionFormatError(f"source must be one of {SOURCES}, got {self.source!r}")
        if skeleton is not None and self.n_joints != skeleton.n_joints:
            raise JointCountMismatch(
                f"motion has {self.n_joints} joints, skeleton has {skeleton.n_joints}"
            )


def _format_value(x: float) -> str:
    # repr() is the shortest decimal that round-trips the exact float64
    return repr(float(x))


def write_motion(motion: Motion, path: str | Path) -> None:
    """Write a motion CSV; raises OSError on I/O failure."""
    motion.validate()
    for name, value in (("action", motion.action), ("subject", motion.subject)):
        if any(c in value for c in ",\n\r="):
            raise MotionFormatError(f"{name} value {value!r} cannot contain ',', '=' or newlines")
    j = motion.n_joints
    header = (
        f"#fps={motion.fps},action={motion.action},subject={motion.subject},"
        f"source={motion.source},recording={motion.recording}"
    )
    columns = ",".join(f"j{i}_{axis}" for i in range(j) for axis in "xyz")
    flat = motion.frames.reshape(motion.n_frames, 3 * j)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(header + "\n")
        f.write(columns + "\n")
        for row in flat:
            f.write(",".join(_format_value(v) for v in row) + "\n")


def _parse_header(line: str) -> dict:
    if not line.startswith("#"):
        raise MalformedHeader("first line must start with '#'")
    fields = line[1:].strip().split(",")
    expected = ["fps", "action", "subject", "source", "recording"]
    if len(fields) != len(expected):
        raise MalformedHeader(f"expected fields {expected}, got {fields!r}")
    meta = {}
    for key, item in zip(expected, fields):
        if "=" not in item:
            raise MalformedHeader(f"field {item!r} is not key=value")
        k, v = item.split("=", 1)
        if k != key:
            raise MalformedHeader(f"expected field {key!r}, got {k!r}")
        meta[k] = v
    try:
        meta["fps"] = int(meta["fps"])
        meta["recording"] = int(meta["recording"])
    except ValueError as e:
        raise MalformedHeader(str(e)) from None
    if meta["fps"] <= 0:
        raise MalformedHeader(f"fps must be positive, got {meta['fps']}")
    if meta["source"] not in SOURCES:
        raise MalformedHeader(f"source must be one of {SOURCES}, got {meta['source']!r}")
    return meta


def read_motion(path: str | Path, skeleton: Skeleton | None = None) -> Motion:
    """Read a motion CSV, checking the joint count against ``skeleton``."""
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise MalformedHeader("empty file")
    meta = _parse_header(lines[0])
    if len(lines) < 2:
        raise MalformedHeader("missing column-name line")
    n_cols = len(lines[1].split(","))
    if n_cols % 3 != 0:
        raise MalformedHeader(f"column count {n_cols} is not a multiple of 3")
    j = n_cols // 3
    if skeleton is not None and j != skeleton.n_joints:
        raise JointCountMismatch(f"file has {j} joints, skeleton has {skeleton.n_joints}")
    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != n_cols:
            raise MotionFormatError(f"line {lineno}: expected {n_cols} values, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as e:
            raise MotionFormatError(f"line {lineno}: {e}") from None
    if not rows:
        raise EmptySequence("motion file contains no frames")
    frames = np.asarray(rows, dtype=np.float64).reshape(len(rows), j, 3)
    if not np.isfinite(frames).all():
        raise NonFiniteValue("motion file contains non-finite values")
    return Motion(
        frames=frames,
        fps=meta["fps"],
        action=meta["action"],
        subject=meta["subject"],
        source=meta["source"],
        recording=meta["recording"],
    )


def downsample(motion: Motion, target_fps: int) -> Motion:
    """Keep every (fps/target_fps)-th frame starting at frame 0."""
    motion.validate()
    if target_fps <= 0 or motion.fps % target_fps != 0:
        raise NonIntegerRatio(f"{motion.fps} fps is not an integer multiple of {target_fps}")
    stride = motion.fps // target_fps
    return replace(motion, frames=motion.frames[::stride].copy(), fps=target_fps)


def remove_global(motion: Motion, skeleton: Skeleton, mode: str = "translation") -> Motion:
    """Remove global translation (and optionally rotation) per frame.

    ``translation`` subtracts the root joint position from every joint of
    every frame.  ``translation+rotation`` additionally rotates each frame
    about the vertical (+y) axis so the horizontal component of the
    left_hip -> right_hip vector points along +x; the skeleton must contain
    joints with those names.
    """
    motion.validate(skeleton)
    if mode not in ("translation", "translation+rotation"):
        raise ValueError(f"mode must be 'translation' or 'translation+rotation', got {mode!r}")
    root = skeleton.root
    frames = motion.frames - motion.frames[:, root:root + 1, :]
    if mode == "translation+rotation":
        left = skeleton.joint_index("left_hip")
        right = skeleton.joint_index("right_hip")
        across = frames[:, right, :] - frames[:, left, :]
        ax, az = across[:, 0], across[:, 2]
        norm = np.hypot(ax, az)
        if np.any(norm < 1e-9):
            raise DegenerateHips("hip joints coincide in the horizontal plane")
        cos, sin = ax / norm, az / norm
        # Rotation about +y taking (cos, ., sin) to (1, ., 0), applied per frame.
        x, y, z = frames[..., 0], frames[..., 1], frames[..., 2]
        c, s = cos[:, None], sin[:, None]
        frames = np.stack([c * x + s * z, y, -s * x + c * z], axis=-1)
    return replace(motion, frames=frames)
