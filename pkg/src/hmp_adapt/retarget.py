"""Conversion of externally estimated poses into the mocap joint definition.

Two stages: a linear vertex-to-joint regression (for mesh-based sources)
and per-frame scale fitting, which rebuilds each frame from the root
outward so that every bone keeps its input direction but takes the static
offset length defined by the skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .motion_io import Motion
from .skeleton import Skeleton, traversal_order

ZERO_BONE_EPS = 1e-12  # mm; below this an input bone has no usable direction
UP = np.array([0.0, 1.0, 0.0])


class DimensionMismatch(ValueError):
    pass


class NonFiniteInput(ValueError):
    pass


@dataclass(frozen=True)
class JointRegressor:
    """Row-stochastic J x V matrix mapping mesh vertices to joints."""

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.float64))
        w = self.weights
        if w.ndim != 2:
            raise DimensionMismatch(f"weights must be 2-D, got shape {w.shape}")
        if np.any(w < 0):
            raise ValueError("regressor weights must be non-negative")
        sums = w.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise ValueError("every regressor row must sum to 1 within 1e-9")

    @property
    def n_joints(self) -> int:
        return self.weights.shape[0]

    @property
    def n_vertices(self) -> int:
        return self.weights.shape[1]


def load_regressor(path: str | Path) -> JointRegressor:
    """Load a regressor from a plain CSV of J rows x V columns."""
    weights = np.loadtxt(path, delimiter=",", ndmin=2)
    return JointRegressor(weights=weights)


def save_regressor(regressor: JointRegressor, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in regressor.weights:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def regress_joints(vertices: np.ndarray, regressor: JointRegressor) -> np.ndarray:
    """Map mesh vertices (V, 3) to joint positions (J, 3)."""
    vertices = np.asarray(vertices, dtype=np.float64)
    if vertices.ndim != 2 or vertices.shape[1] != 3:
        raise DimensionMismatch(f"vertices must be (V, 3), got {vertices.shape}")
    if vertices.shape[0] != regressor.n_vertices:
        raise DimensionMismatch(
            f"regressor expects {regressor.n_vertices} vertices, got {vertices.shape[0]}"
        )
    if not np.isfinite(vertices).all():
        raise NonFiniteInput("mesh vertices contain non-finite values")
    return regressor.weights @ vertices


def fit_frames(frames: np.ndarray, bones: list[tuple[int, int]], root: int,
               offsets: np.ndarray) -> np.ndarray:
    """Rebuild frames so every bone has its offset length.

    Bone directions come from the input frames; fitted positions only anchor
    each chain.  A bone shorter than ZERO_BONE_EPS in the input has no
    direction, so the fitted direction of the same bone in the previous
    frame is reused (+y at frame 0).
    """
    frames = np.asarray(frames, dtype=np.float64)
    fitted = np.empty_like(frames)
    fitted[:, root, :] = frames[:, root, :]
    for p, c in bones:
        d = frames[:, c, :] - frames[:, p, :]
        norms = np.linalg.norm(d, axis=1)
        usable = norms >= ZERO_BONE_EPS
        units = np.empty_like(d)
        units[usable] = d[usable] / norms[usable, None]
        if not usable.all():
            for n in np.flatnonzero(~usable):
                units[n] = units[n - 1] if n > 0 else UP
        fitted[:, c, :] = fitted[:, p, :] + offsets[c] * units
    return fitted


def scale_fit(motion: Motion, skeleton: Skeleton) -> Motion:
    """Enforce motion-capture bone lengths on every frame independently.

    Frames are rebuilt from the root outward: each bone keeps the unit
    direction of the corresponding input bone and takes the skeleton's
    static offset as its length.  The root positions are unchanged.
    """
    motion.validate(skeleton)
    if not np.isfinite(motion.frames).all():
        raise NonFiniteInput("motion contains non-finite values")
    bones = traversal_order(skeleton)
    fitted = fit_frames(motion.frames, bones, skeleton.root, skeleton.offsets)
    return replace(motion, frames=fitted)


def bone_lengths(motion: Motion, skeleton: Skeleton) -> np.ndarray:
    """Per-frame bone lengths (N, J-1), bones in traversal order."""
    motion.validate(skeleton)
    bones = traversal_order(skeleton)
    out = np.empty((motion.n_frames, len(bones)))
    for b, (p, c) in enumerate(bones):
        out[:, b] = np.linalg.norm(motion.frames[:, c, :] - motion.frames[:, p, :], axis=1)
    return out
