"""Prediction error metrics and the fixed-horizon evaluation protocol.

Reported error is MPJPE in mm: the mean over evaluation joints of the
Euclidean distance between predicted and ground-truth positions.  The
training objective is the squared variant averaged over joints and frames.
Horizons are expressed in milliseconds and map to 1-indexed output frames
(at 25 fps: 80 ms -> frame 2, ..., 1000 ms -> frame 25).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .motion_io import Motion
from .skeleton import Skeleton

DEFAULT_HORIZONS_MS = (80, 160, 320, 400)
LONG_HORIZONS_MS = (560, 1000)


class SubsetOutOfRange(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class HorizonOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class HorizonReport:
    """Per-horizon MPJPE (mm) plus the 1-indexed output frame evaluated."""

    per_horizon: dict[int, float]
    frame_indices: dict[int, int] = field(default_factory=dict)


def _as_frames(motion) -> np.ndarray:
    frames = motion.frames if isinstance(motion, Motion) else np.asarray(motion, dtype=np.float64)
    return frames


def mpjpe_frame(pred_pose: np.ndarray, gt_pose: np.ndarray,
                eval_subset: list[int] | None = None) -> float:
    """Mean Euclidean distance (mm) over the evaluation joints of one frame."""
    pred = np.asarray(pred_pose, dtype=np.float64)
    gt = np.asarray(gt_pose, dtype=np.float64)
    if pred.shape != gt.shape:
        raise LengthMismatch(f"pose shapes differ: {pred.shape} vs {gt.shape}")
    j = pred.shape[0]
    if eval_subset is None:
        subset = np.arange(j)
    else:
        subset = np.asarray(list(eval_subset), dtype=np.intp)
        if subset.size == 0 or subset.min() < 0 or subset.max() >= j:
            raise SubsetOutOfRange(f"eval subset out of range for {j} joints")
    return float(np.mean(np.linalg.norm(pred[subset] - gt[subset], axis=1)))


def horizon_loss(pred_motion, gt_motion) -> float:
    """Training objective: mean over frames and joints of squared distance."""
    pred = _as_frames(pred_motion)
    gt = _as_frames(gt_motion)
    if pred.shape != gt.shape:
        raise LengthMismatch(f"motion shapes differ: {pred.shape} vs {gt.shape}")
    n, j = pred.shape[0], pred.shape[1]
    sq = np.sum((pred - gt) ** 2, axis=2)
    return float(sq.sum() / (j * n))


def horizon_frame_index(horizon_ms: int, fps: int) -> int:
    """1-indexed output frame at which a horizon is evaluated."""
    idx = horizon_ms * fps / 1000.0
    if abs(idx - round(idx)) > 1e-9 or round(idx) < 1:
        raise HorizonOutOfRange(f"horizon {horizon_ms} ms is not a whole frame at {fps} fps")
    return int(round(idx))


def evaluate_horizons(pred_motion: Motion, gt_motion: Motion, skeleton: Skeleton,
                      horizons_ms=DEFAULT_HORIZONS_MS) -> HorizonReport:
    """MPJPE over the skeleton's eval subset at each requested horizon."""
    if pred_motion.fps != gt_motion.fps:
        raise LengthMismatch(
            f"fps differ: {pred_motion.fps} vs {gt_motion.fps}"
        )
    pred = pred_motion.frames
    gt = gt_motion.frames
    if pred.shape[1:] != gt.shape[1:]:
        raise LengthMismatch(f"joint layouts differ: {pred.shape} vs {gt.shape}")
    per_horizon: dict[int, float] = {}
    frame_indices: dict[int, int] = {}
    for h in horizons_ms:
        idx = horizon_frame_index(h, pred_motion.fps)
        if idx > pred.shape[0] or idx > gt.shape[0]:
            raise HorizonOutOfRange(
                f"horizon {h} ms needs output frame {idx}, prediction has {pred.shape[0]}"
            )
        per_horizon[h] = mpjpe_frame(pred[idx - 1], gt[idx - 1], skeleton.eval_subset)
        frame_indices[h] = idx
    return HorizonReport(per_horizon=per_horizon, frame_indices=frame_indices)


def write_report(rows: list[tuple[str, int, float, str]], path: str | Path) -> None:
    """Write (action, horizon_ms, error_mm, condition) rows as CSV."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("action,horizon_ms,error_mm,condition\n")
        for action, horizon_ms, error_mm, condition in rows:
            f.write(f"{action},{horizon_ms},{repr(float(error_mm))},{condition}\n")


def read_report(path: str | Path) -> list[tuple[str, int, float, str]]:
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or lines[0] != "action,horizon_ms,error_mm,condition":
        raise ValueError("not a report CSV")
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        action, horizon_ms, error_mm, condition = line.split(",")
        rows.append((action, int(horizon_ms), float(error_mm), condition))
    return rows
