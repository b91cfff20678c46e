"""Deterministic synthetic motion families and an estimation-noise model.

Families are sums of per-joint sinusoidal displacements around a rest pose
of the default skeleton, renormalized per frame so bone lengths are exact
at the subject's scale (as marker-based capture would deliver).  The
corruption model emulates monocular estimation error: a per-frame
log-normal global scale jitter plus i.i.d. Gaussian joint noise.

All randomness is drawn from the counter-based streams in
:mod:`hmp_adapt.rng`, so corpora are reproducible from a single seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .motion_io import Motion
from .retarget import fit_frames
from .rng import CounterRng, derive_seed
from .skeleton import Skeleton, default_skeleton, traversal_order

NYQUIST_25FPS = 12.5

# Rest-pose bone directions (unit vectors, +y up) for the default skeleton.
REST_DIRECTIONS = {
    "right_hip": (1.0, 0.0, 0.0),
    "right_knee": (0.0, -1.0, 0.0),
    "right_ankle": (0.0, -1.0, 0.0),
    "left_hip": (-1.0, 0.0, 0.0),
    "left_knee": (0.0, -1.0, 0.0),
    "left_ankle": (0.0, -1.0, 0.0),
    "spine": (0.0, 1.0, 0.0),
    "thorax": (0.0, 1.0, 0.0),
    "neck": (0.0, 1.0, 0.0),
    "head": (0.0, 1.0, 0.0),
    "left_shoulder": (-1.0, 0.0, 0.0),
    "left_elbow": (0.0, -1.0, 0.0),
    "left_wrist": (0.0, -1.0, 0.0),
    "right_shoulder": (1.0, 0.0, 0.0),
    "right_elbow": (0.0, -1.0, 0.0),
    "right_wrist": (0.0, -1.0, 0.0),
}

# Peak displacement (mm) per joint of the default skeleton, by name.
_AMPLITUDE_SCALE = 1.0
_GROUP_AMPLITUDE = {
    "pelvis": 0.0,
    "right_hip": 10.0, "left_hip": 10.0,
    "right_knee": 35.0, "left_knee": 35.0,
    "right_ankle": 60.0, "left_ankle": 60.0,
    "spine": 8.0, "thorax": 10.0, "neck": 12.0, "head": 18.0,
    "right_shoulder": 15.0, "left_shoulder": 15.0,
    "right_elbow": 42.0, "left_elbow": 42.0,
    "right_wrist": 68.0, "left_wrist": 68.0,
}

# Frequencies (Hz) every family shares, by body region.
_GROUP_FREQUENCY = {
    "pelvis": 0.5,
    "right_hip": 0.5, "left_hip": 0.5,
    "right_knee": 0.5, "left_knee": 0.5,
    "right_ankle": 0.5, "left_ankle": 0.5,
    "spine": 0.35, "thorax": 0.35, "neck": 0.35, "head": 0.35,
    "right_shoulder": 0.7, "left_shoulder": 0.7,
    "right_elbow": 0.7, "left_elbow": 0.7,
    "right_wrist": 0.7, "left_wrist": 0.7,
}

_FAMILY_BASE_KEY = 0x5F3759DF  # fixed: family parameters never vary with run seeds
_COMMON_SHARE = 0.4   # fraction of each joint's amplitude at the shared frequency
# Signature frequencies are spaced well apart so one family's content is
# close to orthogonal to every other family's within a 20-frame window.
_SIGNATURE_BASE_HZ = 1.0
_SIGNATURE_STEP_HZ = 0.5


def rest_pose(skeleton: Skeleton | None = None, scale: float = 1.0) -> np.ndarray:
    """Rest-pose joint positions (J, 3) via forward kinematics, root at origin."""
    skeleton = skeleton or default_skeleton()
    pose = np.zeros((skeleton.n_joints, 3))
    for p, c in traversal_order(skeleton):
        name = skeleton.joint_names[c]
        if name not in REST_DIRECTIONS:
            raise KeyError(f"no rest direction for joint {name!r}")
        pose[c] = pose[p] + scale * skeleton.offsets[c] * np.asarray(REST_DIRECTIONS[name])
    return pose


@dataclass(frozen=True)
class MotionFamily:
    """Per-joint oscillation parameters of one synthetic action.

    Each of the K components contributes
    ``amplitude_mm[k, j] * sin(2*pi*frequency_hz[k, j]*t + phase[k, j])``
    along the unit vector ``direction[k, j]``.  ``phase=None`` means gen
    draws the phases from its seed, which is what distinguishes recordings
    and subjects of the same action: one uniform global shift plus a fixed
    per-joint pattern derived from the family id, so the family's internal
    phase relationships are part of its identity while no two recordings
    share a trajectory.
    """

    family_id: str
    amplitude_mm: np.ndarray   # (K, J)
    frequency_hz: np.ndarray   # (K, J)
    direction: np.ndarray      # (K, J, 3)
    phase: np.ndarray | None = None  # (K, J) radians, or None

    def __post_init__(self):
        object.__setattr__(self, "amplitude_mm", np.asarray(self.amplitude_mm, dtype=np.float64))
        object.__setattr__(self, "frequency_hz", np.asarray(self.frequency_hz, dtype=np.float64))
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=np.float64))
        if self.phase is not None:
            object.__setattr__(self, "phase", np.asarray(self.phase, dtype=np.float64))
        if np.any(self.amplitude_mm < 0):
            raise ValueError("amplitudes must be >= 0")
        if np.any(self.frequency_hz <= 0) or np.any(self.frequency_hz >= NYQUIST_25FPS):
            raise ValueError(f"frequencies must lie in (0, {NYQUIST_25FPS}) Hz")


@dataclass(frozen=True)
class EstimationNoise:
    """Monocular-estimation error model: log-space per-frame scale jitter
    plus i.i.d. Gaussian joint noise (mm)."""

    scale_jitter_sigma: float = 0.0
    joint_noise_sigma_mm: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.scale_jitter_sigma < 0 or self.joint_noise_sigma_mm < 0:
            raise ValueError("noise sigmas must be >= 0")

    def to_dict(self) -> dict:
        return {
            "scale_jitter_sigma": self.scale_jitter_sigma,
            "joint_noise_sigma_mm": self.joint_noise_sigma_mm,
            "seed": self.seed,
        }


def _unit_vectors(rng: CounterRng, count: int, start: int) -> np.ndarray:
    """Deterministic unit vectors from a counter stream (Gaussian direction)."""
    raw = rng.normals(3 * count, start=start).reshape(count, 3)
    norms = np.linalg.norm(raw, axis=1)
    norms[norms < 1e-12] = 1.0
    return raw / norms[:, None]


def default_families(n_families: int = 15, skeleton: Skeleton | None = None) -> list[MotionFamily]:
    """Synthetic stand-ins for the dataset's actions.

    Every family mixes two components per joint: a body-region frequency
    shared by all families (torso 0.35, legs 0.5, arms 0.7 Hz) and a
    family-specific signature frequency, with family-specific directions
    and amplitude jitter.  Family parameters depend only on the family
    index, never on experiment seeds.
    """
    skeleton = skeleton or default_skeleton()
    j = skeleton.n_joints
    names = skeleton.joint_names
    group_amp = np.asarray([_GROUP_AMPLITUDE[n] for n in names]) * _AMPLITUDE_SCALE
    group_freq = np.asarray([_GROUP_FREQUENCY[n] for n in names])

    families = []
    for k in range(n_families):
        rng = CounterRng(derive_seed(_FAMILY_BASE_KEY, "family", k))
        jitter = 0.85 + 0.3 * rng.uniforms(2 * j, start=0).reshape(2, j)
        amp = np.stack([
            group_amp * _COMMON_SHARE * jitter[0],
            group_amp * (1.0 - _COMMON_SHARE) * jitter[1],
        ])
        signature = _SIGNATURE_BASE_HZ + _SIGNATURE_STEP_HZ * k
        freq = np.stack([group_freq, np.full(j, signature)])
        direction = np.stack([
            _unit_vectors(rng, j, start=1000),
            _unit_vectors(rng, j, start=1000 + 3 * j),
        ])
        families.append(MotionFamily(
            family_id=f"action{k + 1:02d}",
            amplitude_mm=amp,
            frequency_hz=freq,
            direction=direction,
        ))
    return families


def gen_motion(family: MotionFamily, subject_scale: float, duration_frames: int,
               seed: int, fps: int = 50, skeleton: Skeleton | None = None,
               subject: str = "", recording: int = 1) -> Motion:
    """Generate one recording of a family at a subject's body scale.

    Sinusoidal displacement targets around the rest pose are renormalized
    per frame so every bone length equals ``subject_scale`` times its
    skeleton offset (bone-consistent, like marker-based capture).  The
    seed only randomizes phases, and only when the family leaves them
    unspecified.
    """
    if duration_frames < 1:
        raise ValueError("duration_frames must be >= 1")
    skeleton = skeleton or default_skeleton()
    k, j = family.amplitude_mm.shape
    if j != skeleton.n_joints:
        raise ValueError(f"family is defined for {j} joints, skeleton has {skeleton.n_joints}")

    if family.phase is not None:
        phases = family.phase
    else:
        theta = 2.0 * np.pi * CounterRng(seed).uniforms(1)[0]
        pattern_rng = CounterRng(derive_seed(_FAMILY_BASE_KEY, "phase", family.family_id))
        pattern = 2.0 * np.pi * pattern_rng.uniforms(k * j).reshape(k, j)
        phases = theta + pattern

    t = np.arange(duration_frames) / fps
    # (N, K, J) oscillation values -> (N, J, 3) displacements
    osc = family.amplitude_mm * np.sin(
        2.0 * np.pi * family.frequency_hz * t[:, None, None] + phases
    )
    disp = np.einsum("nkj,kjd->njd", osc, family.direction)
    targets = rest_pose(skeleton) + disp

    bones = traversal_order(skeleton)
    frames = fit_frames(targets, bones, skeleton.root, skeleton.offsets)
    if subject_scale != 1.0:
        frames = frames * subject_scale
    return Motion(
        frames=frames,
        fps=fps,
        action=family.family_id,
        subject=subject,
        source="synthetic",
        recording=recording,
    )


def corrupt_as_estimated(motion: Motion, noise: EstimationNoise,
                         seed: int | None = None, root: int = 0) -> Motion:
    """Emulate a video-estimated version of a motion.

    Per frame n, root-relative joint positions are multiplied by
    ``s_n = exp(g_n)`` with ``g_n ~ N(0, scale_jitter_sigma^2)`` (stream
    "scale", draw n), then ``N(0, joint_noise_sigma^2)`` is added to every
    coordinate (stream "joint", draw n*J*3 + j*3 + d).  Zero sigmas leave
    the corresponding step out entirely, so zero noise is the identity.
    """
    motion.validate()
    base = noise.seed if seed is None else seed
    frames = motion.frames
    n, j = frames.shape[:2]

    if noise.scale_jitter_sigma > 0:
        g = CounterRng(derive_seed(base, "scale")).normals(n) * noise.scale_jitter_sigma
        scales = np.exp(g)
        root_pos = frames[:, root:root + 1, :]
        frames = root_pos + (frames - root_pos) * scales[:, None, None]
    if noise.joint_noise_sigma_mm > 0:
        noise_stream = CounterRng(derive_seed(base, "joint"))
        offsets = noise_stream.normals(n * j * 3).reshape(n, j, 3)
        frames = frames + offsets * noise.joint_noise_sigma_mm

    return replace(motion, frames=frames, source="estimated")
