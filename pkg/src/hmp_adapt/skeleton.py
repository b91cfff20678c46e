"""Kinematic tree and static bone offsets: the joint definition of motion capture.

A :class:`Skeleton` is a rooted tree of named joints.  Every non-root joint
carries a static offset, the rest-pose distance in millimeters from its
parent; these offsets are the bone lengths that scale fitting enforces.
Coordinates throughout the package are millimeters with +y up.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ROOT_PARENT = -1


class SkeletonError(ValueError):
    """A skeleton invariant is violated."""


class CycleDetected(SkeletonError):
    pass


class MultipleRoots(SkeletonError):
    pass


class NonPositiveOffset(SkeletonError):
    pass


class EmptyEvalSubset(SkeletonError):
    pass


@dataclass(frozen=True)
class Skeleton:
    """Joint tree with static bone offsets.

    ``parent[j]`` is the parent joint index (ROOT_PARENT for the root) and
    ``offsets[j]`` the rest-pose parent-to-j distance in mm (0 at the root).
    ``eval_subset`` lists the joints included in error reporting.
    """

    joint_names: list[str]
    parent: list[int]
    offsets: np.ndarray
    eval_subset: list[int] = field(default_factory=list)

    def __post_init__(self):
        object.__setattr__(self, "offsets", np.asarray(self.offsets, dtype=np.float64))

    @property
    def n_joints(self) -> int:
        return len(self.joint_names)

    @property
    def root(self) -> int:
        return self.parent.index(ROOT_PARENT)

    def joint_index(self, name: str) -> int:
        try:
            return self.joint_names.index(name)
        except ValueError:
            raise KeyError(f"no joint named {name!r}") from None


def validate(skeleton: Skeleton) -> None:
    """Check all skeleton invariants, raising on the first violation.

    Raises:
        MultipleRoots: more than one joint has the sentinel parent.
        CycleDetected: the parent links do not form a tree rooted at the
            sentinel (includes the zero-root case).
        NonPositiveOffset: a non-root offset is <= 0, or the root offset
            is nonzero.
        EmptyEvalSubset: the evaluation subset is empty.
        SkeletonError: structural problems (length mismatches, parent index
            out of range, eval subset out of range or duplicated).
    """
    n = skeleton.n_joints
    if n == 0:
        raise SkeletonError("skeleton has no joints")
    if len(skeleton.parent) != n or len(skeleton.offsets) != n:
        raise SkeletonError("joint_names, parent and offsets must have equal length")

    roots = [j for j, p in enumerate(skeleton.parent) if p == ROOT_PARENT]
    if len(roots) > 1:
        raise MultipleRoots(f"joints {roots} all have parent {ROOT_PARENT}")
    for j, p in enumerate(skeleton.parent):
        if p != ROOT_PARENT and not 0 <= p < n:
            raise SkeletonError(f"parent index {p} of joint {j} out of range")
    if not roots:
        raise CycleDetected("no root joint; parent links must contain a cycle")

    # Walk each joint up to the root; revisiting a joint on one walk is a cycle.
    state = np.zeros(n, dtype=np.int8)  # 0 unvisited, 1 on current walk, 2 done
    for j in range(n):
        path = []
        k = j
        while state[k] == 0:
            state[k] = 1
            path.append(k)
            p = skeleton.parent[k]
            if p == ROOT_PARENT:
                break
            k = p
        else:
            if state[k] == 1:
                raise CycleDetected(f"cycle through joint {k}")
        for v in path:
            state[v] = 2

    root = roots[0]
    if skeleton.offsets[root] != 0.0:
        raise NonPositiveOffset(f"root offset must be 0, got {skeleton.offsets[root]}")
    for j in range(n):
        if j != root and not skeleton.offsets[j] > 0.0:
            raise NonPositiveOffset(f"offset of joint {j} is {skeleton.offsets[j]}")

    if not skeleton.eval_subset:
        raise EmptyEvalSubset("eval_subset must name at least one joint")
    seen = set()
    for j in skeleton.eval_subset:
        if not 0 <= j < n:
            raise SkeletonError(f"eval_subset index {j} out of range")
        if j in seen:
            raise SkeletonError(f"eval_subset index {j} duplicated")
        seen.add(j)


def traversal_order(skeleton: Skeleton) -> list[tuple[int, int]]:
    """Breadth-first (parent, child) bone pairs from the root outward.

    Every bone appears exactly once, a bone only after the bone ending at
    its parent, and siblings in ascending joint-index order.
    """
    validate(skeleton)
    children: list[list[int]] = [[] for _ in range(skeleton.n_joints)]
    for j, p in enumerate(skeleton.parent):
        if p != ROOT_PARENT:
            children[p].append(j)
    order = []
    queue = deque([skeleton.root])
    while queue:
        p = queue.popleft()
        for c in children[p]:  # ascending by construction
            order.append((p, c))
            queue.append(c)
    return order


def _require_keys(obj: dict, allowed: set[str], what: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SkeletonError(f"unknown {what} field(s): {sorted(unknown)}")
    missing = allowed - set(obj)
    if missing:
        raise SkeletonError(f"missing {what} field(s): {sorted(missing)}")


def skeleton_from_dict(data: dict) -> Skeleton:
    """Build and validate a skeleton from its JSON document form (strict)."""
    _require_keys(data, {"joints", "eval_subset"}, "skeleton")
    joints = data["joints"]
    if not isinstance(joints, list):
        raise SkeletonError("'joints' must be a list")
    names, parents, offsets = [], [], []
    for entry in joints:
        _require_keys(entry, {"name", "parent", "offset_mm"}, "joint")
        names.append(str(entry["name"]))
        parents.append(int(entry["parent"]))
        offsets.append(float(entry["offset_mm"]))
    skel = Skeleton(
        joint_names=names,
        parent=parents,
        offsets=np.asarray(offsets),
        eval_subset=[int(j) for j in data["eval_subset"]],
    )
    validate(skel)
    return skel


def skeleton_to_dict(skeleton: Skeleton) -> dict:
    return {
        "joints": [
            {"name": n, "parent": p, "offset_mm": float(o)}
            for n, p, o in zip(skeleton.joint_names, skeleton.parent, skeleton.offsets)
        ],
        "eval_subset": list(skeleton.eval_subset),
    }


def load_skeleton(path: str | Path) -> Skeleton:
    with open(path, encoding="utf-8") as f:
        return skeleton_from_dict(json.load(f))


def save_skeleton(skeleton: Skeleton, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(skeleton_to_dict(skeleton), f, indent=2)
        f.write("\n")


def default_skeleton() -> Skeleton:
    """17-joint humanoid used throughout the synthetic experiments.

    The root is the pelvis; the evaluation subset is the 16 non-root joints.
    Offsets are plausible adult bone lengths in mm.
    """
    joints = [
        ("pelvis", ROOT_PARENT, 0.0),
        ("right_hip", 0, 132.0),
        ("right_knee", 1, 442.0),
        ("right_ankle", 2, 434.0),
        ("left_hip", 0, 132.0),
        ("left_knee", 4, 442.0),
        ("left_ankle", 5, 434.0),
        ("spine", 0, 233.0),
        ("thorax", 7, 257.0),
        ("neck", 8, 121.0),
        ("head", 9, 115.0),
        ("left_shoulder", 8, 151.0),
        ("left_elbow", 11, 278.0),
        ("left_wrist", 12, 252.0),
        ("right_shoulder", 8, 151.0),
        ("right_elbow", 14, 278.0),
        ("right_wrist", 15, 252.0),
    ]
    skel = Skeleton(
        joint_names=[n for n, _, _ in joints],
        parent=[p for _, p, _ in joints],
        offsets=np.asarray([o for _, _, o in joints]),
        eval_subset=list(range(1, 17)),
    )
    validate(skel)
    return skel
