from __future__ import annotations

import numpy as np
import pytest

from hmp_adapt.skeleton import Skeleton, default_skeleton


@pytest.fixture(scope="session")
def skeleton():
    return default_skeleton()


@pytest.fixture
def chain3():
    """Minimal 3-joint chain 0 -> 1 -> 2 with unit offsets."""
    return Skeleton(
        joint_names=["root", "mid", "tip"],
        parent=[-1, 0, 1],
        offsets=np.array([0.0, 1.0, 1.0]),
        eval_subset=[1, 2],
    )


def random_tree_skeleton(rng: np.random.Generator, max_joints: int = 32) -> Skeleton:
    """Random valid skeleton: parent[j] < j guarantees a tree."""
    j = int(rng.integers(2, max_joints + 1))
    parent = [-1] + [int(rng.integers(0, i)) for i in range(1, j)]
    offsets = np.concatenate([[0.0], rng.uniform(10.0, 500.0, j - 1)])
    n_eval = int(rng.integers(1, j))
    eval_subset = sorted(rng.choice(np.arange(1, j), size=n_eval, replace=False).tolist())
    return Skeleton(
        joint_names=[f"j{i}" for i in range(j)],
        parent=parent,
        offsets=offsets,
        eval_subset=[int(i) for i in eval_subset],
    )
