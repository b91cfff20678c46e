"""A small trajectory-space motion predictor with hand-derived gradients.

The model works per coordinate channel in the orthonormal DCT-II domain.
An observed window of P frames is padded to length L = P + N by repeating
the last frame, transformed along time, and truncated to the first C
coefficients ``c`` (shape C x J per coordinate).  The prediction is

    c_hat = Wc @ c @ Wj + b + c

zero-padded back to L coefficients, inverse-transformed, and the final N
frames are returned.  With Wc = Wj = 0 and b = 0 the model is exactly the
zero-velocity predictor (up to coefficient truncation), so training starts
from a small perturbation of that solution.  All gradients are closed-form
matrix calculus; no autodiff is involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

DIVERGENCE_LIMIT = 1e12


class FrameCountMismatch(ValueError):
    pass


class EmptyDataset(ValueError):
    pass


class NonFiniteLoss(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Orthonormal DCT-II
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def dct_matrix(length: int) -> np.ndarray:
    """Orthonormal DCT-II basis, rows indexed by frequency.

    D[k, n] = s_k * cos(pi * (2n + 1) * k / (2L)) with s_0 = sqrt(1/L) and
    s_k = sqrt(2/L) otherwise; D is orthogonal, so the inverse is D.T.
    """
    n = np.arange(length)
    k = np.arange(length)[:, None]
    basis = np.cos(np.pi * (2 * n + 1) * k / (2 * length))
    basis[0] *= np.sqrt(1.0 / length)
    basis[1:] *= np.sqrt(2.0 / length)
    basis.setflags(write=False)
    return basis


def dct(series: np.ndarray, axis: int = -1) -> np.ndarray:
    """Orthonormal DCT-II along ``axis``."""
    series = np.asarray(series, dtype=np.float64)
    moved = np.moveaxis(series, axis, -1)
    out = moved @ dct_matrix(moved.shape[-1]).T
    return np.moveaxis(out, -1, axis)


def idct(coeffs: np.ndarray, axis: int = -1) -> np.ndarray:
    """Inverse of :func:`dct` (orthonormal DCT-III)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    moved = np.moveaxis(coeffs, axis, -1)
    out = moved @ dct_matrix(moved.shape[-1])
    return np.moveaxis(out, -1, axis)


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    iterations: int = 2000
    batch_size: int = 16
    seed: int = 0
    observed_frames: int = 10
    predicted_frames: int = 10
    coefficients: int | None = None  # None: 15 for short windows, full otherwise

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        for name in ("iterations", "batch_size", "observed_frames", "predicted_frames"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        c = self.n_coefficients
        if not 1 <= c <= self.window_length:
            raise ValueError(f"coefficients must be in 1..{self.window_length}, got {c}")

    @property
    def window_length(self) -> int:
        return self.observed_frames + self.predicted_frames

    @property
    def n_coefficients(self) -> int:
        if self.coefficients is not None:
            return self.coefficients
        if self.predicted_frames <= 10:
            return min(self.window_length, 15)
        return self.window_length

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "iterations": self.iterations,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "observed_frames": self.observed_frames,
            "predicted_frames": self.predicted_frames,
            "coefficients": self.coefficients,
        }


@dataclass(frozen=True)
class PredictorModel:
    """Coefficient-mixing weights (C x C), joint-mixing weights (J x J),
    bias (C x J, shared across the three coordinate channels), and the
    window contract the model was built for."""

    coeff_weights: np.ndarray
    joint_weights: np.ndarray
    bias: np.ndarray
    seed: int
    observed_frames: int
    predicted_frames: int
    train_config: dict | None = None

    def __post_init__(self):
        for name in ("coeff_weights", "joint_weights", "bias"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        c = self.coeff_weights.shape[0]
        j = self.joint_weights.shape[0]
        if self.coeff_weights.shape != (c, c) or self.joint_weights.shape != (j, j):
            raise ValueError("coeff_weights and joint_weights must be square")
        if self.bias.shape != (c, j):
            raise ValueError(f"bias must be (C, J) = ({c}, {j}), got {self.bias.shape}")
        if c > self.observed_frames + self.predicted_frames:
            raise ValueError("more coefficients than window frames")
        for name in ("coeff_weights", "joint_weights", "bias"):
            if not np.isfinite(getattr(self, name)).all():
                raise ValueError(f"{name} contains non-finite values")

    @property
    def n_coefficients(self) -> int:
        return self.coeff_weights.shape[0]

    @property
    def n_joints(self) -> int:
        return self.joint_weights.shape[0]


def init_model(config: TrainConfig, n_joints: int) -> PredictorModel:
    """Seeded uniform(-1e-3, 1e-3) init: a small perturbation of zero velocity.

    Parameters are drawn from numpy's default generator in the fixed order
    coeff_weights, joint_weights, bias.
    """
    rng = np.random.default_rng(config.seed)
    c = config.n_coefficients
    return PredictorModel(
        coeff_weights=rng.uniform(-1e-3, 1e-3, (c, c)),
        joint_weights=rng.uniform(-1e-3, 1e-3, (n_joints, n_joints)),
        bias=rng.uniform(-1e-3, 1e-3, (c, n_joints)),
        seed=config.seed,
        observed_frames=config.observed_frames,
        predicted_frames=config.predicted_frames,
        train_config=config.to_dict(),
    )


def pad_last_frame(observed: np.ndarray, n_future: int) -> np.ndarray:
    """Extend (..., P, J, 3) to (..., P + n_future, J, 3) by repeating the
    final observed frame."""
    observed = np.asarray(observed, dtype=np.float64)
    last = observed[..., -1:, :, :]
    reps = [1] * observed.ndim
    reps[-3] = n_future
    return np.concatenate([observed, np.tile(last, reps)], axis=-3)


def zero_velocity(observed: np.ndarray, n_future: int) -> np.ndarray:
    """Repeat the last observed frame n_future times."""
    observed = np.asarray(observed, dtype=np.float64)
    reps = [1] * observed.ndim
    reps[-3] = n_future
    return np.tile(observed[..., -1:, :, :], reps)


def window_coeffs(observed: np.ndarray, n_future: int, n_coeffs: int) -> np.ndarray:
    """First ``n_coeffs`` DCT coefficients of the last-frame-padded window.

    Accepts (..., P, J, 3); returns (..., n_coeffs, J, 3).
    """
    padded = pad_last_frame(observed, n_future)
    return dct(padded, axis=-3)[..., :n_coeffs, :, :]


def _mix(model_or_params, coeffs: np.ndarray) -> np.ndarray:
    """Apply c_hat = Wc c Wj + b + c to channel-first coefficients (..., C, J)."""
    wc, wj, b = model_or_params
    return (wc @ coeffs) @ wj + b + coeffs


def _tail_basis(observed_frames: int, n_future: int, n_coeffs: int) -> np.ndarray:
    # Rows P..L-1 of the inverse transform restricted to the first C
    # coefficients: identical to zero-padding to L, applying the full
    # inverse DCT, and keeping the last N frames.
    return np.ascontiguousarray(
        dct_matrix(observed_frames + n_future)[:n_coeffs, observed_frames:].T
    )


def predict(model: PredictorModel, observed: np.ndarray, n_future: int | None = None) -> np.ndarray:
    """Predict n_future frames from exactly ``model.observed_frames`` frames.

    Accepts a single window (P, J, 3) or a batch (..., P, J, 3).
    """
    observed = np.asarray(observed, dtype=np.float64)
    if n_future is None:
        n_future = model.predicted_frames
    p = observed.shape[-3]
    if p != model.observed_frames:
        raise FrameCountMismatch(
            f"model expects {model.observed_frames} observed frames, got {p}"
        )
    if observed.shape[-2] != model.n_joints:
        raise FrameCountMismatch(
            f"model expects {model.n_joints} joints, got {observed.shape[-2]}"
        )
    c = model.n_coefficients
    if c > p + n_future:
        raise FrameCountMismatch(
            f"window of {p + n_future} frames cannot carry {c} coefficients"
        )
    coeffs = np.moveaxis(window_coeffs(observed, n_future, c), -1, -3)
    mixed = _mix((model.coeff_weights, model.joint_weights, model.bias), coeffs)
    tail = _tail_basis(p, n_future, c)
    return np.moveaxis(tail @ mixed, -3, -1)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrainResult:
    model: PredictorModel
    losses: list[float]
    val_checks: list[tuple[int, float]] = field(default_factory=list)


def _batch_loss(params, coeffs, targets, tail) -> float:
    # coeffs (B, 3, C, J), targets (B, 3, N, J), channel-first layout
    resid = tail @ _mix(params, coeffs) - targets
    b, _, n, j = resid.shape
    return float(np.sum(resid * resid) / (b * j * n))


def _batch_loss_and_grads(params, coeffs, targets, tail):
    wc, wj, b = params
    t1 = wc @ coeffs
    mixed = t1 @ wj + b + coeffs
    resid = tail @ mixed - targets
    nb, _, n, j = resid.shape
    loss = float(np.sum(resid * resid) / (nb * j * n))
    g = (2.0 / (nb * j * n)) * (tail.T @ resid)
    right = coeffs @ wj
    d_wc = np.tensordot(g, right, axes=([0, 1, 3], [0, 1, 3]))
    d_wj = np.tensordot(t1, g, axes=([0, 1, 2], [0, 1, 2]))
    d_b = g.sum(axis=(0, 1))
    return loss, (d_wc, d_wj, d_b)


def _prepare_windows(windows, config: TrainConfig):
    """Channel-first coefficients (B, 3, C, J) and targets (B, 3, N, J)."""
    arr = np.asarray(windows, dtype=np.float64)
    if arr.ndim != 4 or arr.shape[0] == 0:
        raise EmptyDataset(f"need a non-empty (B, P+N, J, 3) window stack, got {arr.shape}")
    p, n = config.observed_frames, config.predicted_frames
    if arr.shape[1] != p + n:
        raise FrameCountMismatch(
            f"windows must have {p + n} frames (P={p}, N={n}), got {arr.shape[1]}"
        )
    coeffs = np.ascontiguousarray(
        np.moveaxis(window_coeffs(arr[:, :p], n, config.n_coefficients), -1, 1)
    )
    targets = np.ascontiguousarray(np.moveaxis(arr[:, p:], -1, 1))
    return coeffs, targets


def train(windows, config: TrainConfig, val_windows=None, val_interval: int = 200) -> TrainResult:
    """Mini-batch gradient descent on the squared-distance horizon loss.

    ``windows`` is a (B, P+N, J, 3) stack (or a list of such windows); the
    first P frames are the observation, the rest the target.  Batches of
    ``batch_size`` are drawn with replacement from a generator seeded with
    ``config.seed`` (the full dataset is used when it is no larger than the
    batch size).  If ``val_windows`` is given, the mean loss on it is
    checked every ``val_interval`` iterations and the best snapshot is
    returned.  Bit-reproducible for a fixed seed on one platform.
    """
    coeffs, targets = _prepare_windows(windows, config)
    n_windows = coeffs.shape[0]
    n_joints = coeffs.shape[3]
    tail = _tail_basis(config.observed_frames, config.predicted_frames, config.n_coefficients)

    val = None
    if val_windows is not None:
        val = _prepare_windows(val_windows, config)

    rng = np.random.default_rng(config.seed)
    model = init_model(config, n_joints)
    params = [model.coeff_weights.copy(), model.joint_weights.copy(), model.bias.copy()]

    losses: list[float] = []
    val_checks: list[tuple[int, float]] = []
    best_val = np.inf
    best_params = None

    def check_validation(iteration: int) -> None:
        nonlocal best_val, best_params
        v = _batch_loss(params, val[0], val[1], tail)
        val_checks.append((iteration, v))
        if v < best_val:
            best_val = v
            best_params = [p.copy() for p in params]

    for it in range(config.iterations):
        if n_windows <= config.batch_size:
            idx = np.arange(n_windows)
        else:
            idx = rng.integers(0, n_windows, size=config.batch_size)
        loss, grads = _batch_loss_and_grads(params, coeffs[idx], targets[idx], tail)
        losses.append(loss)
        if not np.isfinite(loss) or loss > DIVERGENCE_LIMIT:
            raise NonFiniteLoss(f"loss {loss} at iteration {it}; lower the learning rate")
        for p, g in zip(params, grads):
            p -= config.learning_rate * g
        if val is not None and (it + 1) % val_interval == 0:
            check_validation(it + 1)

    if val is not None and config.iterations % val_interval != 0:
        check_validation(config.iterations)
    if best_params is not None:
        params = best_params

    final = replace(
        model, coeff_weights=params[0], joint_weights=params[1], bias=params[2]
    )
    return TrainResult(model=final, losses=losses, val_checks=val_checks)


def window_loss(model: PredictorModel, windows) -> float:
    """Mean squared-distance horizon loss of ``model`` on a window stack."""
    config = TrainConfig(
        seed=model.seed,
        observed_frames=model.observed_frames,
        predicted_frames=model.predicted_frames,
        coefficients=model.n_coefficients,
    )
    coeffs, targets = _prepare_windows(windows, config)
    tail = _tail_basis(model.observed_frames, model.predicted_frames, model.n_coefficients)
    return _batch_loss((model.coeff_weights, model.joint_weights, model.bias),
                       coeffs, targets, tail)


def grad_check(model: PredictorModel, window: np.ndarray, epsilon: float = 1e-5) -> float:
    """Max discrepancy between analytic and central-difference gradients.

    The discrepancy per parameter is |analytic - numeric| / max(1, |analytic|,
    |numeric|).  ``window`` is a single (P+N, J, 3) window.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    config = TrainConfig(
        seed=model.seed,
        observed_frames=model.observed_frames,
        predicted_frames=model.predicted_frames,
        coefficients=model.n_coefficients,
    )
    coeffs, targets = _prepare_windows(np.asarray(window)[None], config)
    tail = _tail_basis(model.observed_frames, model.predicted_frames, model.n_coefficients)
    params = [model.coeff_weights.copy(), model.joint_weights.copy(), model.bias.copy()]
    _, grads = _batch_loss_and_grads(params, coeffs, targets, tail)

    worst = 0.0
    for p_idx, param in enumerate(params):
        flat = param.ravel()
        analytic = grads[p_idx].ravel()
        for i in range(flat.size):
            keep = flat[i]
            flat[i] = keep + epsilon
            hi = _batch_loss(params, coeffs, targets, tail)
            flat[i] = keep - epsilon
            lo = _batch_loss(params, coeffs, targets, tail)
            flat[i] = keep
            numeric = (hi - lo) / (2.0 * epsilon)
            denom = max(1.0, abs(analytic[i]), abs(numeric))
            worst = max(worst, abs(analytic[i] - numeric) / denom)
    return worst


# ---------------------------------------------------------------------------
# Model file
# ---------------------------------------------------------------------------

def save_model(model: PredictorModel, path: str | Path) -> None:
    doc = {
        "format": "hmp-adapt-model",
        "n_coefficients": model.n_coefficients,
        "n_joints": model.n_joints,
        "observed_frames": model.observed_frames,
        "predicted_frames": model.predicted_frames,
        "seed": model.seed,
        "coeff_weights": model.coeff_weights.ravel().tolist(),
        "joint_weights": model.joint_weights.ravel().tolist(),
        "bias": model.bias.ravel().tolist(),
        "train_config": model.train_config,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def load_model(path: str | Path) -> PredictorModel:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    if doc.get("format") != "hmp-adapt-model":
        raise ValueError(f"{path}: not a predictor model file")
    c, j = doc["n_coefficients"], doc["n_joints"]
    return PredictorModel(
        coeff_weights=np.asarray(doc["coeff_weights"]).reshape(c, c),
        joint_weights=np.asarray(doc["joint_weights"]).reshape(j, j),
        bias=np.asarray(doc["bias"]).reshape(c, j),
        seed=doc["seed"],
        observed_frames=doc["observed_frames"],
        predicted_frames=doc["predicted_frames"],
        train_config=doc["train_config"],
    )
