"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The two sweep tests
train 90 (short-term) and 60 (long-term) models and dominate the runtime;
expect roughly an hour on a desktop CPU for the full suite.
"""

from __future__ import annotations

import filecmp
import time
from dataclasses import replace

import numpy as np
import pytest

from hmp_adapt.harness import (CONDITIONS, default_experiment_config, generate_corpus,
                               make_matrix_configs, run_matrix, sliding_windows)
from hmp_adapt.metrics import mpjpe_frame
from hmp_adapt.motion_io import Motion, read_motion, write_motion
from hmp_adapt.predictor import (PredictorModel, TrainConfig, dct, grad_check, idct,
                                 init_model, load_model, predict, save_model, train,
                                 zero_velocity)
from hmp_adapt.retarget import bone_lengths, scale_fit
from hmp_adapt.rng import derive_seed
from hmp_adapt.skeleton import default_skeleton, traversal_order
from hmp_adapt.synth import EstimationNoise, corrupt_as_estimated, default_families, gen_motion
from hmp_adapt.harness import evaluate_windows, window_stack, validation_windows
from conftest import random_tree_skeleton


def _passed(criterion: int, detail: str) -> None:
    print(f"[criterion {criterion:2d}] PASS  {detail}")


@pytest.fixture(scope="session")
def short_sweep(tmp_path_factory):
    base = default_experiment_config(seed=2025)
    configs = make_matrix_configs(base)
    out = tmp_path_factory.mktemp("short_sweep")
    started = time.time()
    table = run_matrix(configs, out_dir=out)
    return base, configs, table, out, time.time() - started


@pytest.fixture(scope="session")
def long_sweep(tmp_path_factory):
    base = default_experiment_config(seed=2025, long_term=True)
    configs = make_matrix_configs(base, conditions=("baseline", "with_video"))
    out = tmp_path_factory.mktemp("long_sweep")
    started = time.time()
    table = run_matrix(configs, out_dir=out)
    return base, configs, table, out, time.time() - started


def test_c01_paper_scale_results_replaced_by_synthetic_suites():
    # Reproducing the published mm numbers needs the license-gated capture
    # dataset and pretrained estimators; this artifact replaces them with
    # the direction and property criteria below (2..10), which operate on
    # the deterministic synthetic corpus.
    reference = {"baseline@400": 47.30, "with_video@400": 46.91, "with_gt@400": 46.17}
    assert reference["with_gt@400"] < reference["with_video@400"] < reference["baseline@400"]
    _passed(1, "desk-scale artifact: published numbers stand in as direction "
               "references only; criteria 2-10 are the executable replacements")


def test_c02_scale_fit_exactness():
    rng = np.random.default_rng(20250810)
    started = time.time()
    for case in range(1000):
        sk = random_tree_skeleton(rng, max_joints=32)
        n = int(rng.integers(1, 101))
        frames = rng.uniform(-1000.0, 1000.0, (n, sk.n_joints, 3))
        motion = Motion(frames, fps=25)
        fitted = scale_fit(motion, sk)
        bones = traversal_order(sk)
        offsets = np.array([sk.offsets[c] for _, c in bones])
        lengths = bone_lengths(fitted, sk)
        assert np.max(np.abs(lengths - offsets) / offsets) <= 1e-9, case
        for p, c in bones:
            din = frames[:, c] - frames[:, p]
            dfit = fitted.frames[:, c] - fitted.frames[:, p]
            uin = din / np.linalg.norm(din, axis=1, keepdims=True)
            ufit = dfit / np.linalg.norm(dfit, axis=1, keepdims=True)
            assert np.max(np.abs(uin - ufit)) <= 1e-9
        assert np.array_equal(fitted.frames[:, sk.root], frames[:, sk.root])
        twice = scale_fit(fitted, sk)
        assert np.max(np.abs(twice.frames - fitted.frames)) <= 1e-9 * (
            1.0 + np.abs(fitted.frames).max())
    elapsed = time.time() - started
    assert elapsed < 10.0, f"took {elapsed:.1f}s"
    _passed(2, f"1000 random motions: lengths, directions, root, idempotence "
               f"all within 1e-9 ({elapsed:.1f}s)")


def test_c03_scale_fit_recovery():
    skeleton = default_skeleton()
    families = default_families(15, skeleton)
    started = time.time()
    medians = {}
    for sigma in (0.02, 0.05, 0.1):
        ratios = []
        for trial in range(100):
            family = families[trial % len(families)]
            clean = gen_motion(family, 1.0, 50, seed=derive_seed(11, sigma, trial, "gen"),
                               fps=25, skeleton=skeleton)
            noise = EstimationNoise(scale_jitter_sigma=sigma)
            corrupted = corrupt_as_estimated(clean, noise,
                                             seed=derive_seed(11, sigma, trial, "noise"),
                                             root=skeleton.root)
            fitted = scale_fit(corrupted, skeleton)
            err_corrupted = np.mean(np.linalg.norm(corrupted.frames - clean.frames, axis=2))
            err_fitted = np.mean(np.linalg.norm(fitted.frames - clean.frames, axis=2))
            assert err_corrupted > 0
            ratios.append(err_fitted / err_corrupted)
        medians[sigma] = float(np.median(ratios))
        assert medians[sigma] <= 0.5, f"sigma={sigma}: median ratio {medians[sigma]}"
    elapsed = time.time() - started
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    _passed(3, "median fitted/corrupted MPJPE ratio per sigma: "
               + ", ".join(f"{s}: {medians[s]:.2e}" for s in medians)
               + f" ({elapsed:.1f}s)")


def test_c04_gradient_correctness():
    rng = np.random.default_rng(404)
    started = time.time()
    worst = 0.0
    for _ in range(50):
        j = int(rng.integers(2, 7))
        p = int(rng.integers(4, 9))
        n = int(rng.integers(4, 9))
        c = int(rng.integers(2, p + n + 1))
        cfg = TrainConfig(seed=int(rng.integers(0, 10000)), observed_frames=p,
                          predicted_frames=n, coefficients=c)
        model = init_model(cfg, j)
        window = rng.normal(0.0, 200.0, (p + n, j, 3))
        worst = max(worst, grad_check(model, window, 1e-5))
    elapsed = time.time() - started
    assert worst < 1e-5, f"max relative gradient error {worst}"
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    _passed(4, f"50 random (model, window) pairs, max relative error {worst:.2e} "
               f"({elapsed:.1f}s)")


def test_c05_dct_round_trip():
    rng = np.random.default_rng(505)
    started = time.time()
    worst = 0.0
    for _ in range(1000):
        x = rng.normal(0.0, 500.0, int(rng.integers(1, 65)))
        worst = max(worst, float(np.max(np.abs(idct(dct(x)) - x))))
    elapsed = time.time() - started
    assert worst < 1e-9, f"max abs round-trip error {worst}"
    assert elapsed < 5.0, f"took {elapsed:.1f}s"
    _passed(5, f"1000 series (L <= 64), max abs error {worst:.2e} ({elapsed:.1f}s)")


def test_c06_predictor_sanity():
    config = default_experiment_config(seed=2025)
    skeleton = default_skeleton()
    corpus = generate_corpus(config, skeleton)
    length = config.train.window_length
    started = time.time()
    windows = []
    for action in config.actions:
        for subject in config.train_subjects:
            for recording in (1, 2):
                windows.extend(sliding_windows(corpus[(action, subject, recording)].frames,
                                               length))
    val = []
    for action in config.actions:
        for recording in (1, 2):
            val.extend(sliding_windows(corpus[(action, config.val_subject, recording)].frames,
                                       length))
    result = train(np.stack(windows), config.train, val_windows=np.stack(val))
    model_errors, zv_errors = [], []
    for action in config.actions:
        per_model, per_zv = [], []
        for recording in (1, 2):
            eval_motion = corpus[(action, config.test_subject, recording)]
            n_future = config.train.predicted_frames
            per_model.append(evaluate_windows(
                lambda obs: predict(result.model, obs, n_future), eval_motion,
                config.train.observed_frames, n_future, (400,), skeleton)[400])
            per_zv.append(evaluate_windows(
                lambda obs: zero_velocity(obs, n_future), eval_motion,
                config.train.observed_frames, n_future, (400,), skeleton)[400])
        model_errors.append(np.mean(per_model))
        zv_errors.append(np.mean(per_zv))
    model_avg = float(np.mean(model_errors))
    zv_avg = float(np.mean(zv_errors))
    elapsed = time.time() - started
    assert model_avg <= 0.8 * zv_avg, (
        f"model {model_avg:.3f} mm vs zero-velocity {zv_avg:.3f} mm")
    assert elapsed < 300.0, f"took {elapsed:.1f}s"
    _passed(6, f"average MPJPE@400ms {model_avg:.3f} mm vs zero-velocity "
               f"{zv_avg:.3f} mm ({(1 - model_avg / zv_avg) * 100:.1f}% lower, "
               f"{elapsed:.0f}s)")


def test_c07_adaptation_direction(short_sweep):
    base, configs, table, out, elapsed = short_sweep
    avg = {c: float(np.mean([table.average(c, h) for h in (160, 320, 400)]))
           for c in CONDITIONS}
    assert elapsed < 1800.0, f"sweep took {elapsed:.0f}s"
    assert avg["with_gt"] < avg["with_video"] < avg["baseline"], avg
    improvement = 1.0 - avg["with_video"] / avg["baseline"]
    assert improvement >= 0.02, f"with_video improves baseline by {improvement * 100:.2f}%"
    _passed(7, "average over {160,320,400} ms: "
               f"gt {avg['with_gt']:.3f} < video {avg['with_video']:.3f} < "
               f"baseline {avg['baseline']:.3f} mm; improvement "
               f"{improvement * 100:.1f}% ({elapsed:.0f}s)")


def test_c08_long_term_direction(long_sweep):
    base, configs, table, out, elapsed = long_sweep
    assert elapsed < 1800.0, f"sweep took {elapsed:.0f}s"
    averages = {}
    for h in (560, 1000):
        averages[h] = (table.average("with_video", h), table.average("baseline", h))
        video, baseline = averages[h]
        assert video <= baseline, f"{h} ms: with_video {video:.3f} > baseline {baseline:.3f}"
    _passed(8, "long-term averages (video vs baseline): "
               + ", ".join(f"{h}ms {v:.3f} <= {b:.3f}" for h, (v, b) in averages.items())
               + f" ({elapsed:.0f}s)")


def test_c09_determinism(short_sweep, tmp_path):
    base, configs, table, out, _ = short_sweep
    rerun_dir = tmp_path / "rerun"
    rerun_table = run_matrix(configs, out_dir=rerun_dir)
    assert rerun_table.errors == table.errors
    assert filecmp.cmp(out / "results.csv", rerun_dir / "results.csv", shallow=False), \
        "results.csv differs between identically seeded runs"
    _passed(9, "repeated sweep reproduced results.csv byte-identically")


def test_c10_round_trip_io(tmp_path):
    rng = np.random.default_rng(1010)
    path = tmp_path / "m.csv"
    for case in range(1000):
        n = int(rng.integers(1, 5))
        j = int(rng.integers(1, 6))
        motion = Motion(
            frames=rng.uniform(-2000.0, 2000.0, (n, j, 3)),
            fps=int(rng.choice([25, 50])),
            action=f"a{case % 7}",
            subject=str(int(rng.integers(1, 12))),
            source=str(rng.choice(["mocap", "estimated", "synthetic"])),
            recording=int(rng.integers(1, 3)),
        )
        write_motion(motion, path)
        back = read_motion(path)
        assert np.array_equal(back.frames, motion.frames), case
        assert (back.fps, back.action, back.subject, back.source, back.recording) == \
               (motion.fps, motion.action, motion.subject, motion.source, motion.recording)

    model_path = tmp_path / "m.json"
    for case in range(1000):
        j = int(rng.integers(1, 7))
        p = int(rng.integers(2, 8))
        nf = int(rng.integers(1, 8))
        c = int(rng.integers(1, p + nf + 1))
        model = PredictorModel(
            coeff_weights=rng.normal(0, 1, (c, c)),
            joint_weights=rng.normal(0, 1, (j, j)),
            bias=rng.normal(0, 1, (c, j)),
            seed=int(rng.integers(0, 2 ** 31)),
            observed_frames=p,
            predicted_frames=nf,
            train_config=None,
        )
        save_model(model, model_path)
        back = load_model(model_path)
        assert np.array_equal(back.coeff_weights, model.coeff_weights), case
        assert np.array_equal(back.joint_weights, model.joint_weights)
        assert np.array_equal(back.bias, model.bias)
        assert (back.seed, back.observed_frames, back.predicted_frames) == \
               (model.seed, model.observed_frames, model.predicted_frames)
    _passed(10, "1000 motion CSV and 1000 model JSON round trips are exact")
