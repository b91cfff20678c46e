from __future__ import annotations

import numpy as np
import pytest

from hmp_adapt.metrics import (HorizonOutOfRange, LengthMismatch, SubsetOutOfRange,
                               evaluate_horizons, horizon_frame_index, horizon_loss,
                               mpjpe_frame, read_report, write_report)
from hmp_adapt.motion_io import Motion


class TestMpjpeFrame:
    def test_identical_poses(self):
        pose = np.random.default_rng(0).normal(size=(5, 3))
        assert mpjpe_frame(pose, pose, [0, 1, 2]) == 0.0

    def test_three_four_five(self):
        pred = np.array([[3.0, 4.0, 0.0], [9.0, 9.0, 9.0]])
        gt = np.zeros((2, 3))
        assert mpjpe_frame(pred, gt, [0]) == pytest.approx(5.0, abs=1e-12)

    def test_mean_of_two_distances(self):
        pred = np.array([[1.0, 0.0, 0.0], [0.0, 3.0, 0.0]])
        gt = np.zeros((2, 3))
        assert mpjpe_frame(pred, gt, [0, 1]) == pytest.approx(2.0, abs=1e-12)

    def test_symmetry_translation_scale(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = rng.normal(0, 100, (6, 3))
            b = rng.normal(0, 100, (6, 3))
            subset = [0, 2, 5]
            assert mpjpe_frame(a, b, subset) == pytest.approx(mpjpe_frame(b, a, subset))
            t = rng.normal(0, 50, 3)
            assert mpjpe_frame(a + t, b + t, subset) == pytest.approx(
                mpjpe_frame(a, b, subset), rel=1e-9)
            s = rng.uniform(-3, 3)
            assert mpjpe_frame(a * s, b * s, subset) == pytest.approx(
                abs(s) * mpjpe_frame(a, b, subset), rel=1e-9, abs=1e-12)

    def test_subset_out_of_range(self):
        with pytest.raises(SubsetOutOfRange):
            mpjpe_frame(np.zeros((2, 3)), np.zeros((2, 3)), [2])


class TestHorizonLoss:
    def test_identical(self):
        m = np.random.default_rng(2).normal(size=(4, 3, 3))
        assert horizon_loss(m, m) == 0.0

    def test_single_displacement(self):
        pred = np.array([[[1.0, 2.0, 2.0]]])
        gt = np.zeros((1, 1, 3))
        assert horizon_loss(pred, gt) == pytest.approx(9.0, abs=1e-12)

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n, j = int(rng.integers(1, 6)), int(rng.integers(1, 5))
            pred = rng.normal(0, 10, (n, j, 3))
            gt = rng.normal(0, 10, (n, j, 3))
            total = 0.0
            for fi in range(n):
                for ji in range(j):
                    d = pred[fi, ji] - gt[fi, ji]
                    total += d[0] ** 2 + d[1] ** 2 + d[2] ** 2
            assert horizon_loss(pred, gt) == pytest.approx(total / (n * j), rel=1e-9)

    def test_accepts_motion_values(self):
        frames = np.ones((2, 2, 3))
        m = Motion(frames, fps=25)
        assert horizon_loss(m, Motion(frames * 2, fps=25)) == pytest.approx(3.0)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            horizon_loss(np.zeros((2, 1, 3)), np.zeros((3, 1, 3)))

    def test_nonnegative_and_zero_iff_equal(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(3, 2, 3))
        b = a.copy()
        b[1, 0, 2] += 1e-6
        assert horizon_loss(a, b) > 0


class TestEvaluateHorizons:
    def test_frame_mapping(self):
        for ms, idx in [(80, 2), (160, 4), (320, 8), (400, 10), (560, 14), (1000, 25)]:
            assert horizon_frame_index(ms, 25) == idx

    def test_non_integral_horizon(self):
        with pytest.raises(HorizonOutOfRange):
            horizon_frame_index(100, 25)

    def test_equal_motions_give_zero(self, skeleton):
        frames = np.random.default_rng(5).normal(size=(25, skeleton.n_joints, 3))
        m = Motion(frames, fps=25)
        report = evaluate_horizons(m, m, skeleton, (80, 160, 320, 400, 560, 1000))
        assert all(v == 0.0 for v in report.per_horizon.values())
        assert report.frame_indices == {80: 2, 160: 4, 320: 8, 400: 10, 560: 14, 1000: 25}

    def test_constant_offset(self, skeleton):
        rng = np.random.default_rng(6)
        gt = Motion(rng.normal(size=(10, skeleton.n_joints, 3)), fps=25)
        pred = Motion(gt.frames + np.array([1.0, 0.0, 0.0]), fps=25)
        report = evaluate_horizons(pred, gt, skeleton)
        for h, v in report.per_horizon.items():
            assert v == pytest.approx(1.0, rel=1e-9)

    def test_horizon_out_of_range(self, skeleton):
        m = Motion(np.zeros((10, skeleton.n_joints, 3)), fps=25)
        with pytest.raises(HorizonOutOfRange):
            evaluate_horizons(m, m, skeleton, (560,))

    def test_depends_only_on_horizon_frame(self, skeleton):
        rng = np.random.default_rng(7)
        gt = Motion(rng.normal(size=(10, skeleton.n_joints, 3)), fps=25)
        pred1 = rng.normal(size=(10, skeleton.n_joints, 3))
        pred2 = rng.normal(size=(10, skeleton.n_joints, 3))
        pred2[7] = pred1[7]  # frame index 8 (1-indexed) equal
        r1 = evaluate_horizons(Motion(pred1, fps=25), gt, skeleton, (320,))
        r2 = evaluate_horizons(Motion(pred2, fps=25), gt, skeleton, (320,))
        assert r1.per_horizon[320] == r2.per_horizon[320]


def test_report_round_trip(tmp_path):
    rows = [("action01", 80, 9.1825, "baseline"), ("Average", 400, 46.91, "with_video")]
    write_report(rows, tmp_path / "r.csv")
    assert read_report(tmp_path / "r.csv") == rows
