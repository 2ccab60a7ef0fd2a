"""Representative construction: first-frame and multi-frame fusion."""

import numpy as np
import pytest

from seqsel import (
    FusionMode,
    ZeroNormVector,
    first_frame_reps,
    multi_frame_reps,
    pool_from_arrays,
    sample_frame_indices,
)


class TestFrameIndexSampling:
    def test_clamps_and_dedups(self):
        # 25 frames, stride 10, five picks: 0, 10, 20, 24, 24 -> dedup
        assert sample_frame_indices(25, 10, 5) == (0, 10, 20, 24)

    def test_single_frame_clamps_to_zero(self):
        assert sample_frame_indices(1, 10, 5) == (0,)

    def test_exact_fit(self):
        assert sample_frame_indices(50, 10, 5) == (0, 10, 20, 30, 40)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            sample_frame_indices(5, 0, 3)
        with pytest.raises(ValueError):
            sample_frame_indices(5, 1, 0)


class TestFirstFrameReps:
    def test_takes_first_frame(self):
        pool = pool_from_arrays([np.array([[1.0, 0.0], [0.0, 1.0]])])
        reps = first_frame_reps(pool)
        assert reps.mode is FusionMode.FIRST_FRAME
        assert np.array_equal(reps.reps[0], [1.0, 0.0])

    def test_pool_order_preserved(self):
        pool = pool_from_arrays([np.full((1, 2), i + 1.0) for i in range(3)])
        reps = first_frame_reps(pool)
        assert np.array_equal(reps.reps, [[1, 1], [2, 2], [3, 3]])

    def test_single_frame_sequence(self):
        pool = pool_from_arrays([np.array([[2.0, 5.0]])])
        assert np.array_equal(first_frame_reps(pool).reps[0], [2.0, 5.0])


class TestMultiFrameReps:
    def test_mean_then_normalize(self):
        pool = pool_from_arrays([np.array([[1.0, 0.0], [0.0, 1.0]])])
        reps = multi_frame_reps(pool, interval=1, count=2)
        expected = 1.0 / np.sqrt(2.0)
        assert reps.reps[0] == pytest.approx([expected, expected], abs=1e-12)
        assert reps.frames_used == ((0, 1),)

    def test_single_frame_clamping(self):
        pool = pool_from_arrays([np.array([[3.0, 4.0]])])
        reps = multi_frame_reps(pool, interval=10, count=5)
        assert reps.frames_used == ((0,),)
        assert reps.reps[0] == pytest.approx([0.6, 0.8], abs=1e-12)

    def test_25_frame_sequence_dedup(self):
        rng = np.random.default_rng(3)
        pool = pool_from_arrays([rng.standard_normal((25, 4))])
        reps = multi_frame_reps(pool, interval=10, count=5)
        assert reps.frames_used == ((0, 10, 20, 24),)

    def test_equals_first_frame_up_to_normalization(self):
        rng = np.random.default_rng(4)
        pool = pool_from_arrays([rng.standard_normal((6, 5)) for _ in range(4)])
        first = first_frame_reps(pool).reps
        fused = multi_frame_reps(pool, interval=1, count=1).reps
        norms = np.linalg.norm(first, axis=1, keepdims=True)
        assert fused == pytest.approx(first / norms, abs=1e-12)

    def test_unsampled_frames_are_ignored(self):
        rng = np.random.default_rng(5)
        frames = rng.standard_normal((30, 4))
        scrambled = frames.copy()
        sampled = set(sample_frame_indices(30, 10, 3))
        untouched = [i for i in range(30) if i not in sampled]
        scrambled[untouched] = rng.standard_normal((len(untouched), 4))
        a = multi_frame_reps(pool_from_arrays([frames]), 10, 3).reps
        b = multi_frame_reps(pool_from_arrays([scrambled]), 10, 3).reps
        assert np.array_equal(a, b)

    def test_unit_norm(self):
        rng = np.random.default_rng(6)
        pool = pool_from_arrays([rng.standard_normal((7, 8)) for _ in range(10)])
        reps = multi_frame_reps(pool, interval=2, count=4).reps
        assert np.linalg.norm(reps, axis=1) == pytest.approx(np.ones(10), abs=1e-9)

    def test_cancelling_mean_raises(self):
        pool = pool_from_arrays([np.array([[1.0, 0.0], [-1.0, 0.0]])])
        with pytest.raises(ZeroNormVector) as exc_info:
            multi_frame_reps(pool, interval=1, count=2)
        assert exc_info.value.index == 0
