"""Data model construction and validation."""

import numpy as np
import pytest

from seqsel import (
    BBox,
    DimensionMismatch,
    DuplicateId,
    EmbeddingSet,
    EmptyPool,
    InvalidBox,
    LossParams,
    Metric,
    NonFiniteValue,
    SelectionConfig,
    SelectionResult,
    SequenceEmbedding,
    Strategy,
    pool_from_arrays,
    validate_pool,
)


def _pool(dim=4, n=3, frames=2):
    return pool_from_arrays([np.ones((frames, dim)) * (i + 1) for i in range(n)])


class TestPoolValidation:
    def test_well_formed_pool_ok(self):
        pool = _pool()
        assert validate_pool(pool) is None
        assert pool.n == 3
        assert pool.dim == 4

    def test_dimension_mismatch(self):
        seqs = (SequenceEmbedding(np.ones((1, 3))),)
        with pytest.raises(DimensionMismatch):
            EmbeddingSet(dim=4, sequences=seqs, ids=("a",))

    def test_non_finite_component(self):
        frames = np.ones((2, 4))
        frames[1, 2] = np.nan
        with pytest.raises(NonFiniteValue):
            pool_from_arrays([np.ones((2, 4)), frames])

    def test_empty_pool(self):
        with pytest.raises(EmptyPool):
            EmbeddingSet(dim=4, sequences=(), ids=())

    def test_duplicate_id(self):
        seqs = (SequenceEmbedding(np.ones((1, 2))), SequenceEmbedding(np.ones((1, 2))))
        with pytest.raises(DuplicateId):
            EmbeddingSet(dim=2, sequences=seqs, ids=("a", "a"))

    def test_ragged_frames_rejected(self):
        with pytest.raises(DimensionMismatch):
            SequenceEmbedding([[1.0, 2.0], [1.0]])

    def test_zero_frame_sequence_rejected(self):
        with pytest.raises(EmptyPool):
            SequenceEmbedding(np.empty((0, 4)))

    def test_frames_are_read_only(self):
        pool = _pool()
        with pytest.raises(ValueError):
            pool.sequences[0].frames[0, 0] = 99.0


class TestSelectionConfig:
    def test_defaults_match_reference_setup(self):
        cfg = SelectionConfig(strategy=Strategy.KMAL, budget=10)
        assert cfg.interval == 10
        assert cfg.frames_per_sequence == 5
        assert cfg.metric is Metric.COSINE

    @pytest.mark.parametrize("field,value", [
        ("budget", 0),
        ("interval", 0),
        ("frames_per_sequence", -1),
        ("seed", -1),
        ("seed", 2**64),
    ])
    def test_invalid_fields_rejected(self, field, value):
        kwargs = {"strategy": Strategy.SAL, "budget": 5, field: value}
        with pytest.raises(ValueError):
            SelectionConfig(**kwargs)


class TestSelectionResult:
    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            SelectionResult(selected=(1, 2, 1), audit=())

    def test_selected_normalized_to_ints(self):
        res = SelectionResult(selected=(np.int64(3), np.int64(1)), audit=())
        assert res.selected == (3, 1)
        assert all(type(i) is int for i in res.selected)


class TestBoxTypes:
    def test_inverted_box_rejected(self):
        with pytest.raises(InvalidBox):
            BBox(2, 0, 1, 3)
        with pytest.raises(InvalidBox):
            BBox(0, 0, 1, np.inf)

    def test_zero_area_box_allowed(self):
        box = BBox(1, 1, 1, 1)
        assert box.area == 0.0

    def test_loss_params_defaults(self):
        params = LossParams()
        assert (params.alpha, params.beta, params.eta) == (0.4, 0.6, 100.0)

    def test_negative_loss_params_rejected(self):
        with pytest.raises(ValueError):
            LossParams(alpha=-0.1)
