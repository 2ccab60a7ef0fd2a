"""Pool file formats and the selection result writer."""

import numpy as np
import pytest

from conftest import random_pool
from seqsel import (
    BlobSizeMismatch,
    ManifestParse,
    Metric,
    SelectionConfig,
    Strategy,
    distance_matrix,
    load_pool,
    load_pool_csv,
    nn_stats,
    parse_manifest,
    pool_from_arrays,
    save_pool,
    save_selection,
    select_kmal,
)


def _f32_pool(rng, n=6, dim=4, max_frames=7):
    """Pool whose components are exactly float32-representable."""
    pool = random_pool(rng, n, dim, max_frames)
    return pool_from_arrays(
        [seq.frames.astype(np.float32).astype(np.float64) for seq in pool.sequences],
        ids=pool.ids,
    )


def _pools_equal(a, b):
    return (
        a.dim == b.dim
        and a.ids == b.ids
        and all(np.array_equal(x.frames, y.frames) for x, y in zip(a.sequences, b.sequences))
    )


class TestManifestRoundTrip:
    def test_round_trip_bitwise(self, tmp_path):
        rng = np.random.default_rng(61)
        pool = _f32_pool(rng)
        save_pool(pool, tmp_path / "p.manifest")
        assert _pools_equal(pool, load_pool(tmp_path / "p.manifest"))

    def test_single_and_short_sequences(self, tmp_path):
        pool = pool_from_arrays(
            [np.float64([[1.5, -2.0]]), np.float64([[0.25, 8.0], [3.0, -0.5]])]
        )
        save_pool(pool, tmp_path / "p.manifest")
        assert _pools_equal(pool, load_pool(tmp_path / "p.manifest"))

    def test_save_is_byte_deterministic(self, tmp_path):
        rng = np.random.default_rng(62)
        pool = _f32_pool(rng)
        save_pool(pool, tmp_path / "a.manifest")
        save_pool(pool, tmp_path / "b.manifest", blob_name="a.blob")
        a = (tmp_path / "a.manifest").read_text()
        b = (tmp_path / "b.manifest").read_text()
        assert a == b

    def test_manifest_structure(self, tmp_path):
        pool = pool_from_arrays([np.ones((2, 3)), np.ones((1, 3)) * 2], ids=("x", "y"))
        save_pool(pool, tmp_path / "p.manifest")
        manifest = parse_manifest(tmp_path / "p.manifest")
        assert manifest.version == 1
        assert manifest.dim == 3
        assert [(e.id, e.frame_count, e.offset) for e in manifest.entries] == [
            ("x", 2, 0),
            ("y", 1, 24),  # 2 frames * 3 components * 4 bytes
        ]

    def test_ids_with_spaces_survive(self, tmp_path):
        pool = pool_from_arrays([np.ones((1, 2))], ids=("data/video 01.mp4",))
        save_pool(pool, tmp_path / "p.manifest")
        assert load_pool(tmp_path / "p.manifest").ids == ("data/video 01.mp4",)

    def test_tab_in_id_rejected(self, tmp_path):
        pool = pool_from_arrays([np.ones((1, 2))], ids=("bad\tid",))
        with pytest.raises(ManifestParse):
            save_pool(pool, tmp_path / "p.manifest")


class TestManifestErrors:
    def _write(self, tmp_path, text, blob=None):
        (tmp_path / "p.manifest").write_text(text)
        if blob is not None:
            (tmp_path / "p.blob").write_bytes(blob)
        return tmp_path / "p.manifest"

    def test_blob_too_short(self, tmp_path):
        path = self._write(
            tmp_path,
            "poolmanifest\t1\ndim\t4\nblob\tp.blob\nnseq\t1\nseq\t0\t2\ta\n",
            blob=b"\x00" * 28,  # 4 bytes short of 2*4*4
        )
        with pytest.raises(BlobSizeMismatch):
            load_pool(path)

    def test_exact_blob_loads(self, tmp_path):
        path = self._write(
            tmp_path,
            "poolmanifest\t1\ndim\t4\nblob\tp.blob\nnseq\t1\nseq\t0\t2\ta\n",
            blob=np.arange(8, dtype="<f4").tobytes(),
        )
        pool = load_pool(path)
        assert pool.n == 1 and pool.sequences[0].frame_count == 2
        assert pool.sequences[0].frames[1].tolist() == [4.0, 5.0, 6.0, 7.0]

    @pytest.mark.parametrize("text", [
        "",
        "wrongmagic\t1\ndim\t4\nblob\tb\nnseq\t1\nseq\t0\t1\ta\n",
        "poolmanifest\t9\ndim\t4\nblob\tb\nnseq\t1\nseq\t0\t1\ta\n",
        "poolmanifest\t1\ndim\tfour\nblob\tb\nnseq\t1\nseq\t0\t1\ta\n",
        "poolmanifest\t1\ndim\t4\nblob\tb\nnseq\t2\nseq\t0\t1\ta\n",
        "poolmanifest\t1\ndim\t4\nblob\tb\nnseq\t1\nseq\t8\t1\ta\n",          # offset gap
        "poolmanifest\t1\ndim\t4\nblob\tb\nnseq\t1\nseq\t0\t0\ta\n",          # zero frames
        "poolmanifest\t1\ndim\t4\nblob\tb\nnseq\t1\nseq\t0\t1\ta\ntrailing\n",
    ])
    def test_malformed_manifests(self, tmp_path, text):
        with pytest.raises(ManifestParse):
            parse_manifest(self._write(tmp_path, text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestParse):
            load_pool(tmp_path / "nothing.manifest")


class TestCsvLoader:
    def test_fixture_with_out_of_order_frames(self, tmp_path):
        path = tmp_path / "pool.csv"
        path.write_text(
            "a,1,0.0,1.0\n"
            "a,0,1.0,0.0\n"
            "b,0,0.5,0.5\n"
        )
        pool = load_pool_csv(path)
        assert pool.ids == ("a", "b")
        assert np.array_equal(pool.sequences[0].frames, [[1.0, 0.0], [0.0, 1.0]])

    def test_duplicate_frame_index(self, tmp_path):
        path = tmp_path / "pool.csv"
        path.write_text("a,0,1.0\na,0,2.0\n")
        with pytest.raises(ManifestParse):
            load_pool_csv(path)

    @pytest.mark.parametrize("text", ["", "a,0\n", "a,zero,1.0\n", "a,0,abc\n"])
    def test_malformed_csv(self, tmp_path, text):
        path = tmp_path / "pool.csv"
        path.write_text(text)
        with pytest.raises(ManifestParse):
            load_pool_csv(path)


class TestSaveSelection:
    def _kmal_result_with_rejections(self):
        m = distance_matrix([[0.0], [1.0], [2.0], [3.0], [100.0]], Metric.EUCLIDEAN)
        stats = nn_stats(m)
        return select_kmal(m, stats, budget=4, seed=0)

    def test_rejection_tokens_serialized(self, tmp_path):
        result = self._kmal_result_with_rejections()
        cfg = SelectionConfig(strategy=Strategy.KMAL, budget=4, seed=0)
        path = tmp_path / "sel.txt"
        save_selection(result, cfg, [f"id{i}" for i in range(5)], path)
        text = path.read_text()
        assert "EXCEEDS_AVE_NN" in text
        assert "NEIGHBOR_SELECTED" in text
        assert "exhausted\ttrue" in text

    def test_header_and_picks(self, tmp_path):
        result = self._kmal_result_with_rejections()
        cfg = SelectionConfig(strategy=Strategy.KMAL, budget=4, interval=7,
                              frames_per_sequence=3, seed=9,
                              metric=Metric.EUCLIDEAN)
        path = tmp_path / "sel.txt"
        save_selection(result, cfg, [f"id{i}" for i in range(5)], path)
        lines = path.read_text().splitlines()
        assert lines[0] == "selection\t1"
        assert "strategy\tkmal" in lines
        assert "budget\t4" in lines
        assert "seed\t9" in lines
        assert "interval\t7" in lines
        assert "metric\teuclidean" in lines
        picks = [l for l in lines if l.startswith("pick\t")]
        assert len(picks) == len(result.selected)
        assert picks[0].split("\t") == ["pick", "0", str(result.selected[0]),
                                        f"id{result.selected[0]}"]
        steps = [l for l in lines if l.startswith("step\t")]
        assert len(steps) == len(result.audit)

    def test_byte_deterministic(self, tmp_path):
        result = self._kmal_result_with_rejections()
        cfg = SelectionConfig(strategy=Strategy.KMAL, budget=4, seed=0)
        ids = [f"id{i}" for i in range(5)]
        save_selection(result, cfg, ids, tmp_path / "a.txt")
        save_selection(result, cfg, ids, tmp_path / "b.txt")
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
