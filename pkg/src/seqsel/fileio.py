"""Pool and result file formats.

Pool storage is a text manifest plus a binary blob:

* Manifest (tab-separated lines): a `poolmanifest <version>` line, then
  `dim`, `blob` (path relative to the manifest), `nseq`, then one
  `seq <offset> <frame_count> <id>` line per sequence. Offsets are byte
  offsets into the blob, must start at 0 and be contiguous; ids may contain
  anything except tabs and newlines.
* Blob: little-endian IEEE-754 binary32, frame-major then component-major,
  no padding. Values are promoted to float64 for all in-memory arithmetic.

A small CSV format (`id,frame_index,c0,c1,...`) is also accepted for
hand-written fixtures.

Selection results are written as a tab-separated text file: a header block,
one `pick` line per selected sample, then the audit trail. All writers are
byte-deterministic.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BlobSizeMismatch, ManifestParse
from .types import (
    EmbeddingSet,
    SelectionConfig,
    SelectionResult,
    SequenceEmbedding,
)

MANIFEST_VERSION = 1
SELECTION_VERSION = 1
_F4 = np.dtype("<f4")


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    frame_count: int
    offset: int


@dataclass(frozen=True)
class PoolManifest:
    version: int
    dim: int
    blob_path: str
    entries: tuple[ManifestEntry, ...]


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise ManifestParse(f"{what} must be an integer, got {token!r}") from exc


def _check_id(sid: str) -> str:
    if "\t" in sid or "\n" in sid or "\r" in sid:
        raise ManifestParse(f"sequence id may not contain tabs or newlines: {sid!r}")
    return sid


def parse_manifest(path) -> PoolManifest:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ManifestParse(f"cannot read manifest {path}: {exc}") from exc
    if not lines:
        raise ManifestParse(f"{path}: empty manifest")

    magic = lines[0].split("\t")
    if len(magic) != 2 or magic[0] != "poolmanifest":
        raise ManifestParse(f"{path}: first line must be 'poolmanifest\\t<version>'")
    version = _parse_int(magic[1], "version")
    if version != MANIFEST_VERSION:
        raise ManifestParse(f"{path}: unsupported manifest version {version}")

    header: dict[str, str] = {}
    i = 1
    for key in ("dim", "blob", "nseq"):
        if i >= len(lines):
            raise ManifestParse(f"{path}: missing header line {key!r}")
        parts = lines[i].split("\t")
        if len(parts) != 2 or parts[0] != key:
            raise ManifestParse(f"{path}: expected '{key}\\t<value>', got {lines[i]!r}")
        header[key] = parts[1]
        i += 1
    dim = _parse_int(header["dim"], "dim")
    if dim < 1:
        raise ManifestParse(f"{path}: dim must be positive, got {dim}")
    nseq = _parse_int(header["nseq"], "nseq")
    if nseq < 1:
        raise ManifestParse(f"{path}: nseq must be positive, got {nseq}")

    entries: list[ManifestEntry] = []
    expected_offset = 0
    for lineno in range(i, i + nseq):
        if lineno >= len(lines):
            raise ManifestParse(f"{path}: expected {nseq} 'seq' lines, got {len(entries)}")
        parts = lines[lineno].split("\t", 3)
        if len(parts) != 4 or parts[0] != "seq":
            raise ManifestParse(f"{path}: malformed sequence line {lines[lineno]!r}")
        offset = _parse_int(parts[1], "offset")
        frame_count = _parse_int(parts[2], "frame_count")
        if frame_count < 1:
            raise ManifestParse(f"{path}: frame_count must be positive, got {frame_count}")
        if offset != expected_offset:
            raise ManifestParse(
                f"{path}: offsets must be contiguous and increasing; "
                f"expected {expected_offset}, got {offset}"
            )
        expected_offset += frame_count * dim * _F4.itemsize
        entries.append(ManifestEntry(id=parts[3], frame_count=frame_count, offset=offset))
    if len(lines) > i + nseq and any(l.strip() for l in lines[i + nseq :]):
        raise ManifestParse(f"{path}: trailing content after {nseq} sequence lines")

    return PoolManifest(
        version=version, dim=dim, blob_path=header["blob"], entries=tuple(entries)
    )


def load_pool(manifest_path) -> EmbeddingSet:
    """Read a manifest + blob pair into a validated pool."""
    manifest_path = Path(manifest_path)
    manifest = parse_manifest(manifest_path)
    blob_path = manifest_path.parent / manifest.blob_path
    try:
        raw = blob_path.read_bytes()
    except OSError as exc:
        raise ManifestParse(f"cannot read blob {blob_path}: {exc}") from exc

    expected = sum(e.frame_count for e in manifest.entries) * manifest.dim * _F4.itemsize
    if len(raw) != expected:
        raise BlobSizeMismatch(
            f"{blob_path}: blob holds {len(raw)} bytes, manifest implies {expected}"
        )
    flat = np.frombuffer(raw, dtype=_F4)
    sequences = []
    for e in manifest.entries:
        start = e.offset // _F4.itemsize
        count = e.frame_count * manifest.dim
        frames = flat[start : start + count].astype(np.float64)
        sequences.append(SequenceEmbedding(frames.reshape(e.frame_count, manifest.dim)))
    return EmbeddingSet(
        dim=manifest.dim,
        sequences=tuple(sequences),
        ids=tuple(e.id for e in manifest.entries),
    )


def save_pool(pool: EmbeddingSet, manifest_path, blob_name: str | None = None) -> None:
    """Write a pool as manifest + blob; the inverse of load_pool.

    Components are stored as binary32, so the round trip is exact whenever
    the pool's values are float32-representable (always true for pools that
    came from load_pool).
    """
    manifest_path = Path(manifest_path)
    if blob_name is None:
        blob_name = manifest_path.stem + ".blob"
    lines = [
        f"poolmanifest\t{MANIFEST_VERSION}",
        f"dim\t{pool.dim}",
        f"blob\t{blob_name}",
        f"nseq\t{pool.n}",
    ]
    offset = 0
    chunks = []
    for sid, seq in zip(pool.ids, pool.sequences):
        _check_id(sid)
        lines.append(f"seq\t{offset}\t{seq.frame_count}\t{sid}")
        chunk = np.ascontiguousarray(seq.frames, dtype=_F4).tobytes()
        chunks.append(chunk)
        offset += len(chunk)
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    (manifest_path.parent / blob_name).write_bytes(b"".join(chunks))


def load_pool_csv(path) -> EmbeddingSet:
    """Read the fixture CSV format: one row per frame, `id,frame_index,c0,...`."""
    path = Path(path)
    by_id: dict[str, list[tuple[int, list[float]]]] = {}
    order: list[str] = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for rowno, row in enumerate(csv.reader(fh), start=1):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if len(row) < 3:
                    raise ManifestParse(
                        f"{path}:{rowno}: need id, frame_index and components"
                    )
                sid = row[0]
                frame_index = _parse_int(row[1], f"{path}:{rowno}: frame_index")
                try:
                    comps = [float(c) for c in row[2:]]
                except ValueError as exc:
                    raise ManifestParse(f"{path}:{rowno}: bad component: {exc}") from exc
                if sid not in by_id:
                    by_id[sid] = []
                    order.append(sid)
                by_id[sid].append((frame_index, comps))
    except OSError as exc:
        raise ManifestParse(f"cannot read {path}: {exc}") from exc
    if not order:
        raise ManifestParse(f"{path}: no data rows")

    sequences = []
    for sid in order:
        rows = sorted(by_id[sid], key=lambda r: r[0])
        indices = [r[0] for r in rows]
        if len(set(indices)) != len(indices):
            raise ManifestParse(f"{path}: duplicate frame_index in sequence {sid!r}")
        sequences.append(SequenceEmbedding(np.asarray([r[1] for r in rows])))
    return EmbeddingSet(
        dim=sequences[0].dim, sequences=tuple(sequences), ids=tuple(order)
    )


def save_selection(
    result: SelectionResult, config: SelectionConfig, ids, path
) -> None:
    """Write a selection result as deterministic tab-separated text.

    Header (strategy, budget, seed, interval, frames, metric, exhausted),
    then one `pick <rank> <index> <id>` line per selected sample, then one
    `step` line per audit record with `accept`/`reject` and the rejection
    token (NEIGHBOR_SELECTED or EXCEEDS_AVE_NN); `-` marks absent fields.
    """
    ids = tuple(ids)
    lines = [
        f"selection\t{SELECTION_VERSION}",
        f"strategy\t{config.strategy.value}",
        f"budget\t{config.budget}",
        f"seed\t{config.seed}",
        f"interval\t{config.interval}",
        f"frames\t{config.frames_per_sequence}",
        f"metric\t{config.metric.value}",
        f"exhausted\t{'true' if result.exhausted else 'false'}",
        f"picks\t{len(result.selected)}",
    ]
    for rank, index in enumerate(result.selected):
        lines.append(f"pick\t{rank}\t{index}\t{_check_id(ids[index])}")
    lines.append(f"audit\t{len(result.audit)}")
    for rec in result.audit:
        dist = "-" if rec.min_distance_to_selected is None else _fmt(rec.min_distance_to_selected)
        verdict = "accept" if rec.accepted else "reject"
        reason = rec.rejection_reason.value if rec.rejection_reason is not None else "-"
        lines.append(f"step\t{rec.step}\t{rec.candidate_index}\t{dist}\t{verdict}\t{reason}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
