import numpy as np

from seqsel import EmbeddingSet, SequenceEmbedding


def random_pool(rng: np.random.Generator, n: int, dim: int, max_frames: int = 8) -> EmbeddingSet:
    """Random well-formed pool with varying sequence lengths (incl. single-frame)."""
    sequences = []
    for _ in range(n):
        frames = rng.standard_normal((int(rng.integers(1, max_frames + 1)), dim))
        sequences.append(SequenceEmbedding(frames))
    return EmbeddingSet(
        dim=dim,
        sequences=tuple(sequences),
        ids=tuple(f"seq-{i}" for i in range(n)),
    )
