"""Seeded randomness with per-stage stream splitting.

Every stochastic stage of a run draws from its own counter-based Philox
stream, keyed by ``(seed, hash(stage_name))``. Streams are therefore
independent: adding, removing, or disabling a stage never perturbs the
draws of any other stage, which is what makes partial pipelines and
replicate fan-out reproducible.

The edge-sampling kernels additionally need raw 64-bit words rather than
numpy's bounded-integer API, because the compiled and pure-Python kernel
must consume bits identically. :class:`WordStream` hands out the Philox
word stream in chunks; both kernel backends map a word to an index in
``[0, n)`` with the multiply-shift rule ``(word * n) >> 64``. The mapping
has bias below ``n / 2**64``, which is negligible for any realistic
vertex-list length and, unlike rejection sampling, consumes a fixed two
words per edge attempt.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1

# Stage names used across the package. Centralised so the stream-splitting
# contract is visible in one place.
STAGE_VERTEX_ALLOCATION = "allocate-vertices"
STAGE_EDGE_ALLOCATION = "allocate-edges"
STAGE_EDGE_SAMPLING = "sample-edges"
STAGE_SYNTHETIC_LABELS = "synthetic-labels"
STAGE_FIXTURE = "fixture"


def stage_hash(stage: str) -> int:
    """Stable 64-bit hash of a stage name (first 8 bytes of blake2b)."""
    digest = hashlib.blake2b(stage.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stage_generator(seed: int, stage: str) -> np.random.Generator:
    """Return the Philox generator for one (seed, stage) pair."""
    key = np.array([seed & _MASK64, stage_hash(stage)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class WordStream:
    """Sequential uint64 words from one stage's Philox stream.

    Words are produced in a single well-defined order; the chunk size only
    controls buffering and never changes which word comes next.
    """

    def __init__(self, seed: int, stage: str, chunk: int = 65536):
        if chunk < 1:
            raise ValueError("chunk must be >= 1")
        self._gen = stage_generator(seed, stage)
        self._chunk = chunk

    def refill(self) -> np.ndarray:
        """Produce the next chunk of raw words."""
        return self._gen.integers(0, 1 << 64, size=self._chunk, dtype=np.uint64)


def index_from_word(word: int, n: int) -> int:
    """Map a raw 64-bit word to an index in [0, n) by multiply-shift."""
    return (int(word) * n) >> 64
