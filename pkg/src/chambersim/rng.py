"""Counter-based random substreams for the simulation engine.

Every sensor (and a few auxiliary noise sources) gets its own Philox stream.
The 128-bit Philox key is SHA-256(b"chambersim:" + seed + ":" + stream name),
and the 256-bit counter is positioned at ``row_index * ROUNDS_PER_ROW``. Each
emitted measurement row therefore owns a fixed window of WORDS_PER_ROW raw
64-bit words per stream, and the draws for a row are a pure function of
(seed, stream name, row index). Consequences relied on elsewhere:

- adding or removing a sensor never perturbs another sensor's draws,
- generating rows one at a time or in large vectorized blocks yields
  bit-identical output,
- skipping generation entirely when a noise scale is zero does not shift
  any other draw.
"""

from __future__ import annotations

import hashlib

import numpy as np
from scipy.special import ndtri

# Philox emits 4 x 64-bit words per counter increment.
ROUNDS_PER_ROW = 3
WORDS_PER_ROW = 4 * ROUNDS_PER_ROW


def _stream_key(seed: int, name: str) -> np.ndarray:
    digest = hashlib.sha256(f"chambersim:{seed}:{name}".encode()).digest()
    return np.frombuffer(digest[:16], dtype=np.uint64)


def raw_words(seed: int, name: str, row0: int, n_rows: int) -> np.ndarray:
    """Raw uint64 words for rows [row0, row0+n_rows), shape (n_rows, WORDS_PER_ROW)."""
    bg = np.random.Philox(counter=row0 * ROUNDS_PER_ROW, key=_stream_key(seed, name))
    w = bg.random_raw(n_rows * WORDS_PER_ROW)
    return w.reshape(n_rows, WORDS_PER_ROW)


def to_uniform(words: np.ndarray) -> np.ndarray:
    """Map uint64 words to open-interval (0, 1) doubles with 52-bit resolution.

    Cell centers (k + 0.5) * 2**-52 are exactly representable for every k, so
    the result is strictly inside (0, 1); a 53-bit variant would round its top
    cell up to 1.0 and poison the inverse-CDF transform downstream.
    """
    return ((words >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52


def to_gaussian(words: np.ndarray) -> np.ndarray:
    """Standard normal deviates via the inverse CDF; one word per deviate."""
    return ndtri(to_uniform(words))


def to_bit(words: np.ndarray) -> np.ndarray:
    """Fair coin per word (lowest-order bit)."""
    return (words & np.uint64(1)).astype(np.int64)


class StreamSet:
    """Per-seed family of named substreams with row-indexed access."""

    def __init__(self, seed: int):
        self.seed = int(seed)

    def gaussians(self, name: str, row0: int, n_rows: int, per_row: int) -> np.ndarray:
        if per_row > WORDS_PER_ROW:
            raise ValueError(f"stream {name!r}: {per_row} > {WORDS_PER_ROW} words per row")
        return to_gaussian(raw_words(self.seed, name, row0, n_rows)[:, :per_row])

    def uniforms(self, name: str, row0: int, n_rows: int, per_row: int) -> np.ndarray:
        if per_row > WORDS_PER_ROW:
            raise ValueError(f"stream {name!r}: {per_row} > {WORDS_PER_ROW} words per row")
        return to_uniform(raw_words(self.seed, name, row0, n_rows)[:, :per_row])

    def bits(self, name: str, row0: int, n_rows: int) -> np.ndarray:
        return to_bit(raw_words(self.seed, name, row0, n_rows)[:, 0])
