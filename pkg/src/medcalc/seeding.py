"""Deterministic seed derivation for case streams.

Each case index gets an independent stream derived from the root seed via
SHA-256, so the sequence is byte-reproducible across runs and platforms and
cases for distinct indices can be generated concurrently.
"""

from __future__ import annotations

import hashlib
import random

_MASK64 = (1 << 64) - 1


def _derive(*parts: int | str) -> int:
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, int):
            h.update(part.to_bytes(8, "big"))
        else:
            h.update(part.encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big")


def derive_case_seed(root_seed: int, index: int) -> int:
    """64-bit per-case seed; independent across indices."""
    return _derive(root_seed & _MASK64, index & _MASK64)


class SeededStream:
    """RNG stream for one case, identified by (root seed, case index)."""

    def __init__(self, root_seed: int, index: int = 0, *, case_seed: int | None = None):
        self.root_seed = root_seed & _MASK64
        self.index = index
        self.case_seed = derive_case_seed(root_seed, index) if case_seed is None else case_seed
        self.rng = random.Random(self.case_seed)

    @classmethod
    def from_case_seed(cls, case_seed: int) -> "SeededStream":
        """Rebuild a stream from a stored per-case seed (e.g. for re-rendering)."""
        stream = cls.__new__(cls)
        stream.root_seed = 0
        stream.index = 0
        stream.case_seed = case_seed
        stream.rng = random.Random(case_seed)
        return stream

    def fork(self, label: str) -> random.Random:
        """Independent sub-stream (e.g. prompt shuffling vs. input sampling)."""
        return random.Random(_derive(self.case_seed, label))
