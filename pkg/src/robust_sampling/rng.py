"""Seeded, counter-based randomness for games and trials.

Every game draws from its own Philox stream whose 128-bit key is a hash of
``(master_seed, trial_index, label)``; two runs with the same seeds see the
same draws bit for bit, and distinct trials never share a stream.
"""

from __future__ import annotations

import hashlib

import numpy as np

TWO_64 = 1 << 64
MASK_64 = TWO_64 - 1


def derive_seed(*parts: int | str) -> int:
    """Hash an ordered tuple of ints/labels to a 128-bit key.

    The encoding is ``repr`` of each part joined by ``/``; ints are written in
    decimal so arbitrarily large seeds are accepted.
    """
    text = "/".join(str(p) if isinstance(p, int) else repr(p) for p in parts)
    digest = hashlib.blake2b(text.encode(), digest_size=16).digest()
    return int.from_bytes(digest, "big")


class DrawStream:
    """Buffered 64-bit uniform draws from a Philox generator."""

    __slots__ = ("_gen", "_buf", "_pos", "_chunk")

    def __init__(self, key: int, chunk: int = 64):
        if not 0 <= key < (1 << 128):
            raise ValueError("generator key must be a 128-bit unsigned integer")
        self._gen = np.random.Philox(key=key)
        self._buf: list[int] = []
        self._pos = 0
        self._chunk = chunk

    def next_u64(self) -> int:
        if self._pos == len(self._buf):
            self._refill()
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def _refill(self) -> None:
        self._buf = self._gen.random_raw(self._chunk).tolist()
        self._pos = 0
        # draws are consumed in order, so chunk size never changes the sequence
        if self._chunk < 8192:
            self._chunk *= 2

    def below(self, m: int) -> int:
        """Uniform integer in ``[0, m)`` via multiply-high (bias <= m / 2**64)."""
        return (self.next_u64() * m) >> 64
