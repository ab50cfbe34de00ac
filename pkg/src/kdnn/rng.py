"""Seed derivation.

All randomness comes from numpy's PCG64 bit generator. A stream is named by
the user seed plus a tuple of purpose labels; its 64-bit seed is the first
eight bytes (little-endian) of ``sha256("seed:label1:label2:...")``. Streams
with different labels are independent for practical purposes, and a stream
never depends on how many numbers other streams have consumed.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_seed", "make_rng"]


def derive_seed(seed: int, *labels: object) -> int:
    text = ":".join([str(int(seed)), *map(str, labels)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def make_rng(seed: int, *labels: object) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *labels)))
