"""Counter-based random streams.

Every stream is a Philox generator whose key is derived from
``(seed, label)`` and whose counter starts at ``index``.  Streams for
different indices never overlap, so work items can be evaluated in any
order (or in parallel) and still reproduce bit-identical draws.
"""
from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def label_key(label: str) -> int:
    """Stable 64-bit integer for a stage/hypothesis label."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stream(seed: int, label: str, index: int = 0) -> np.random.Generator:
    """Generator for work item ``index`` of stage ``label`` under ``seed``."""
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    key = [seed & _MASK64, label_key(label)]
    # word 0 is consumed by draws; the item index lives in word 2
    counter = [0, 0, index & _MASK64, (index >> 64) & _MASK64]
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
