"""Deterministic named-stream randomness.

All randomness in a run flows from one 64-bit master seed. Substreams are
derived by hashing the master seed together with a purpose path (strings and
integers), so adding a new consumer never perturbs existing streams and
independent streams can be drawn in any order or in parallel.
"""

from __future__ import annotations

import hashlib
import secrets

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(master: int, *path: str | int) -> int:
    """Derive a 64-bit child seed from a master seed and a purpose path.

    Stable across processes and platforms (SHA-256 based, no salted hashing).
    """
    h = hashlib.sha256()
    h.update((master & _MASK64).to_bytes(8, "little"))
    for part in path:
        if isinstance(part, int):
            h.update(b"i")
            h.update((part & _MASK64).to_bytes(8, "little", signed=False))
        else:
            data = part.encode("utf-8")
            h.update(b"s")
            h.update(len(data).to_bytes(4, "little"))
            h.update(data)
    return int.from_bytes(h.digest()[:8], "little")


def stream(master: int, *path: str | int) -> np.random.Generator:
    """A Generator seeded from ``derive_seed(master, *path)``."""
    return np.random.default_rng(derive_seed(master, *path))


def fresh_master_seed() -> int:
    """A master seed drawn from OS entropy, for when the user gave none."""
    return secrets.randbits(63)
