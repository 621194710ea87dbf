"""Reproducible random streams derived from a single master seed.

Every source of randomness in the toolkit (permutation draws, synthetic
data, weight initialization, test subsampling) pulls from a stream keyed
by the master seed plus a *derivation path* of strings and integers, e.g.
``("run", 3, "perm", 12)``.  The derivation is:

    key = SHA-256( LE64(master_seed) || encode(part_0) || encode(part_1) || ... )[:16]

where strings encode as ``b"s" + LE32(len) + utf8`` and integers as
``b"i" + signed LE64``.  The 128-bit key drives a Philox counter-based
generator, so identical ``(master_seed, path)`` pairs produce bit-identical
streams on every platform, and distinct paths produce independent streams
with no chance of accidental reuse.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

_MAX_SEED = 2**64


def derive_key(master_seed: int, path: tuple) -> np.ndarray:
    """Hash (master_seed, path) into a 2-word uint64 Philox key."""
    h = hashlib.sha256()
    h.update(int(master_seed).to_bytes(8, "little"))
    for part in path:
        if isinstance(part, str):
            raw = part.encode("utf-8")
            h.update(b"s")
            h.update(len(raw).to_bytes(4, "little"))
            h.update(raw)
        elif isinstance(part, (int, np.integer)):
            h.update(b"i")
            h.update(int(part).to_bytes(8, "little", signed=True))
        else:
            raise TypeError(f"seed path parts must be str or int, got {type(part).__name__}")
    return np.frombuffer(h.digest()[:16], dtype="<u8")


@dataclass(frozen=True)
class SeedSpec:
    """A master seed plus the derivation path accumulated so far.

    ``child(*parts)`` extends the path; ``stream(*parts)`` returns a fresh
    Philox generator for the extended path.  SeedSpec values are immutable
    and safe to share.
    """

    master_seed: int
    path: tuple = ()

    def __post_init__(self):
        if not 0 <= self.master_seed < _MAX_SEED:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")

    def child(self, *parts: str | int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.path + parts)

    def stream(self, *parts: str | int) -> np.random.Generator:
        key = derive_key(self.master_seed, self.path + parts)
        return np.random.Generator(np.random.Philox(key=key))
