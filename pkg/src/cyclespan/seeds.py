"""Deterministic 64-bit sub-seed derivation.

All randomized components take explicit 64-bit seeds and derive
sub-stream seeds by hashing, never by consuming platform entropy, so a
master seed reproduces every decision byte-for-byte on any machine and
for any worker count.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts: object) -> int:
    """SHA-256 of the ':' joined parts, truncated to 64 bits."""
    text = ":".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
