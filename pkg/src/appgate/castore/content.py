"""Self-certifying content identifiers: SHA-256 of the stored bytes."""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass

VERSION_PREFIX = 0x01
DIGEST_LEN = 32


@dataclass(frozen=True, order=True)
class ContentId:
    digest: bytes

    def __post_init__(self) -> None:
        if len(self.digest) != DIGEST_LEN:
            raise ValueError("content id digest must be 32 bytes")

    @classmethod
    def for_bytes(cls, data: bytes) -> "ContentId":
        return cls(hashlib.sha256(data).digest())

    def verify(self, data: bytes) -> bool:
        return hashlib.sha256(data).digest() == self.digest

    def render(self) -> str:
        """Lowercase base32 of version prefix + digest, padding stripped."""
        raw = bytes([VERSION_PREFIX]) + self.digest
        return base64.b32encode(raw).decode("ascii").lower().rstrip("=")

    @classmethod
    def parse(cls, text: str) -> "ContentId":
        padded = text.upper() + "=" * (-len(text) % 8)
        try:
            raw = base64.b32decode(padded)
        except Exception as exc:
            raise ValueError(f"not a content id: {text!r}") from exc
        if len(raw) != DIGEST_LEN + 1 or raw[0] != VERSION_PREFIX:
            raise ValueError(f"unsupported content id version/length: {text!r}")
        return cls(raw[1:])

    def __repr__(self) -> str:
        return f"ContentId({self.render()})"
