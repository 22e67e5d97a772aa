"""2048-bit block bloom over log emitters and topics.

Three bit indices per value: digest byte pairs (0,1), (2,3), (4,5), each a
big-endian 16-bit integer modulo 2048.  Matches the header-bloom construction
used by account-ledger log queries, so no false negatives by design.
"""

from __future__ import annotations

from ..digest import keccak256

BLOOM_BITS = 2048
BLOOM_BYTES = BLOOM_BITS // 8


def bloom_indices(value: bytes) -> tuple[int, int, int]:
    d = keccak256(value)
    return tuple(
        int.from_bytes(d[i : i + 2], "big") % BLOOM_BITS for i in (0, 2, 4)
    )  # type: ignore[return-value]


class Bloom2048:
    """Monotone 2048-bit filter; insert only ever sets bits."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        self.bits = bits

    def insert(self, value: bytes) -> "Bloom2048":
        for idx in bloom_indices(value):
            self.bits |= 1 << idx
        return self

    def query(self, value: bytes) -> bool:
        return all(self.bits >> idx & 1 for idx in bloom_indices(value))

    def to_bytes(self) -> bytes:
        return self.bits.to_bytes(BLOOM_BYTES, "big")

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Bloom2048":
        if len(raw) != BLOOM_BYTES:
            raise ValueError("bloom must be exactly 256 bytes")
        return cls(int.from_bytes(raw, "big"))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Bloom2048) and self.bits == other.bits

    def __repr__(self) -> str:
        return f"Bloom2048(popcount={bin(self.bits).count('1')})"
