"""Keccak-256, the digest behind log topics, bloom indices, and tx ids.

This is the original Keccak padding (0x01), not the SHA-3 variant hashlib
ships (0x06), so ``hashlib.sha3_256`` cannot be substituted.  The sponge is
the compact permutation written out lane-by-lane; known-answer vectors live
in the test suite.
"""

from __future__ import annotations

from functools import lru_cache

_MASK = (1 << 64) - 1

# Rotation offsets for the rho step, indexed x + 5*y.
_RHO = (
    0, 1, 62, 28, 27,
    36, 44, 6, 55, 20,
    3, 10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2, 61, 56, 14,
)

_ROUND_CONSTANTS = (
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
)

_RATE = 136  # bytes; 1600 - 2*256 bits


def _rotl(value: int, shift: int) -> int:
    return ((value << shift) | (value >> (64 - shift))) & _MASK


def _permute(state: list[int]) -> None:
    for rc in _ROUND_CONSTANTS:
        # theta
        c = [
            state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20]
            for x in range(5)
        ]
        d = [c[(x + 4) % 5] ^ _rotl(c[(x + 1) % 5], 1) for x in range(5)]
        for x in range(5):
            for y in range(0, 25, 5):
                state[x + y] ^= d[x]
        # rho + pi
        rotated = [0] * 25
        for x in range(5):
            for y in range(5):
                rotated[y + 5 * ((2 * x + 3 * y) % 5)] = _rotl(
                    state[x + 5 * y], _RHO[x + 5 * y]
                )
        # chi
        for y in range(0, 25, 5):
            row = rotated[y : y + 5]
            for x in range(5):
                state[x + y] = row[x] ^ ((~row[(x + 1) % 5]) & row[(x + 2) % 5])
        # iota
        state[0] ^= rc


@lru_cache(maxsize=8192)
def keccak256(data: bytes) -> bytes:
    """32-byte Keccak-256 digest of ``data``."""
    state = [0] * 25
    # absorb with multi-rate padding 0x01 .. 0x80
    padded = bytearray(data)
    padded.append(0x01)
    padded.extend(b"\x00" * (-len(padded) % _RATE))
    padded[-1] |= 0x80
    for offset in range(0, len(padded), _RATE):
        block = padded[offset : offset + _RATE]
        for i in range(_RATE // 8):
            state[i] ^= int.from_bytes(block[8 * i : 8 * i + 8], "little")
        _permute(state)
    # squeeze: 32 bytes fit in the first rate block
    out = bytearray()
    for i in range(4):
        out += state[i].to_bytes(8, "little")
    return bytes(out)


def selector(signature: str) -> bytes:
    """First 4 digest bytes of a call signature string."""
    return keccak256(signature.encode("utf-8"))[:4]
