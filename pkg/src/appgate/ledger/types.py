"""Core ledger records: accounts, transactions, receipts, blocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from .bloom import Bloom2048

ADDRESS_LEN = 20
TOPIC_LEN = 32


class LedgerError(Exception):
    """Base class for ledger failures."""


class BadNonce(LedgerError):
    pass


class InsufficientBalance(LedgerError):
    pass


class RangeOutOfBounds(LedgerError):
    pass


class Reverted(LedgerError):
    """Execution aborted; all state changes were rolled back.

    Carries the revert receipt that was appended to the chain.
    """

    def __init__(self, reason: str, receipt: "Receipt | None" = None):
        super().__init__(reason)
        self.reason = reason
        self.receipt = receipt


@dataclass(frozen=True, order=True)
class Address:
    """20-byte opaque account identifier."""

    value: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.value, bytes) or len(self.value) != ADDRESS_LEN:
            raise ValueError("address must be exactly 20 bytes")

    @classmethod
    def from_hex(cls, text: str) -> "Address":
        text = text.removeprefix("0x")
        return cls(bytes.fromhex(text.zfill(ADDRESS_LEN * 2)))

    def hex(self) -> str:
        return "0x" + self.value.hex()

    def __repr__(self) -> str:
        return f"Address({self.hex()})"


@dataclass(frozen=True)
class GasSchedule:
    """Cost model for transactions, storage words, and logs."""

    tx_base: int = 21_000
    calldata_nonzero_byte: int = 16
    calldata_zero_byte: int = 4
    sstore_set: int = 20_000
    log_base: int = 375
    log_topic: int = 375
    log_data_byte: int = 8

    def __post_init__(self) -> None:
        if self.sstore_set != 20_000 or self.log_base != 375:
            raise ValueError("sstore_set and log_base are fixed at 20000 / 375")
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ValueError(f"gas constant {name} must be positive")

    def calldata_cost(self, calldata: bytes) -> int:
        zeros = calldata.count(0)
        return (
            zeros * self.calldata_zero_byte
            + (len(calldata) - zeros) * self.calldata_nonzero_byte
        )

    def log_cost(self, topic_count: int, data_len: int) -> int:
        return (
            self.log_base
            + topic_count * self.log_topic
            + data_len * self.log_data_byte
        )


@dataclass(frozen=True)
class Transaction:
    sender: Address
    to: Address
    value: int
    calldata: bytes
    nonce: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("value must be >= 0")
        if self.nonce < 0:
            raise ValueError("nonce must be >= 0")


@dataclass(frozen=True)
class LogEntry:
    emitter: Address
    topics: Tuple[bytes, ...]
    data: bytes

    def __post_init__(self) -> None:
        if len(self.topics) > 4:
            raise ValueError("a log carries at most 4 topics")
        for t in self.topics:
            if len(t) != TOPIC_LEN:
                raise ValueError("topics are 32-byte words")


class TxStatus(Enum):
    SUCCESS = "success"
    REVERT = "revert"


@dataclass(frozen=True)
class Receipt:
    tx_id: bytes
    status: TxStatus
    gas_used: int
    logs: Tuple[LogEntry, ...]

    def __post_init__(self) -> None:
        if self.gas_used <= 0:
            raise ValueError("an executed transaction consumes gas")
        if self.status is TxStatus.REVERT and self.logs:
            raise ValueError("reverted transactions keep no logs")


@dataclass
class Block:
    number: int
    transaction: Transaction
    receipt: Receipt
    log_bloom: Bloom2048 = field(default_factory=Bloom2048)
    # (address, key, word) writes applied by this block, for replay
    storage_delta: Tuple[Tuple[Address, bytes, bytes], ...] = ()
