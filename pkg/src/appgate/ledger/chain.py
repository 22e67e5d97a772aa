"""Single-writer account ledger with metered execution and log queries.

One transaction per block; block "headers" are (number, bloom).  Contract
code runs through an :class:`ExecutionContext` that meters storage words and
log emissions against the gas schedule.  Reads (``find_logs``, balances)
never consume gas and may run concurrently with the writer.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Protocol

from ..digest import keccak256
from .bloom import Bloom2048
from .codec import BlockFile, encode_tx
from .types import (
    Address,
    BadNonce,
    Block,
    GasSchedule,
    InsufficientBalance,
    LogEntry,
    RangeOutOfBounds,
    Receipt,
    Reverted,
    Transaction,
    TxStatus,
)

WORD = 32
DEFAULT_GAS_PRICE = 10**9  # 1 gwei in wei


class _Revert(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ExecutionContext:
    """What a contract sees while executing one transaction."""

    def __init__(self, chain: "Chain", tx: Transaction):
        self._chain = chain
        self.tx = tx
        self.sender = tx.sender
        self.value = tx.value
        self.calldata = tx.calldata
        self.gas_used = 0
        self.logs: list[LogEntry] = []
        self.writes: dict[bytes, bytes] = {}

    def emit_log(self, topics: Iterable[bytes], data: bytes) -> LogEntry:
        log = LogEntry(self.tx.to, tuple(topics), data)
        self.gas_used += self._chain.schedule.log_cost(len(log.topics), len(log.data))
        self.logs.append(log)
        return log

    def sstore(self, key: bytes, word: bytes) -> None:
        if len(key) != WORD or len(word) != WORD:
            raise ValueError("storage keys and words are 32 bytes")
        self.gas_used += self._chain.schedule.sstore_set
        self.writes[key] = word

    def sload(self, key: bytes) -> bytes:
        if key in self.writes:
            return self.writes[key]
        return self._chain.storage_word(self.tx.to, key)

    def revert(self, reason: str) -> None:
        raise _Revert(reason)


class ContractExecutor(Protocol):
    def execute(self, ctx: ExecutionContext) -> None: ...


class NoopExecutor:
    """Plain value transfer; contributes no execution gas."""

    def execute(self, ctx: ExecutionContext) -> None:
        return None


@dataclass
class ScanStats:
    """Instrumentation for one find_logs call."""

    blocks_checked: int = 0
    bloom_matches: int = 0
    blocks_scanned: int = 0


@dataclass
class Chain:
    schedule: GasSchedule = field(default_factory=GasSchedule)
    gas_price: int = DEFAULT_GAS_PRICE

    def __post_init__(self) -> None:
        self.blocks: list[Block] = []
        self.balances: dict[Address, int] = {}
        self.nonces: dict[Address, int] = {}
        self.storage: dict[Address, dict[bytes, bytes]] = {}
        self.receipts: dict[bytes, tuple[int, Transaction, Receipt]] = {}
        self._write_lock = threading.Lock()
        self._store: BlockFile | None = None

    # -- setup ------------------------------------------------------------

    @classmethod
    def open(
        cls,
        path,
        genesis: dict[Address, int] | None = None,
        schedule: GasSchedule | None = None,
        gas_price: int = DEFAULT_GAS_PRICE,
    ) -> "Chain":
        """Attach to an append-only block file, replaying any existing blocks."""
        chain = cls(schedule or GasSchedule(), gas_price)
        chain.apply_genesis(genesis or {})
        store = BlockFile(path)
        for block in store.replay():
            chain._apply_block(block)
            chain.blocks.append(block)
        chain._store = store
        return chain

    def apply_genesis(self, balances: dict[Address, int]) -> None:
        for addr, amount in balances.items():
            self.balances[addr] = self.balances.get(addr, 0) + amount

    def close(self) -> None:
        if self._store is not None:
            self._store.close()

    # -- reads (gas-free, concurrent-safe) --------------------------------

    @property
    def head(self) -> int:
        return len(self.blocks) - 1

    def balance(self, addr: Address) -> int:
        return self.balances.get(addr, 0)

    def nonce(self, addr: Address) -> int:
        return self.nonces.get(addr, 0)

    def storage_word(self, addr: Address, key: bytes) -> bytes:
        return self.storage.get(addr, {}).get(key, b"\x00" * WORD)

    def receipt_by_tx_id(self, tx_id: bytes):
        return self.receipts.get(tx_id)

    def find_logs(
        self,
        from_block: int,
        to_block: int,
        topic: bytes,
        stats: ScanStats | None = None,
    ) -> list[tuple[int, LogEntry]]:
        """All logs in [from_block, to_block] whose topics contain ``topic``.

        Blocks whose bloom rejects the topic are skipped without touching
        receipts.  Consumes no gas and mutates nothing.
        """
        if from_block < 0 or to_block > self.head or from_block > to_block:
            raise RangeOutOfBounds(f"[{from_block}, {to_block}] vs head {self.head}")
        found: list[tuple[int, LogEntry]] = []
        for block in self.blocks[from_block : to_block + 1]:
            if stats:
                stats.blocks_checked += 1
            if not block.log_bloom.query(topic):
                continue
            if stats:
                stats.bloom_matches += 1
                stats.blocks_scanned += 1
            for log in block.receipt.logs:
                if topic in log.topics:
                    found.append((block.number, log))
        return found

    def state_snapshot(self) -> tuple:
        """Hashable copy of (balances, nonces, storage) for diff tests."""
        return (
            tuple(sorted((a.value, v) for a, v in self.balances.items())),
            tuple(sorted((a.value, v) for a, v in self.nonces.items())),
            tuple(
                sorted(
                    (a.value, k, w)
                    for a, words in self.storage.items()
                    for k, w in words.items()
                )
            ),
        )

    # -- writes ------------------------------------------------------------

    def submit(self, tx: Transaction, executor: ContractExecutor | None = None) -> Receipt:
        """Execute ``tx`` and append a block holding its receipt.

        Raises BadNonce / InsufficientBalance without appending anything;
        raises Reverted after appending the revert receipt (state rolled
        back, value untransferred, no balance debit).
        """
        executor = executor or NoopExecutor()
        with self._write_lock:
            if tx.nonce != self.nonces.get(tx.sender, 0):
                raise BadNonce(
                    f"expected nonce {self.nonces.get(tx.sender, 0)}, got {tx.nonce}"
                )
            tx_id = keccak256(encode_tx(tx))
            ctx = ExecutionContext(self, tx)
            revert_reason: str | None = None
            try:
                executor.execute(ctx)
            except _Revert as exc:
                revert_reason = exc.reason

            gas_used = (
                self.schedule.tx_base
                + self.schedule.calldata_cost(tx.calldata)
                + ctx.gas_used
            )

            if revert_reason is not None:
                receipt = Receipt(tx_id, TxStatus.REVERT, gas_used, ())
                self.nonces[tx.sender] = tx.nonce + 1
                self._append(Block(self.head + 1, tx, receipt, Bloom2048(), ()))
                raise Reverted(revert_reason, receipt)

            fee = gas_used * self.gas_price
            if self.balances.get(tx.sender, 0) < tx.value + fee:
                raise InsufficientBalance(
                    f"balance {self.balances.get(tx.sender, 0)} < value {tx.value} + fee {fee}"
                )

            receipt = Receipt(tx_id, TxStatus.SUCCESS, gas_used, tuple(ctx.logs))
            bloom = Bloom2048()
            for log in ctx.logs:
                bloom.insert(log.emitter.value)
                for t in log.topics:
                    bloom.insert(t)
            delta = tuple((tx.to, k, w) for k, w in ctx.writes.items())

            self.balances[tx.sender] = self.balances.get(tx.sender, 0) - tx.value - fee
            self.balances[tx.to] = self.balances.get(tx.to, 0) + tx.value
            self.nonces[tx.sender] = tx.nonce + 1
            for _, key, word in delta:
                self.storage.setdefault(tx.to, {})[key] = word

            self._append(Block(self.head + 1, tx, receipt, bloom, delta))
            return receipt

    def _append(self, block: Block) -> None:
        self.receipts[block.receipt.tx_id] = (
            block.number,
            block.transaction,
            block.receipt,
        )
        self.blocks.append(block)
        if self._store is not None:
            self._store.append(block)

    def _apply_block(self, block: Block) -> None:
        """Replay one persisted block onto current state."""
        tx, receipt = block.transaction, block.receipt
        self.nonces[tx.sender] = tx.nonce + 1
        if receipt.status is TxStatus.SUCCESS:
            fee = receipt.gas_used * self.gas_price
            self.balances[tx.sender] = self.balances.get(tx.sender, 0) - tx.value - fee
            self.balances[tx.to] = self.balances.get(tx.to, 0) + tx.value
            for addr, key, word in block.storage_delta:
                self.storage.setdefault(addr, {})[key] = word
        self.receipts[receipt.tx_id] = (block.number, tx, receipt)
