"""Upload-fee tickets: donation transactions consumed at most once.

A ticket passes three checks, in order: the donation went to the registry
contract, its value covers the estimated fee, and it was never used before.
Claims are two-phase so a later pipeline rejection can hand the ticket back
untouched.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from ..ledger import Address, Chain, TxStatus


class FeeRejected(Exception):
    def __init__(self, condition: str, detail: str = ""):
        super().__init__(f"{condition}: {detail}" if detail else condition)
        self.condition = condition


@dataclass
class FeeTicket:
    tx_id: bytes
    payer: Address
    value: int
    consumed: bool


class FeeTickets:
    def __init__(
        self,
        chain: Chain,
        registry_address: Address,
        persist_path: str | Path | None = None,
    ):
        self.chain = chain
        self.registry_address = registry_address
        self.persist_path = Path(persist_path) if persist_path else None
        self._lock = threading.Lock()
        self._used: set[bytes] = set()
        self._claimed: set[bytes] = set()
        if self.persist_path and self.persist_path.exists():
            for line in self.persist_path.read_text().split():
                self._used.add(bytes.fromhex(line))

    def verify_and_claim(self, tx_id: bytes, required: int) -> FeeTicket:
        """Run the three conditions; on success the ticket is claimed.

        Conditions are reported individually: wrongDestination,
        insufficientValue, alreadyUsed (plus unknownTx for absent ids).
        """
        entry = self.chain.receipt_by_tx_id(tx_id)
        if entry is None:
            raise FeeRejected("unknownTx", tx_id.hex())
        _, tx, receipt = entry
        if tx.to != self.registry_address:
            raise FeeRejected("wrongDestination", tx.to.hex())
        effective = tx.value if receipt.status is TxStatus.SUCCESS else 0
        if effective < required:
            raise FeeRejected(
                "insufficientValue", f"{effective} < required {required}"
            )
        with self._lock:
            if tx_id in self._used or tx_id in self._claimed:
                raise FeeRejected("alreadyUsed", tx_id.hex())
            self._claimed.add(tx_id)
        return FeeTicket(tx_id, tx.sender, tx.value, consumed=True)

    def release(self, ticket: FeeTicket) -> None:
        """Hand a claimed ticket back (the upload it covered was rejected)."""
        with self._lock:
            self._claimed.discard(ticket.tx_id)
        ticket.consumed = False

    def commit(self, ticket: FeeTicket) -> None:
        with self._lock:
            self._claimed.discard(ticket.tx_id)
            self._used.add(ticket.tx_id)
        if self.persist_path:
            self.persist_path.parent.mkdir(parents=True, exist_ok=True)
            with self.persist_path.open("a") as fh:
                fh.write(ticket.tx_id.hex() + "\n")

    def consumed_total(self) -> int:
        """Sum of values of committed tickets (for conservation checks)."""
        total = 0
        for tx_id in self._used:
            entry = self.chain.receipt_by_tx_id(tx_id)
            if entry:
                total += entry[1].value
        return total
