"""Whitelist-gated app registry hosted on the ledger.

Two storage backends live side by side: the log path (``storeApps``) emits
one 2-topic log per record and writes no storage words; the struct-storage
baseline (``storeAppBaseline``) writes the canonical encoding into storage
words and scans every previously stored record for duplicates, mirroring the
design the log path replaces.  Only the log path is used by the gateway; the
baseline exists to make the gas comparison measurable.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from ..digest import selector
from ..ledger import (
    Address,
    Chain,
    ExecutionContext,
    GasSchedule,
    Receipt,
    Reverted,
    Transaction,
)
from .records import (
    EVENT_TOPIC,
    AppRecord,
    MalformedRecord,
    decode_record,
    encode_record,
    identity_topic,
)

MAX_BATCH = 500
WORD = 32

SEL_STORE = selector("storeApps(bytes[])")
SEL_BASELINE = selector("storeAppBaseline(bytes)")
SEL_DONATE = selector("donateGasFee()")
SEL_WL_ADD = selector("whitelistAdd(address)")
SEL_WL_REMOVE = selector("whitelistRemove(address)")

_TRUE_WORD = b"\x00" * 31 + b"\x01"
_ZERO_WORD = b"\x00" * 32


class RegistryError(Exception):
    pass


class NotWhitelisted(RegistryError):
    pass


class NotOwner(RegistryError):
    pass


class EmptyBatch(RegistryError):
    pass


class BatchTooLarge(RegistryError):
    pass


class DuplicateRecord(RegistryError):
    pass


class ZeroValue(RegistryError):
    pass


_REVERT_TYPES: dict[str, type[RegistryError]] = {
    "NotWhitelisted": NotWhitelisted,
    "NotOwner": NotOwner,
    "EmptyBatch": EmptyBatch,
    "BatchTooLarge": BatchTooLarge,
    "MalformedRecord": MalformedRecord,  # type: ignore[dict-item]
    "DuplicateRecord": DuplicateRecord,
    "ZeroValue": ZeroValue,
}


def revert_to_error(exc: Reverted) -> Exception:
    name = exc.reason.split(":", 1)[0]
    err_type = _REVERT_TYPES.get(name, RegistryError)
    return err_type(exc.reason)


# -- calldata builders ------------------------------------------------------


def store_calldata(blobs: list[bytes]) -> bytes:
    parts = [SEL_STORE, len(blobs).to_bytes(2, "big")]
    for blob in blobs:
        parts.append(len(blob).to_bytes(4, "big"))
        parts.append(blob)
    return b"".join(parts)


def baseline_calldata(blob: bytes) -> bytes:
    return SEL_BASELINE + len(blob).to_bytes(4, "big") + blob


def donate_calldata() -> bytes:
    return SEL_DONATE


def whitelist_calldata(add: bool, member: Address) -> bytes:
    return (SEL_WL_ADD if add else SEL_WL_REMOVE) + member.value


# -- storage keys (fixed layout, no hashing needed) --------------------------


def _wl_key(addr: Address) -> bytes:
    return b"W" + addr.value + b"\x00" * 11


def _len_key(index: int) -> bytes:
    return b"L" + index.to_bytes(4, "big") + b"\x00" * 27


def _chunk_key(index: int, chunk: int) -> bytes:
    return b"R" + index.to_bytes(4, "big") + chunk.to_bytes(4, "big") + b"\x00" * 23


class AppRegistry:
    """Contract executor; all mutable state lives in chain storage."""

    def __init__(self, address: Address, owner: Address):
        self.address = address
        self.owner = owner

    # -- executor entry point ----------------------------------------------

    def execute(self, ctx: ExecutionContext) -> None:
        data = ctx.calldata
        if len(data) < 4:
            ctx.revert("UnknownMethod: calldata too short")
        sel, payload = data[:4], data[4:]
        if sel == SEL_STORE:
            self._store_apps(ctx, payload)
        elif sel == SEL_BASELINE:
            self._store_baseline(ctx, payload)
        elif sel == SEL_DONATE:
            self._donate(ctx)
        elif sel == SEL_WL_ADD:
            self._whitelist(ctx, payload, add=True)
        elif sel == SEL_WL_REMOVE:
            self._whitelist(ctx, payload, add=False)
        else:
            ctx.revert(f"UnknownMethod: {sel.hex()}")

    # -- handlers -------------------------------------------------------------

    def _require_whitelisted(self, ctx: ExecutionContext) -> None:
        if ctx.sload(_wl_key(ctx.sender)) == _ZERO_WORD:
            ctx.revert(f"NotWhitelisted: {ctx.sender.hex()}")

    def _store_apps(self, ctx: ExecutionContext, payload: bytes) -> None:
        self._require_whitelisted(ctx)
        blobs = _parse_blob_list(ctx, payload)
        if not blobs:
            ctx.revert("EmptyBatch: no records")
        if len(blobs) > MAX_BATCH:
            ctx.revert(f"BatchTooLarge: {len(blobs)} > {MAX_BATCH}")
        for i, blob in enumerate(blobs):
            try:
                record = decode_record(blob)
            except MalformedRecord as exc:
                ctx.revert(f"MalformedRecord: index {i}: {exc}")
                return
            ctx.emit_log(
                (EVENT_TOPIC, identity_topic(record.package_name, record.version)),
                blob,
            )

    def _store_baseline(self, ctx: ExecutionContext, payload: bytes) -> None:
        self._require_whitelisted(ctx)
        if len(payload) < 4:
            ctx.revert("MalformedRecord: missing length prefix")
        length = int.from_bytes(payload[:4], "big")
        blob = payload[4 : 4 + length]
        if len(blob) != length:
            ctx.revert("MalformedRecord: truncated payload")
        try:
            record = decode_record(blob)
        except MalformedRecord as exc:
            ctx.revert(f"MalformedRecord: {exc}")
            return
        # duplicate scan over every record stored so far
        index = 0
        while True:
            stored_len = int.from_bytes(ctx.sload(_len_key(index)), "big")
            if stored_len == 0:
                break
            stored = self._read_entry(ctx, index, stored_len)
            if decode_record(stored).identity == record.identity:
                ctx.revert(
                    f"DuplicateRecord: {record.package_name} {record.version}"
                )
            index += 1
        # one word per 32-byte chunk of the encoding, plus the length word
        for chunk_no in range(0, len(blob), WORD):
            chunk = blob[chunk_no : chunk_no + WORD].ljust(WORD, b"\x00")
            ctx.sstore(_chunk_key(index, chunk_no // WORD), chunk)
        ctx.sstore(_len_key(index), len(blob).to_bytes(WORD, "big"))

    def _read_entry(self, ctx: ExecutionContext, index: int, length: int) -> bytes:
        chunks = [
            ctx.sload(_chunk_key(index, j)) for j in range((length + WORD - 1) // WORD)
        ]
        return b"".join(chunks)[:length]

    def _donate(self, ctx: ExecutionContext) -> None:
        if ctx.value <= 0:
            ctx.revert("ZeroValue: donation must carry value")

    def _whitelist(self, ctx: ExecutionContext, payload: bytes, add: bool) -> None:
        if ctx.sender != self.owner:
            ctx.revert(f"NotOwner: {ctx.sender.hex()}")
        if len(payload) != 20:
            ctx.revert("MalformedRecord: whitelist payload must be a 20-byte address")
        member = Address(payload)
        ctx.sstore(_wl_key(member), _TRUE_WORD if add else _ZERO_WORD)

    # -- reads ----------------------------------------------------------------

    def is_whitelisted(self, chain: Chain, addr: Address) -> bool:
        return chain.storage_word(self.address, _wl_key(addr)) != _ZERO_WORD

    def baseline_count(self, chain: Chain) -> int:
        index = 0
        while (
            int.from_bytes(chain.storage_word(self.address, _len_key(index)), "big")
            != 0
        ):
            index += 1
        return index

    def store_app_estimate(self, record: AppRecord, schedule: GasSchedule) -> int:
        """Exact gas a successful single-record storeApp would consume.

        Pure: callable by anyone, touches no state, costs nothing.
        """
        blob = encode_record(record)
        calldata = store_calldata([blob])
        return (
            schedule.tx_base
            + schedule.calldata_cost(calldata)
            + schedule.log_cost(2, len(blob))
        )


def _parse_blob_list(ctx: ExecutionContext, payload: bytes) -> list[bytes]:
    if len(payload) < 2:
        ctx.revert("MalformedRecord: missing record count")
    count = int.from_bytes(payload[:2], "big")
    blobs = []
    pos = 2
    for _ in range(count):
        if pos + 4 > len(payload):
            ctx.revert("MalformedRecord: truncated record list")
        length = int.from_bytes(payload[pos : pos + 4], "big")
        pos += 4
        if pos + length > len(payload):
            ctx.revert("MalformedRecord: truncated record blob")
        blobs.append(payload[pos : pos + length])
        pos += length
    if pos != len(payload):
        ctx.revert("MalformedRecord: trailing bytes in record list")
    return blobs


@dataclass
class RegistryClient:
    """Account-bound convenience wrapper that turns reverts into typed errors."""

    chain: Chain
    registry: AppRegistry
    account: Address

    def __post_init__(self) -> None:
        self._lock = threading.Lock()

    def _submit(self, calldata: bytes, value: int = 0) -> Receipt:
        with self._lock:
            tx = Transaction(
                self.account,
                self.registry.address,
                value,
                calldata,
                self.chain.nonce(self.account),
            )
            try:
                return self.chain.submit(tx, self.registry)
            except Reverted as exc:
                raise revert_to_error(exc) from exc

    def store_app(self, record: AppRecord) -> Receipt:
        return self._submit(store_calldata([encode_record(record)]))

    def store_app_batch(self, records: list[AppRecord]) -> Receipt:
        if not records:
            raise EmptyBatch("no records")
        return self._submit(store_calldata([encode_record(r) for r in records]))

    def store_app_baseline(self, record: AppRecord) -> Receipt:
        return self._submit(baseline_calldata(encode_record(record)))

    def donate_gas_fee(self, value: int) -> Receipt:
        return self._submit(donate_calldata(), value=value)

    def whitelist_add(self, member: Address) -> Receipt:
        return self._submit(whitelist_calldata(True, member))

    def whitelist_remove(self, member: Address) -> Receipt:
        return self._submit(whitelist_calldata(False, member))


def stored_records(
    chain: Chain, registry_address: Address
) -> list[tuple[int, AppRecord]]:
    """Every app record on chain, recovered from logs, in chain order."""
    if chain.head < 0:
        return []
    out = []
    for block_no, log in chain.find_logs(0, chain.head, EVENT_TOPIC):
        if log.emitter == registry_address:
            out.append((block_no, decode_record(log.data)))
    return out


def find_record(
    chain: Chain, registry_address: Address, package_name: str, version: str
) -> AppRecord | None:
    """Bloom-filtered lookup of one (package, version); no gas consumed."""
    if chain.head < 0:
        return None
    topic = identity_topic(package_name, version)
    for _, log in chain.find_logs(0, chain.head, topic):
        if log.emitter == registry_address:
            record = decode_record(log.data)
            if record.identity == (package_name, version):
                return record
    return None
