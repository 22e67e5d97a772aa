"""Binary codec for ledger records and the append-only block file.

Every chain entry is one length-prefixed serialized block; replaying the file
reconstructs balances, nonces, storage, and blooms without re-running any
contract code (storage writes travel as an explicit delta).  Layout is
documented field-by-field in FORMATS.md.
"""

from __future__ import annotations

import io
import struct
from pathlib import Path
from typing import BinaryIO, Iterator

from .bloom import BLOOM_BYTES, Bloom2048
from .types import Address, Block, LogEntry, Receipt, Transaction, TxStatus


class CodecError(Exception):
    pass


def _write_bytes(buf: io.BytesIO, raw: bytes, width: int = 4) -> None:
    buf.write(len(raw).to_bytes(width, "big"))
    buf.write(raw)


class _Reader:
    def __init__(self, raw: bytes):
        self.raw = raw
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.raw):
            raise CodecError("truncated record")
        out = self.raw[self.pos : self.pos + n]
        self.pos += n
        return out

    def u(self, width: int) -> int:
        return int.from_bytes(self.take(width), "big")

    def blob(self, width: int = 4) -> bytes:
        return self.take(self.u(width))

    def done(self) -> bool:
        return self.pos == len(self.raw)


def encode_tx(tx: Transaction) -> bytes:
    buf = io.BytesIO()
    buf.write(tx.sender.value)
    buf.write(tx.to.value)
    value_raw = tx.value.to_bytes((tx.value.bit_length() + 7) // 8, "big")
    _write_bytes(buf, value_raw, width=2)
    _write_bytes(buf, tx.calldata)
    buf.write(struct.pack(">Q", tx.nonce))
    return buf.getvalue()


def decode_tx(reader: _Reader) -> Transaction:
    sender = Address(reader.take(20))
    to = Address(reader.take(20))
    value = int.from_bytes(reader.blob(width=2), "big")
    calldata = reader.blob()
    nonce = reader.u(8)
    return Transaction(sender, to, value, calldata, nonce)


def encode_log(log: LogEntry) -> bytes:
    buf = io.BytesIO()
    buf.write(log.emitter.value)
    buf.write(bytes([len(log.topics)]))
    for t in log.topics:
        buf.write(t)
    _write_bytes(buf, log.data)
    return buf.getvalue()


def decode_log(reader: _Reader) -> LogEntry:
    emitter = Address(reader.take(20))
    count = reader.u(1)
    topics = tuple(reader.take(32) for _ in range(count))
    data = reader.blob()
    return LogEntry(emitter, topics, data)


def encode_receipt(receipt: Receipt) -> bytes:
    buf = io.BytesIO()
    buf.write(receipt.tx_id)
    buf.write(b"\x00" if receipt.status is TxStatus.SUCCESS else b"\x01")
    buf.write(struct.pack(">Q", receipt.gas_used))
    buf.write(struct.pack(">H", len(receipt.logs)))
    for log in receipt.logs:
        buf.write(encode_log(log))
    return buf.getvalue()


def decode_receipt(reader: _Reader) -> Receipt:
    tx_id = reader.take(32)
    status = TxStatus.SUCCESS if reader.u(1) == 0 else TxStatus.REVERT
    gas_used = reader.u(8)
    count = reader.u(2)
    logs = tuple(decode_log(reader) for _ in range(count))
    return Receipt(tx_id, status, gas_used, logs)


def encode_block(block: Block) -> bytes:
    buf = io.BytesIO()
    buf.write(struct.pack(">Q", block.number))
    _write_bytes(buf, encode_tx(block.transaction))
    buf.write(encode_receipt(block.receipt))
    buf.write(block.log_bloom.to_bytes())
    buf.write(struct.pack(">I", len(block.storage_delta)))
    for addr, key, word in block.storage_delta:
        buf.write(addr.value)
        buf.write(key)
        buf.write(word)
    return buf.getvalue()


def decode_block(raw: bytes) -> Block:
    reader = _Reader(raw)
    number = reader.u(8)
    tx = decode_tx(_Reader(reader.blob()))
    receipt = decode_receipt(reader)
    bloom = Bloom2048.from_bytes(reader.take(BLOOM_BYTES))
    delta_count = reader.u(4)
    delta = tuple(
        (Address(reader.take(20)), reader.take(32), reader.take(32))
        for _ in range(delta_count)
    )
    if not reader.done():
        raise CodecError("trailing bytes after block")
    return Block(number, tx, receipt, bloom, delta)


class BlockFile:
    """Append-only store: u32 length prefix + serialized block per entry."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._handle: BinaryIO | None = None

    def replay(self) -> Iterator[Block]:
        if not self.path.exists():
            return
        with self.path.open("rb") as fh:
            while True:
                head = fh.read(4)
                if not head:
                    return
                if len(head) < 4:
                    raise CodecError("truncated length prefix")
                length = int.from_bytes(head, "big")
                raw = fh.read(length)
                if len(raw) < length:
                    raise CodecError("truncated block entry")
                yield decode_block(raw)

    def append(self, block: Block) -> None:
        if self._handle is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.path.open("ab")
        raw = encode_block(block)
        self._handle.write(len(raw).to_bytes(4, "big"))
        self._handle.write(raw)
        self._handle.flush()

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None
