"""App metadata records and their canonical on-chain byte layout.

The log-data encoding is length-prefixed fields in fixed order:

    u16 len + packageName (UTF-8)
    u16 len + version (UTF-8)
    u16 len + certSerial (minimal big-endian, empty for zero)
    u16 len + originUrl (UTF-8)
    1 byte   repackVerdict (0x00 unchecked, 0x01 pass, 0x02 fail)
    32 bytes contentId digest (raw)

Event topics:
    topic[0] = keccak256("AppStored(bytes)")
    topic[1] = keccak256(packageName || 0x00 || version)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..digest import keccak256

EVENT_SIGNATURE = "AppStored(bytes)"
EVENT_TOPIC = keccak256(EVENT_SIGNATURE.encode("utf-8"))

CONTENT_ID_LEN = 32
_VERDICT_BYTE = {"unchecked": 0x00, "pass": 0x01, "fail": 0x02}
_BYTE_VERDICT = {v: k for k, v in _VERDICT_BYTE.items()}


class RepackVerdict(Enum):
    UNCHECKED = "unchecked"
    PASS = "pass"
    FAIL = "fail"


class MalformedRecord(Exception):
    pass


@dataclass(frozen=True)
class AppRecord:
    package_name: str
    version: str
    cert_serial: int
    origin_url: str
    repack_verdict: RepackVerdict
    content_id: bytes  # raw 32-byte digest

    def __post_init__(self) -> None:
        if not self.package_name or not self.version:
            raise MalformedRecord("package name and version must be non-empty")
        if self.cert_serial < 0:
            raise MalformedRecord("certificate serial must be non-negative")
        if len(self.content_id) != CONTENT_ID_LEN:
            raise MalformedRecord("content id must be a raw 32-byte digest")

    @property
    def identity(self) -> tuple[str, str]:
        return (self.package_name, self.version)


def identity_topic(package_name: str, version: str) -> bytes:
    """Topic word for one (package, version), used for log filtering."""
    return keccak256(
        package_name.encode("utf-8") + b"\x00" + version.encode("utf-8")
    )


def _field(raw: bytes) -> bytes:
    if len(raw) > 0xFFFF:
        raise MalformedRecord("field exceeds 65535 bytes")
    return len(raw).to_bytes(2, "big") + raw


def encode_record(record: AppRecord) -> bytes:
    serial = record.cert_serial
    serial_raw = serial.to_bytes((serial.bit_length() + 7) // 8, "big")
    return b"".join(
        (
            _field(record.package_name.encode("utf-8")),
            _field(record.version.encode("utf-8")),
            _field(serial_raw),
            _field(record.origin_url.encode("utf-8")),
            bytes([_VERDICT_BYTE[record.repack_verdict.value]]),
            record.content_id,
        )
    )


def decode_record(raw: bytes) -> AppRecord:
    pos = 0

    def take(n: int) -> bytes:
        nonlocal pos
        if pos + n > len(raw):
            raise MalformedRecord("truncated record encoding")
        out = raw[pos : pos + n]
        pos += n
        return out

    def field() -> bytes:
        return take(int.from_bytes(take(2), "big"))

    try:
        package_name = field().decode("utf-8")
        version = field().decode("utf-8")
        serial = int.from_bytes(field(), "big")
        origin_url = field().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedRecord("text field is not valid UTF-8") from exc
    verdict_byte = take(1)[0]
    if verdict_byte not in _BYTE_VERDICT:
        raise MalformedRecord(f"unknown verdict byte {verdict_byte:#x}")
    content_id = take(CONTENT_ID_LEN)
    if pos != len(raw):
        raise MalformedRecord("trailing bytes after record")
    return AppRecord(
        package_name,
        version,
        serial,
        origin_url,
        RepackVerdict(_BYTE_VERDICT[verdict_byte]),
        content_id,
    )
