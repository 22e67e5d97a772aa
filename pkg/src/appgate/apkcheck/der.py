"""Structural DER traversal, just deep enough to reach a certificate serial.

No cryptographic validation happens here: the serial number is used as a
signer-identity proxy, so the walk only needs SEQUENCE/SET navigation down to
TBSCertificate's serialNumber INTEGER.
"""

from __future__ import annotations

from dataclasses import dataclass

TAG_INTEGER = 0x02
TAG_OID = 0x06
TAG_SEQUENCE = 0x30
TAG_SET = 0x31
TAG_CONTEXT_0 = 0xA0


class MalformedDer(Exception):
    pass


@dataclass(frozen=True)
class Tlv:
    tag: int
    content: bytes

    @property
    def constructed(self) -> bool:
        return bool(self.tag & 0x20)


def _read_tlv(data: bytes, pos: int) -> tuple[Tlv, int]:
    if pos + 2 > len(data):
        raise MalformedDer("truncated TLV header")
    tag = data[pos]
    if tag & 0x1F == 0x1F:
        raise MalformedDer("multi-byte tags are not used in certificate blobs")
    pos += 1
    first = data[pos]
    pos += 1
    if first < 0x80:
        length = first
    elif first == 0x80:
        raise MalformedDer("indefinite length is not DER")
    else:
        n_bytes = first & 0x7F
        if n_bytes > 4:
            raise MalformedDer("unreasonable length-of-length")
        if pos + n_bytes > len(data):
            raise MalformedDer("truncated long-form length")
        length = int.from_bytes(data[pos : pos + n_bytes], "big")
        pos += n_bytes
    if pos + length > len(data):
        raise MalformedDer("content runs past end of data")
    return Tlv(tag, data[pos : pos + length]), pos + length


def parse_one(data: bytes) -> Tlv:
    """Parse exactly one TLV covering all of ``data``."""
    tlv, end = _read_tlv(data, 0)
    if end != len(data):
        raise MalformedDer("trailing bytes after top-level element")
    return tlv


def children(tlv: Tlv) -> list[Tlv]:
    if not tlv.constructed:
        raise MalformedDer(f"tag {tlv.tag:#x} is primitive, cannot descend")
    out = []
    pos = 0
    while pos < len(tlv.content):
        child, pos = _read_tlv(tlv.content, pos)
        out.append(child)
    return out


def parse_integer(tlv: Tlv) -> int:
    if tlv.tag != TAG_INTEGER:
        raise MalformedDer(f"expected INTEGER, found tag {tlv.tag:#x}")
    if not tlv.content:
        raise MalformedDer("empty INTEGER")
    return int.from_bytes(tlv.content, "big", signed=True)


def certificate_serial(cert: Tlv) -> int:
    """serialNumber of one X.509 Certificate SEQUENCE."""
    if cert.tag != TAG_SEQUENCE:
        raise MalformedDer("certificate is not a SEQUENCE")
    parts = children(cert)
    if not parts:
        raise MalformedDer("certificate SEQUENCE is empty")
    tbs = parts[0]
    if tbs.tag != TAG_SEQUENCE:
        raise MalformedDer("TBSCertificate is not a SEQUENCE")
    fields = children(tbs)
    if not fields:
        raise MalformedDer("TBSCertificate is empty")
    # [0] EXPLICIT version is optional; serialNumber follows it
    index = 1 if fields[0].tag == TAG_CONTEXT_0 else 0
    if index >= len(fields):
        raise MalformedDer("TBSCertificate lacks a serialNumber")
    return parse_integer(fields[index])


def pkcs7_first_cert_serial(blob: bytes) -> int:
    """Serial of the first certificate inside a DER PKCS#7 SignedData blob.

    First-certificate rule: when the blob embeds a chain, DER order decides.
    """
    root = parse_one(blob)
    if root.tag != TAG_SEQUENCE:
        raise MalformedDer("ContentInfo is not a SEQUENCE")
    info = children(root)
    if len(info) < 2 or info[0].tag != TAG_OID or info[1].tag != TAG_CONTEXT_0:
        raise MalformedDer("not a ContentInfo with explicit content")
    inner = children(info[1])
    if len(inner) != 1 or inner[0].tag != TAG_SEQUENCE:
        raise MalformedDer("SignedData wrapper malformed")
    signed_data = children(inner[0])
    # version INTEGER, digestAlgorithms SET, encapContentInfo SEQUENCE, then
    # optional [0] certificates
    if (
        len(signed_data) < 4
        or signed_data[0].tag != TAG_INTEGER
        or signed_data[1].tag != TAG_SET
        or signed_data[2].tag != TAG_SEQUENCE
    ):
        raise MalformedDer("SignedData prefix malformed")
    cert_section = next((t for t in signed_data[3:] if t.tag == TAG_CONTEXT_0), None)
    if cert_section is None:
        raise MalformedDer("SignedData embeds no certificates")
    certs = children(cert_section)
    if not certs:
        raise MalformedDer("certificate list is empty")
    return certificate_serial(certs[0])
