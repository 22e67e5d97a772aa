"""APK container parsing: package identity + signing-certificate serial.

The archive layout expected here is documented in FORMATS.md: a cleartext
``manifest.properties`` entry (``package=...``, ``versionName=...``) plus
exactly one signature block under META-INF/ with suffix .RSA, .DSA, or .EC
holding a DER PKCS#7 blob.  Binary manifest decoding is an extension point,
not a dependency of the serial-comparison mechanism.
"""

from __future__ import annotations

import io
import zipfile
from dataclasses import dataclass

from .der import MalformedDer, pkcs7_first_cert_serial

MANIFEST_ENTRY = "manifest.properties"
SIGNATURE_SUFFIXES = (".RSA", ".DSA", ".EC")


class ApkError(Exception):
    pass


class NotAZip(ApkError):
    pass


class MissingManifest(ApkError):
    pass


class MissingSignature(ApkError):
    pass


@dataclass(frozen=True)
class ApkSummary:
    package_name: str
    version_name: str
    cert_serial: int


def _signature_entries(names: list[str]) -> list[str]:
    return [
        n
        for n in names
        if n.startswith("META-INF/") and n.upper().endswith(SIGNATURE_SUFFIXES)
    ]


def parse_apk(data: bytes) -> ApkSummary:
    """Extract (package, versionName, certSerial) from the archive itself.

    Raises NotAZip, MissingManifest, MissingSignature, or MalformedDer; any
    malformed input maps to one of those, never an unhandled crash.
    """
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
        names = archive.namelist()
    except Exception as exc:
        raise NotAZip(f"not a readable archive: {exc}") from exc

    if MANIFEST_ENTRY not in names:
        raise MissingManifest(f"archive lacks {MANIFEST_ENTRY}")
    try:
        manifest_raw = archive.read(MANIFEST_ENTRY)
    except Exception as exc:
        raise NotAZip(f"manifest entry unreadable: {exc}") from exc
    fields = _parse_manifest(manifest_raw)

    signatures = _signature_entries(names)
    if len(signatures) != 1:
        raise MissingSignature(
            f"expected exactly one signature block, found {len(signatures)}"
        )
    try:
        sig_blob = archive.read(signatures[0])
    except Exception as exc:
        raise NotAZip(f"signature entry unreadable: {exc}") from exc
    serial = pkcs7_first_cert_serial(sig_blob)

    return ApkSummary(fields["package"], fields["versionName"], serial)


def _parse_manifest(raw: bytes) -> dict[str, str]:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MissingManifest("manifest is not UTF-8 text") from exc
    fields: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if sep:
            fields[key.strip()] = value.strip()
    for required in ("package", "versionName"):
        if not fields.get(required):
            raise MissingManifest(f"manifest lacks {required!r}")
    return fields
