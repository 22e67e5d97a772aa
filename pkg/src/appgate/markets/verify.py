"""Checksum verification and the admission verdict for retrieved apps.

The MD5 comparison authenticates page-to-download consistency only (the
upstream pages declare MD5); it is never content trust.  Repackaging trust is
the certificate-serial check, which runs separately.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import Enum

from .patterns import (
    HttpsRewrite,
    InDownloadUrl,
    InScriptBlock,
    MarketError,
    MarketPattern,
    NoChecksum,
    extract_script_value,
)

_MD5_TOKEN = re.compile(r"(?<![0-9a-fA-F])[0-9a-fA-F]{32}(?![0-9a-fA-F])")


class ChecksumSourceMissing(MarketError):
    """The declared checksum source yielded nothing usable."""


class VerdictChannel(Enum):
    HTTPS_DIRECT = "httpsDirect"
    CHECKSUM_VERIFIED = "checksumVerified"
    HTTPS_REWRITTEN = "httpsRewritten"
    KNOWN_APP_MATCH = "knownAppMatch"
    KNOWN_DEVELOPER_MATCH = "knownDeveloperMatch"
    UNVERIFIED_WARNING = "unverifiedWarning"
    REJECTED = "rejected"


@dataclass(frozen=True)
class SecurityVerdict:
    channel: VerdictChannel
    detail: str

    @property
    def rejected(self) -> bool:
        return self.channel is VerdictChannel.REJECTED

    @property
    def warning(self) -> bool:
        return self.channel is VerdictChannel.UNVERIFIED_WARNING


@dataclass(frozen=True)
class RetrievedApp:
    data: bytes
    origin_page_url: str
    download_url: str
    declared_checksum: str | None
    transport_secure: bool

    def __post_init__(self) -> None:
        if not self.data:
            raise ValueError("retrieved app bytes must be non-empty")


def extract_checksum(
    pattern: MarketPattern, page_html: bytes, download_url: str
) -> str | None:
    """Lowercase 32-hex declared checksum, or None when the market has none."""
    source = pattern.checksum_source
    if isinstance(source, NoChecksum):
        return None
    if isinstance(source, InDownloadUrl):
        match = _MD5_TOKEN.search(download_url)
        if match is None:
            raise ChecksumSourceMissing(
                f"{pattern.market_id}: no 32-hex token in download URL"
            )
        return match.group(0).lower()
    if isinstance(source, InScriptBlock):
        value = extract_script_value(page_html, source.key)
        if value is None or _MD5_TOKEN.fullmatch(value) is None:
            raise ChecksumSourceMissing(
                f"{pattern.market_id}: script key {source.key!r} missing or malformed"
            )
        return value.lower()
    raise ChecksumSourceMissing(f"unhandled source {source!r}")


def verify_checksum(app: RetrievedApp) -> SecurityVerdict:
    """Compare the declared checksum against the retrieved bytes."""
    if app.declared_checksum is None:
        raise ValueError("verify_checksum needs a declared checksum")
    computed = hashlib.md5(app.data).hexdigest()
    if computed == app.declared_checksum:
        return SecurityVerdict(
            VerdictChannel.CHECKSUM_VERIFIED, f"md5 {computed} matches page"
        )
    return SecurityVerdict(
        VerdictChannel.REJECTED,
        f"checksum mismatch: declared {app.declared_checksum}, computed {computed}",
    )


def fallback_verify(
    app: RetrievedApp,
    known_apps: set[bytes],
    known_developer_serials: set[int],
    cert_serial: int,
) -> SecurityVerdict:
    """No-checksum path: known-app digest, then known-developer serial,
    else admit with a persisted warning."""
    digest = hashlib.sha256(app.data).digest()
    if digest in known_apps:
        return SecurityVerdict(
            VerdictChannel.KNOWN_APP_MATCH,
            f"sha256 {digest.hex()} found in known-app repository",
        )
    if cert_serial in known_developer_serials:
        return SecurityVerdict(
            VerdictChannel.KNOWN_DEVELOPER_MATCH,
            f"certificate serial 0x{cert_serial:x} belongs to a known developer",
        )
    return SecurityVerdict(
        VerdictChannel.UNVERIFIED_WARNING,
        "no checksum, unknown app and developer; retrieval not verifiable",
    )


def classify_retrieval(
    app: RetrievedApp,
    pattern: MarketPattern,
    cert_serial: int,
    known_apps: set[bytes],
    known_developer_serials: set[int],
) -> SecurityVerdict:
    """Total mapping from (transport, checksum, fallback) to one channel.

    A declared checksum that contradicts the bytes rejects unconditionally,
    even over secure transport (strictly stronger than transport trust).
    """
    if app.declared_checksum is not None:
        verdict = verify_checksum(app)
        if verdict.rejected:
            return verdict
        checksum_ok = True
    else:
        checksum_ok = False

    if isinstance(pattern.download_rule, HttpsRewrite) and app.transport_secure:
        return SecurityVerdict(
            VerdictChannel.HTTPS_REWRITTEN,
            f"download URL upgraded to {app.download_url}",
        )
    if pattern.transport_secure and app.transport_secure:
        detail = "retrieved over TLS"
        if checksum_ok:
            detail += "; declared checksum also verified"
        return SecurityVerdict(VerdictChannel.HTTPS_DIRECT, detail)
    if checksum_ok:
        return verify_checksum(app)
    return fallback_verify(app, known_apps, known_developer_serials, cert_serial)
