from .apk import (
    ApkError,
    ApkSummary,
    MANIFEST_ENTRY,
    MissingManifest,
    MissingSignature,
    NotAZip,
    parse_apk,
)
from .der import MalformedDer, pkcs7_first_cert_serial
from .serialdb import SerialDb, build_serial_db, repack_check

__all__ = [
    "ApkError",
    "ApkSummary",
    "MANIFEST_ENTRY",
    "MalformedDer",
    "MissingManifest",
    "MissingSignature",
    "NotAZip",
    "SerialDb",
    "build_serial_db",
    "parse_apk",
    "pkcs7_first_cert_serial",
    "repack_check",
]
