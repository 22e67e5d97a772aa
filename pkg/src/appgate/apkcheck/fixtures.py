"""Signed fixture archives for tests, demos, and corpus generation.

Real signing material (EC keys, self-signed X.509 certs with chosen serials,
DER PKCS#7 signature blobs) so the DER walk is exercised against blobs built
by an independent library.
"""

from __future__ import annotations

import datetime
import io
import random
import zipfile
from dataclasses import dataclass

from cryptography import x509
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.serialization import pkcs7
from cryptography.x509.oid import NameOID

from .apk import MANIFEST_ENTRY


@dataclass
class Signer:
    serial: int
    key: ec.EllipticCurvePrivateKey
    cert: x509.Certificate


def make_signer(serial: int, common_name: str = "fixture signer") -> Signer:
    key = ec.generate_private_key(ec.SECP256R1())
    name = x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, common_name)])
    cert = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(serial)
        .not_valid_before(datetime.datetime(2020, 1, 1))
        .not_valid_after(datetime.datetime(2045, 1, 1))
        .sign(key, hashes.SHA256())
    )
    return Signer(serial, key, cert)


def signature_blob(signer: Signer, signed_bytes: bytes) -> bytes:
    return (
        pkcs7.PKCS7SignatureBuilder()
        .set_data(signed_bytes)
        .add_signer(signer.cert, signer.key, hashes.SHA256())
        .sign(serialization.Encoding.DER, [])
    )


def build_apk(
    package_name: str,
    version_name: str,
    signer: Signer,
    payload: bytes = b"\x00dex-filler\x00",
    signature_entry: str = "META-INF/CERT.EC",
) -> bytes:
    manifest = f"package={package_name}\nversionName={version_name}\n".encode()
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr(MANIFEST_ENTRY, manifest)
        zf.writestr("classes.dex", payload)
        zf.writestr(signature_entry, signature_blob(signer, manifest))
    return buf.getvalue()


def build_repack_corpus(
    pair_count: int,
    seed: int = 101,
    official_signer: Signer | None = None,
    repack_signer: Signer | None = None,
) -> tuple[list[bytes], list[bytes]]:
    """(originals, repacks): same packages, two different signing keys."""
    rng = random.Random(seed)
    official = official_signer or make_signer(0x706A633E, "official release key")
    repack = repack_signer or make_signer(0xDEADBEA7, "repackager key")
    originals, repacks = [], []
    for i in range(pair_count):
        package = f"com.corpus.app{i:05d}"
        version = f"{rng.randint(1, 9)}.{rng.randint(0, 99)}"
        originals.append(build_apk(package, version, official))
        repacks.append(
            build_apk(package, version, repack, payload=b"\x00trojaned\x00")
        )
    return originals, repacks
