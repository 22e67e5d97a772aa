import random
import zipfile
import io

import pytest
from cryptography.hazmat.primitives.serialization import pkcs7 as lib_pkcs7

from appgate.apkcheck import (
    ApkError,
    MalformedDer,
    MissingManifest,
    MissingSignature,
    NotAZip,
    SerialDb,
    build_serial_db,
    parse_apk,
    pkcs7_first_cert_serial,
    repack_check,
)
from appgate.apkcheck.apk import ApkSummary
from appgate.apkcheck.fixtures import (
    build_apk,
    build_repack_corpus,
    make_signer,
    signature_blob,
)
from appgate.registry import RepackVerdict


@pytest.fixture(scope="module")
def signer():
    return make_signer(0x706A633E)


@pytest.fixture(scope="module")
def other_signer():
    return make_signer(0x22)


@pytest.fixture(scope="module")
def fixture_apk(signer):
    return build_apk("com.example.a", "1.2", signer)


def test_extracts_fields_from_archive(fixture_apk):
    summary = parse_apk(fixture_apk)
    assert summary.package_name == "com.example.a"
    assert summary.version_name == "1.2"
    assert summary.cert_serial == 0x706A633E


def test_serial_matches_independent_library(fixture_apk, signer):
    # oracle: the library that built the blob reports the same serial
    with zipfile.ZipFile(io.BytesIO(fixture_apk)) as zf:
        blob = zf.read("META-INF/CERT.EC")
    certs = lib_pkcs7.load_der_pkcs7_certificates(blob)
    assert certs[0].serial_number == 0x706A633E
    assert pkcs7_first_cert_serial(blob) == certs[0].serial_number


def test_parsing_is_deterministic(fixture_apk):
    assert parse_apk(fixture_apk) == parse_apk(fixture_apk)


def test_resigning_changes_serial_only(signer, other_signer):
    a = parse_apk(build_apk("com.example.a", "1.2", signer))
    b = parse_apk(build_apk("com.example.a", "1.2", other_signer))
    assert (a.package_name, a.version_name) == (b.package_name, b.version_name)
    assert a.cert_serial != b.cert_serial


def test_not_a_zip():
    with pytest.raises(NotAZip):
        parse_apk(b"this is not an archive")


def test_missing_manifest(signer):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        zf.writestr("META-INF/CERT.EC", signature_blob(signer, b"x"))
    with pytest.raises(MissingManifest):
        parse_apk(buf.getvalue())


def test_manifest_without_package_key(signer):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        zf.writestr("manifest.properties", "versionName=1.0\n")
        zf.writestr("META-INF/CERT.EC", signature_blob(signer, b"x"))
    with pytest.raises(MissingManifest):
        parse_apk(buf.getvalue())


def test_missing_or_ambiguous_signature(signer):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        zf.writestr("manifest.properties", "package=a.b\nversionName=1\n")
    with pytest.raises(MissingSignature):
        parse_apk(buf.getvalue())

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        zf.writestr("manifest.properties", "package=a.b\nversionName=1\n")
        zf.writestr("META-INF/A.RSA", signature_blob(signer, b"x"))
        zf.writestr("META-INF/B.EC", signature_blob(signer, b"x"))
    with pytest.raises(MissingSignature):
        parse_apk(buf.getvalue())


def test_truncated_der_is_malformed(signer):
    blob = signature_blob(signer, b"data")
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        zf.writestr("manifest.properties", "package=a.b\nversionName=1\n")
        zf.writestr("META-INF/CERT.EC", blob[: len(blob) // 2])
    with pytest.raises(MalformedDer):
        parse_apk(buf.getvalue())


def test_fuzzed_archives_fail_typed(fixture_apk):
    """Mutated archives never crash: typed errors or a successful parse."""
    rng = random.Random(31337)
    base = bytearray(fixture_apk)
    for _ in range(10_000):
        mutated = bytearray(base)
        for _ in range(rng.randint(1, 4)):
            mutated[rng.randrange(len(mutated))] = rng.randrange(256)
        try:
            parse_apk(bytes(mutated))
        except (ApkError, MalformedDer):
            pass


# -- serial db / repack verdicts ----------------------------------------------


def test_repack_check_verdicts():
    db = SerialDb({"com.x": {0x11}})
    assert repack_check(ApkSummary("com.x", "1", 0x11), db) is RepackVerdict.PASS
    assert repack_check(ApkSummary("com.x", "1", 0x22), db) is RepackVerdict.FAIL
    assert repack_check(ApkSummary("com.y", "1", 0x11), db) is RepackVerdict.UNCHECKED


def test_build_serial_db_unions_release_keys(signer, other_signer):
    apks = [
        build_apk("com.x", "1.0", signer),
        build_apk("com.x", "2.0", other_signer),
    ]
    db = build_serial_db(apks)
    assert db.serials_for("com.x") == {signer.serial, other_signer.serial}


def test_build_serial_db_empty():
    assert len(build_serial_db([])) == 0


def test_build_serial_db_reports_offending_index(signer):
    with pytest.raises(NotAZip) as info:
        build_serial_db([build_apk("a.b", "1", signer), b"junk"])
    assert "#1" in str(info.value)


def test_serial_db_round_trip(tmp_path, signer, other_signer):
    db = SerialDb()
    db.add("com.x", signer.serial)
    db.add("com.x", other_signer.serial)
    db.add("org.y", 0x99)
    path = tmp_path / "serials.tsv"
    db.save(path)
    loaded = SerialDb.load(path)
    assert loaded.entries == db.entries
    SerialDb.append_entry(path, "net.z", 0xAB)
    assert SerialDb.load(path).serials_for("net.z") == {0xAB}


def test_corpus_catches_every_repack():
    originals, repacks = build_repack_corpus(40)
    db = build_serial_db(originals)
    for data in originals:
        assert repack_check(parse_apk(data), db) is RepackVerdict.PASS
    for data in repacks:
        assert repack_check(parse_apk(data), db) is RepackVerdict.FAIL
