import pytest
from hypothesis import given, settings, strategies as st

from appgate.digest import keccak256
from appgate.registry import (
    AppRecord,
    EVENT_TOPIC,
    MalformedRecord,
    RepackVerdict,
    decode_record,
    encode_record,
    identity_topic,
)


def make_record(**overrides):
    base = dict(
        package_name="com.example.app",
        version="1.2.3",
        cert_serial=0x706A633E,
        origin_url="https://market.test/app/42",
        repack_verdict=RepackVerdict.PASS,
        content_id=bytes(range(32)),
    )
    base.update(overrides)
    return AppRecord(**base)


def test_encoding_layout_is_stable():
    record = make_record()
    blob = encode_record(record)
    pkg = b"com.example.app"
    assert blob[:2] == len(pkg).to_bytes(2, "big")
    assert blob[2 : 2 + len(pkg)] == pkg
    assert blob.endswith(bytes(range(32)))
    # verdict byte sits right before the 32-byte content id
    assert blob[-33] == 0x01


def test_decode_inverts_encode():
    record = make_record()
    assert decode_record(encode_record(record)) == record


def test_zero_serial_encodes_empty_field():
    record = make_record(cert_serial=0)
    assert decode_record(encode_record(record)).cert_serial == 0


def test_malformed_inputs_rejected():
    with pytest.raises(MalformedRecord):
        make_record(package_name="")
    with pytest.raises(MalformedRecord):
        make_record(version="")
    with pytest.raises(MalformedRecord):
        make_record(cert_serial=-5)
    with pytest.raises(MalformedRecord):
        make_record(content_id=b"short")
    blob = encode_record(make_record())
    with pytest.raises(MalformedRecord):
        decode_record(blob[:-1])  # truncated
    with pytest.raises(MalformedRecord):
        decode_record(blob + b"\x00")  # trailing byte
    bad_verdict = blob[:-33] + b"\x09" + blob[-32:]
    with pytest.raises(MalformedRecord):
        decode_record(bad_verdict)


def test_event_topic_is_digest_of_signature():
    assert EVENT_TOPIC == keccak256(b"AppStored(bytes)")


def test_identity_topic_separates_package_and_version():
    # the 0x00 separator keeps ("a", "bc") distinct from ("ab", "c")
    assert identity_topic("a", "bc") != identity_topic("ab", "c")
    assert identity_topic("a", "bc") == keccak256(b"a\x00bc")


text = st.text(min_size=1, max_size=60).filter(lambda s: s.strip())


@settings(max_examples=1000, deadline=None)
@given(
    package_name=text,
    version=text,
    cert_serial=st.integers(min_value=0, max_value=1 << 160),
    origin_url=st.text(max_size=200),
    repack_verdict=st.sampled_from(list(RepackVerdict)),
    content_id=st.binary(min_size=32, max_size=32),
)
def test_round_trip_property(
    package_name, version, cert_serial, origin_url, repack_verdict, content_id
):
    record = AppRecord(
        package_name, version, cert_serial, origin_url, repack_verdict, content_id
    )
    assert decode_record(encode_record(record)) == record
