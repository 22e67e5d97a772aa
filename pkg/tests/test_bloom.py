import random

from hypothesis import given, settings, strategies as st

from appgate.ledger import BLOOM_BITS, Bloom2048


def test_membership_after_insert():
    bloom = Bloom2048()
    bloom.insert(b"hello world")
    assert bloom.query(b"hello world")


def test_empty_filter_rejects_everything():
    bloom = Bloom2048()
    assert not bloom.query(b"anything")
    assert not bloom.query(b"")


def test_insert_is_monotone():
    rng = random.Random(7)
    bloom = Bloom2048()
    previous = 0
    for _ in range(200):
        bloom.insert(rng.randbytes(16))
        assert bloom.bits & previous == previous
        previous = bloom.bits


def test_no_false_negatives_randomized():
    rng = random.Random(42)
    bloom = Bloom2048()
    values = [rng.randbytes(rng.randint(1, 64)) for _ in range(1000)]
    for v in values:
        bloom.insert(v)
    assert all(bloom.query(v) for v in values)


def test_sparse_false_positive_rate():
    # <=16 distinct values inserted; FP rate against 10,000 absent values < 5%
    rng = random.Random(1234)
    bloom = Bloom2048()
    inserted = {rng.randbytes(20) for _ in range(16)}
    for v in inserted:
        bloom.insert(v)
    false_positives = 0
    probes = 10_000
    for _ in range(probes):
        probe = rng.randbytes(24)
        if probe not in inserted and bloom.query(probe):
            false_positives += 1
    assert false_positives / probes < 0.05


def test_round_trip_bytes():
    bloom = Bloom2048()
    bloom.insert(b"x")
    raw = bloom.to_bytes()
    assert len(raw) == BLOOM_BITS // 8
    assert Bloom2048.from_bytes(raw) == bloom


@settings(max_examples=300, deadline=None)
@given(st.lists(st.binary(min_size=0, max_size=64), max_size=40))
def test_no_false_negatives_property(values):
    bloom = Bloom2048()
    for v in values:
        bloom.insert(v)
    assert all(bloom.query(v) for v in values)
