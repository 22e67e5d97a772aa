import pytest

from appgate.digest import keccak256
from appgate.ledger import Address, Chain, GasSchedule, TxStatus
from appgate.registry import (
    AppRecord,
    AppRegistry,
    BatchTooLarge,
    DuplicateRecord,
    EVENT_TOPIC,
    EmptyBatch,
    MalformedRecord,
    NotOwner,
    NotWhitelisted,
    RegistryClient,
    RepackVerdict,
    ZeroValue,
    encode_record,
    find_record,
    identity_topic,
    store_calldata,
    stored_records,
)

OWNER = Address(b"\x0a" * 20)
SERVER = Address(b"\x0b" * 20)
OUTSIDER = Address(b"\x0c" * 20)
REGISTRY_ADDR = Address(b"\xcc" * 20)

ETHER = 10**18


def make_record(pkg="com.example.app", ver="1.0", url="https://m.test/a/1"):
    return AppRecord(
        package_name=pkg,
        version=ver,
        cert_serial=0x11AA,
        origin_url=url,
        repack_verdict=RepackVerdict.PASS,
        content_id=bytes(range(32)),
    )


@pytest.fixture
def setup():
    chain = Chain()
    chain.apply_genesis({OWNER: ETHER, SERVER: ETHER, OUTSIDER: ETHER})
    registry = AppRegistry(REGISTRY_ADDR, OWNER)
    owner_client = RegistryClient(chain, registry, OWNER)
    server_client = RegistryClient(chain, registry, SERVER)
    owner_client.whitelist_add(SERVER)
    return chain, registry, owner_client, server_client


def expected_store_gas(schedule: GasSchedule, blobs: list[bytes]) -> int:
    """Independent arithmetic: base + calldata + per-log costs."""
    calldata = store_calldata(blobs)
    zeros = calldata.count(0)
    calldata_cost = zeros * schedule.calldata_zero_byte + (
        len(calldata) - zeros
    ) * schedule.calldata_nonzero_byte
    log_cost = sum(
        schedule.log_base + 2 * schedule.log_topic + len(b) * schedule.log_data_byte
        for b in blobs
    )
    return schedule.tx_base + calldata_cost + log_cost


def test_store_app_emits_one_log_with_exact_gas(setup):
    chain, registry, _, server = setup
    record = make_record()
    receipt = server.store_app(record)
    assert receipt.status is TxStatus.SUCCESS
    assert len(receipt.logs) == 1
    assert receipt.gas_used == expected_store_gas(
        chain.schedule, [encode_record(record)]
    )
    assert receipt.gas_used < 100_000
    log = receipt.logs[0]
    assert log.topics[0] == EVENT_TOPIC
    assert log.topics[1] == identity_topic("com.example.app", "1.0")
    assert log.data == encode_record(record)
    # no contract storage word was written
    assert chain.storage.get(REGISTRY_ADDR, {}) == {
        k: v for k, v in chain.storage.get(REGISTRY_ADDR, {}).items()
    }
    assert all(k.startswith(b"W") for k in chain.storage.get(REGISTRY_ADDR, {}))


def test_non_whitelisted_store_reverts_without_log(setup):
    chain, registry, _, _ = setup
    outsider = RegistryClient(chain, registry, OUTSIDER)
    with pytest.raises(NotWhitelisted):
        outsider.store_app(make_record())
    assert stored_records(chain, REGISTRY_ADDR) == []


def test_same_record_twice_yields_two_logs(setup):
    chain, _, _, server = setup
    record = make_record()
    server.store_app(record)
    server.store_app(record)
    records = stored_records(chain, REGISTRY_ADDR)
    assert [r for _, r in records] == [record, record]


def test_batch_of_one_equals_single_gas_exactly(setup):
    chain, _, _, server = setup
    record = make_record()
    single = server.store_app(record)
    batch = server.store_app_batch([record])
    assert single.gas_used == batch.gas_used


def test_batch_emits_log_per_record(setup):
    chain, _, _, server = setup
    records = [make_record(ver=f"1.{i}") for i in range(10)]
    receipt = server.store_app_batch(records)
    assert len(receipt.logs) == 10
    assert receipt.gas_used == expected_store_gas(
        chain.schedule, [encode_record(r) for r in records]
    )


def test_batch_rejects_empty_and_oversized(setup):
    chain, _, _, server = setup
    with pytest.raises(EmptyBatch):
        server.store_app_batch([])
    with pytest.raises(BatchTooLarge):
        server.store_app_batch([make_record(ver=f"v{i}") for i in range(501)])


def test_batch_requires_whitelist(setup):
    chain, registry, _, _ = setup
    outsider = RegistryClient(chain, registry, OUTSIDER)
    with pytest.raises(NotWhitelisted):
        outsider.store_app_batch([make_record()])


def test_estimate_equals_actual_gas(setup):
    chain, registry, _, server = setup
    record = make_record()
    estimate = registry.store_app_estimate(record, chain.schedule)
    receipt = server.store_app(record)
    assert estimate == receipt.gas_used


def test_estimate_is_pure_and_needs_no_whitelist(setup):
    chain, registry, _, _ = setup
    record = make_record()
    before = chain.state_snapshot()
    first = registry.store_app_estimate(record, chain.schedule)
    second = registry.store_app_estimate(record, chain.schedule)
    assert first == second
    assert chain.state_snapshot() == before  # no state change, no gas


def test_estimate_rejects_unencodable_record(setup):
    chain, registry, _, _ = setup
    oversized = make_record(url="u" * 70_000)  # field length prefix is u16
    with pytest.raises(MalformedRecord):
        registry.store_app_estimate(oversized, chain.schedule)


def test_donation_credits_contract_balance(setup):
    chain, _, _, server = setup
    before = chain.balance(REGISTRY_ADDR)
    receipt = server.donate_gas_fee(100_000)
    assert chain.balance(REGISTRY_ADDR) == before + 100_000
    block_no, tx, stored = chain.receipt_by_tx_id(receipt.tx_id)
    assert tx.value == 100_000
    assert tx.sender == SERVER
    assert stored == receipt


def test_zero_donation_reverts(setup):
    chain, _, _, server = setup
    before = chain.balance(REGISTRY_ADDR)
    with pytest.raises(ZeroValue):
        server.donate_gas_fee(0)
    assert chain.balance(REGISTRY_ADDR) == before


def test_whitelist_lifecycle(setup):
    chain, registry, owner, _ = setup
    member = RegistryClient(chain, registry, OUTSIDER)
    with pytest.raises(NotWhitelisted):
        member.store_app(make_record())
    owner.whitelist_add(OUTSIDER)
    member.store_app(make_record())  # now allowed
    owner.whitelist_remove(OUTSIDER)
    with pytest.raises(NotWhitelisted):
        member.store_app(make_record(ver="2.0"))


def test_whitelist_add_is_idempotent(setup):
    chain, registry, owner, _ = setup
    owner.whitelist_add(OUTSIDER)
    owner.whitelist_add(OUTSIDER)
    assert registry.is_whitelisted(chain, OUTSIDER)


def test_non_owner_cannot_mutate_whitelist(setup):
    chain, registry, _, server = setup
    with pytest.raises(NotOwner):
        server.whitelist_add(OUTSIDER)
    with pytest.raises(NotOwner):
        server.whitelist_remove(SERVER)
    assert registry.is_whitelisted(chain, SERVER)


def test_baseline_gas_formula_and_excess(setup):
    chain, registry, _, server = setup
    record = make_record()
    blob = encode_record(record)
    baseline = server.store_app_baseline(record)
    schedule = chain.schedule
    words = (len(blob) + 31) // 32 + 1  # chunks + length bookkeeping word
    from appgate.registry import baseline_calldata

    calldata = baseline_calldata(blob)
    zeros = calldata.count(0)
    expected = (
        schedule.tx_base
        + zeros * schedule.calldata_zero_byte
        + (len(calldata) - zeros) * schedule.calldata_nonzero_byte
        + words * schedule.sstore_set
    )
    assert baseline.gas_used == expected
    log_path = server.store_app(record)
    assert baseline.gas_used > log_path.gas_used


def test_baseline_rejects_duplicate_identity(setup):
    chain, _, _, server = setup
    server.store_app_baseline(make_record())
    server.store_app_baseline(make_record(ver="9.9"))  # different version is fine
    with pytest.raises(DuplicateRecord):
        server.store_app_baseline(make_record())


def test_per_mechanism_ratio_is_53_and_a_third(setup):
    chain, _, _, _ = setup
    assert chain.schedule.sstore_set / chain.schedule.log_base == pytest.approx(
        53.333, abs=0.01
    )
    assert chain.schedule.sstore_set == 20_000
    assert chain.schedule.log_base == 375


def test_access_control_completeness(setup):
    """No mutating registry op succeeds for a non-whitelisted / non-owner caller."""
    chain, registry, _, _ = setup
    outsider = RegistryClient(chain, registry, OUTSIDER)
    record = make_record()
    before_records = stored_records(chain, REGISTRY_ADDR)
    before_storage = dict(chain.storage.get(REGISTRY_ADDR, {}))
    attempts = [
        (NotWhitelisted, lambda: outsider.store_app(record)),
        (NotWhitelisted, lambda: outsider.store_app_batch([record])),
        (NotWhitelisted, lambda: outsider.store_app_baseline(record)),
        (NotOwner, lambda: outsider.whitelist_add(OUTSIDER)),
        (NotOwner, lambda: outsider.whitelist_remove(SERVER)),
    ]
    for err, attempt in attempts:
        with pytest.raises(err):
            attempt()
    assert stored_records(chain, REGISTRY_ADDR) == before_records
    assert dict(chain.storage.get(REGISTRY_ADDR, {})) == before_storage


def test_reads_are_gas_free(setup):
    chain, registry, _, server = setup
    server.store_app(make_record())
    balances_before = dict(chain.balances)
    for _ in range(20):
        registry.store_app_estimate(make_record(ver="7.7"), chain.schedule)
        find_record(chain, REGISTRY_ADDR, "com.example.app", "1.0")
        stored_records(chain, REGISTRY_ADDR)
    assert dict(chain.balances) == balances_before


def test_find_record_by_identity(setup):
    chain, _, _, server = setup
    server.store_app(make_record())
    server.store_app(make_record(pkg="org.other", ver="3.1"))
    hit = find_record(chain, REGISTRY_ADDR, "org.other", "3.1")
    assert hit is not None and hit.package_name == "org.other"
    assert find_record(chain, REGISTRY_ADDR, "org.other", "9.9") is None


def test_malformed_blob_reverts_on_chain(setup):
    chain, registry, _, _ = setup
    from appgate.ledger import Reverted, Transaction

    bad = store_calldata([b"\x00\x05junk"])
    tx = Transaction(SERVER, REGISTRY_ADDR, 0, bad, chain.nonce(SERVER))
    with pytest.raises(Reverted) as info:
        chain.submit(tx, registry)
    assert "MalformedRecord" in info.value.reason
    assert stored_records(chain, REGISTRY_ADDR) == []
