import hashlib
import threading

import pytest

from appgate.castore import ContentId, NotFound
from appgate.gateway import (
    AppGateway,
    Duplicate,
    GatewayConfig,
    NotOnChain,
    RetrievalFailed,
    SecurityRejected,
    UnknownMarket,
)
from appgate.markets.fixtures import MITM_DECLARED_MD5
from appgate.registry import RepackVerdict, stored_records


@pytest.fixture
def gateway(market_fixture, tmp_path):
    config = GatewayConfig(
        data_dir=tmp_path / "data",
        markets_registry=market_fixture.registry_path,
        ca_bundle=market_fixture.ca_bundle,
        known_apps=market_fixture.known_apps_path,
        known_dev_serials=market_fixture.known_dev_serials_path,
        serial_db=market_fixture.serial_db_path,
        gateways=[
            {"name": "gw-slow", "endpoint": "https://gw-slow.test", "rtt": 0.8},
            {"name": "gw-fast", "endpoint": "https://gw-fast.test", "rtt": 0.05},
        ],
    )
    gw = AppGateway(config)
    yield gw
    gw.close()


def full_snapshot(gw: AppGateway):
    return (
        gw.chain.state_snapshot(),
        gw.chain.head,
        tuple(sorted(c.digest for c in gw.server_node.blobs)),
        tuple(sorted((k, tuple(sorted(v))) for k, v in gw.serial_db.entries.items())),
        frozenset(gw.fees._used),
        frozenset(gw.fees._claimed),
    )


def test_happy_path_upload(gateway, market_fixture):
    expectation = market_fixture.expectations["anchor-md5"]
    result = gateway.upload(expectation.page_url)
    assert result.package_name == expectation.package
    assert result.version_name == "1.0"
    assert result.verdict.channel.value == "checksumVerified"
    assert result.repack_verdict is RepackVerdict.PASS
    assert result.tx_id  # pending tx id returned immediately
    # the app is now fetchable by content id from the consortium
    data = gateway.network.retrieve(result.content_id)
    assert ContentId.for_bytes(data) == result.content_id
    # and indexed on chain
    record = gateway.get_app(expectation.package, "1.0")
    assert record is not None
    assert record.content_id == result.content_id.digest


def test_second_upload_is_duplicate(gateway, market_fixture):
    url = market_fixture.page_url("anchor-md5")
    gateway.upload(url)
    before = full_snapshot(gateway)
    with pytest.raises(Duplicate):
        gateway.upload(url)
    assert full_snapshot(gateway) == before


def test_mitm_rejected_with_zero_side_effects(gateway, market_fixture):
    before = full_snapshot(gateway)
    with pytest.raises(SecurityRejected) as info:
        gateway.upload(market_fixture.page_url("mitm-tampered"))
    detail = info.value.verdict.detail
    assert MITM_DECLARED_MD5 in detail  # declared value from the page
    assert "checksum mismatch" in detail
    assert full_snapshot(gateway) == before


def test_unknown_market_rejected(gateway):
    before = full_snapshot(gateway)
    with pytest.raises(UnknownMarket):
        gateway.upload("http://nobody.example/app.html")
    assert full_snapshot(gateway) == before


def test_retrieval_failure_is_clean(gateway, market_fixture):
    # registered pattern, missing page -> retrieval fails, nothing stored
    before = full_snapshot(gateway)
    with pytest.raises(RetrievalFailed):
        gateway.upload(f"{market_fixture.http_base}/bulk/app-999.html")
    assert full_snapshot(gateway) == before


def test_repack_fail_is_recorded_not_rejected(gateway, market_fixture):
    result = gateway.upload(market_fixture.page_url("repacked-app"))
    assert result.repack_verdict is RepackVerdict.FAIL
    record = gateway.get_app(result.package_name, result.version_name)
    assert record.repack_verdict is RepackVerdict.FAIL


def test_unverified_warning_flag_persisted(gateway, market_fixture):
    url = market_fixture.page_url("no-checksum-unknown")
    result = gateway.upload(url)
    assert result.verdict.warning
    record = gateway.get_app(result.package_name, result.version_name)
    assert record.origin_url.endswith("#unverified-transport")
    assert record.origin_url.startswith(url)


def test_fallback_channels_from_fixtures(gateway, market_fixture):
    known_app = gateway.upload(market_fixture.page_url("no-checksum-known-app"))
    assert known_app.verdict.channel.value == "knownAppMatch"
    known_dev = gateway.upload(market_fixture.page_url("no-checksum-known-dev"))
    assert known_dev.verdict.channel.value == "knownDeveloperMatch"


def test_https_paths(gateway, market_fixture):
    secure = gateway.upload(market_fixture.page_url("secure-direct"))
    assert secure.verdict.channel.value == "httpsDirect"
    rewritten = gateway.upload(market_fixture.page_url("https-upgrade"))
    assert rewritten.verdict.channel.value == "httpsRewritten"
    custom = gateway.upload(market_fixture.page_url("codehost"))
    assert custom.verdict.channel.value == "httpsDirect"


def test_estimate_upper_bounds_actual(gateway, market_fixture):
    url = market_fixture.page_url("anchor-md5")
    gas, fee = gateway.estimate_fee(url)
    assert gateway.estimate_fee(url) == (gas, fee)  # identical requests agree
    result = gateway.upload(url)
    _, tx, receipt = gateway.chain.receipt_by_tx_id(result.tx_id)
    assert gas >= receipt.gas_used
    assert fee == gas * gateway.chain.gas_price


def test_download_round_trip(gateway, market_fixture):
    uploaded = gateway.upload(market_fixture.page_url("anchor-md5"))
    cid, data, served_by = gateway.download(
        uploaded.package_name, uploaded.version_name
    )
    assert cid == uploaded.content_id
    assert ContentId.for_bytes(data) == cid
    assert served_by.name == "gw-fast"  # lowest RTT gateway wins


def test_download_unknown_app(gateway):
    with pytest.raises(NotOnChain):
        gateway.download("com.never.uploaded", "9.9")


def test_hundred_downloads_change_nothing(gateway, market_fixture):
    uploaded = gateway.upload(market_fixture.page_url("anchor-md5"))
    snapshot = gateway.chain.state_snapshot()
    head = gateway.chain.head
    for _ in range(100):
        gateway.download(uploaded.package_name, uploaded.version_name)
    assert gateway.chain.state_snapshot() == snapshot
    assert gateway.chain.head == head


def test_duplicate_offload_linearizes_concurrent_uploads(gateway, market_fixture):
    url = market_fixture.page_url("button-md5")
    outcomes = []

    def attempt():
        try:
            gateway.upload(url)
            outcomes.append("stored")
        except Duplicate:
            outcomes.append("duplicate")

    threads = [threading.Thread(target=attempt) for _ in range(20)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert outcomes.count("stored") == 1
    assert outcomes.count("duplicate") == 19
    expectation = market_fixture.expectations["button-md5"]
    records = [
        r
        for _, r in stored_records(gateway.chain, gateway.config.registry_addr)
        if r.package_name == expectation.package
    ]
    assert len(records) == 1


def test_consortium_sync_pins_all_chain_content(gateway, market_fixture):
    for market_id in ("anchor-md5", "button-md5", "script-md5"):
        gateway.upload(market_fixture.page_url(market_id))
    outcomes = gateway.sync_pinner()
    assert sorted(outcomes.values()) == ["pinned", "pinned", "pinned"]
    # second run is idempotent
    again = gateway.sync_pinner()
    assert set(again.values()) == {"already-pinned"}
    # with the server node dark, the pinner still serves every app
    gateway.server_node.online = False
    for _, record in stored_records(gateway.chain, gateway.config.registry_addr):
        assert gateway.network.retrieve(ContentId(record.content_id))
    gateway.server_node.online = True


def test_refresh_cycle_tracks_uploads(gateway, market_fixture):
    uploaded = gateway.upload(market_fixture.page_url("anchor-md5"))
    gateway.run_refresh_cycle()
    for node in gateway._sim_gateways.values():
        assert node.holds(uploaded.content_id, gateway.network.clock.now())
    gateway.server_node.online = False
    cid, data, _ = gateway.download(uploaded.package_name, uploaded.version_name)
    assert cid == uploaded.content_id


def test_download_integrity_guard(gateway, market_fixture):
    uploaded = gateway.upload(market_fixture.page_url("anchor-md5"))
    gateway.server_node.corrupt(uploaded.content_id)
    from appgate.castore import IntegrityMismatch

    with pytest.raises(IntegrityMismatch):
        gateway.download(uploaded.package_name, uploaded.version_name)


def test_timing_report_phases_sum_to_total(gateway, market_fixture):
    from appgate.gateway import run_timing_bench

    report = run_timing_bench(gateway, market_fixture.bulk_page_urls(20))
    assert len(report.runs) == 20
    for run in report.runs:
        phase_sum = sum(run[p] for p in report.PHASES)
        assert phase_sum == pytest.approx(run["total"], rel=0.05)
    averages = report.averages()
    assert set(averages) == set(report.PHASES) | {"total"}
    assert report.overhead_percent() > 0
    payload = report.to_dict()
    assert "chain_submit excluded" in payload["note"]


def test_verdict_persistence_on_reparse(gateway, market_fixture):
    """The on-chain repack verdict equals a fresh check over the same bytes."""
    from appgate.apkcheck import parse_apk, repack_check

    for market_id in ("anchor-md5", "repacked-app", "no-checksum-unknown"):
        result = gateway.upload(market_fixture.page_url(market_id))
        record = gateway.get_app(result.package_name, result.version_name)
        _, data, _ = gateway.download(result.package_name, result.version_name)
        recomputed = repack_check(parse_apk(data), gateway.serial_db)
        assert record.repack_verdict is recomputed


def test_ui_download_path_is_read_only_on_server_log(gateway, market_fixture):
    """Drive the endpoints the browser uses for a download; the server's
    access log must show only GET/HEAD requests."""
    from fastapi.testclient import TestClient

    from appgate.gateway.api import create_api

    uploaded = gateway.upload(market_fixture.page_url("anchor-md5"))
    with TestClient(create_api(gateway)) as client:
        gateway.access_log.clear()
        app = client.get(
            f"/api/apps/{uploaded.package_name}/{uploaded.version_name}"
        ).json()
        client.get("/api/gateways")
        client.head(f"/ipfs/{app['contentId']}")
        client.get(f"/ipfs/{app['contentId']}")
        client.get(f"/api/download/{uploaded.package_name}/{uploaded.version_name}")
    assert gateway.access_log  # something was recorded
    assert all(method in ("GET", "HEAD") for method, _ in gateway.access_log)


def test_chain_state_persists_across_restart(gateway, market_fixture, tmp_path):
    url = market_fixture.page_url("anchor-md5")
    result = gateway.upload(url)
    snapshot = gateway.chain.state_snapshot()
    gateway.close()

    reopened = AppGateway(gateway.config)
    try:
        assert reopened.chain.state_snapshot() == snapshot
        record = reopened.get_app(result.package_name, result.version_name)
        assert record is not None
        with pytest.raises(Duplicate):
            reopened.upload(url)
    finally:
        reopened.close()
