import json

import pytest

from appgate.apkcheck.cli import main as apkcheck_main
from appgate.apkcheck.fixtures import build_apk, make_signer
from appgate.gateway import GatewayConfig
from appgate.gateway.cli import main as appgate_main
from appgate.markets.cli import main as market_main


@pytest.fixture
def config_path(market_fixture, tmp_path):
    config = GatewayConfig(
        data_dir=tmp_path / "data",
        markets_registry=market_fixture.registry_path,
        ca_bundle=market_fixture.ca_bundle,
        known_apps=market_fixture.known_apps_path,
        known_dev_serials=market_fixture.known_dev_serials_path,
        serial_db=tmp_path / "serials.tsv",
    )
    (tmp_path / "serials.tsv").write_text(
        market_fixture.serial_db_path.read_text()
    )
    path = tmp_path / "appgate.json"
    config.save(path)
    return str(path)


def run(argv, capsys):
    code = appgate_main(argv)
    out = capsys.readouterr().out
    return code, out


def test_init_writes_config(tmp_path, capsys):
    path = tmp_path / "new.json"
    code, out = run(["--config", str(path), "init", "--data-dir", str(tmp_path / "d")], capsys)
    assert code == 0 and path.exists()
    doc = json.loads(path.read_text())
    assert "gasPrice" in doc and "castore" in doc


def test_upload_download_estimate_flow(config_path, market_fixture, capsys, tmp_path):
    url = market_fixture.page_url("anchor-md5")
    code, out = run(["--config", config_path, "estimate", url], capsys)
    assert code == 0
    assert json.loads(out)["gas"] > 21_000

    code, out = run(["--config", config_path, "upload", url], capsys)
    assert code == 0
    body = json.loads(out)
    assert body["repackVerdict"] == "pass"

    target = tmp_path / "fetched.apk"
    code, out = run(
        ["--config", config_path, "download", body["packageName"],
         body["versionName"], "-o", str(target)],
        capsys,
    )
    assert code == 0 and target.exists()


def test_sync_and_refresh(config_path, market_fixture, capsys):
    url = market_fixture.page_url("button-md5")
    run(["--config", config_path, "upload", url], capsys)
    code, out = run(["--config", config_path, "sync"], capsys)
    assert code == 0 and "newly pinned" in out
    code, out = run(["--config", config_path, "refresh"], capsys)
    assert code == 0 and "refresh cycle complete" in out


def test_whitelist_commands(config_path, capsys):
    code, out = run(
        ["--config", config_path, "whitelist", "add", "0x" + "22" * 20], capsys
    )
    assert code == 0
    code, out = run(
        ["--config", config_path, "whitelist", "remove", "0x" + "22" * 20], capsys
    )
    assert code == 0


def test_donate_prints_tx_id(config_path, capsys):
    code, out = run(["--config", config_path, "donate", "123456"], capsys)
    assert code == 0
    assert json.loads(out)["txId"].startswith("0x")


def test_serialdb_import(config_path, tmp_path, capsys):
    signer = make_signer(0x5151)
    apk_dir = tmp_path / "official"
    apk_dir.mkdir()
    (apk_dir / "one.apk").write_bytes(build_apk("com.imported.app", "1.0", signer))
    code, out = run(
        ["--config", config_path, "serialdb", "import", str(apk_dir)], capsys
    )
    assert code == 0 and "1 packages" in out


def test_bench_gas_json(capsys):
    code, out = run(["bench", "gas"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["mechanism_ratio"] == pytest.approx(53.333, abs=0.01)


def test_bench_timing(config_path, market_fixture, capsys):
    urls = market_fixture.bulk_page_urls(3)
    code, out = run(["--config", config_path, "bench", "timing", *urls], capsys)
    assert code == 0
    report = json.loads(out)
    assert len(report["runs"]) == 3


def test_market_connect_cli(market_fixture, capsys):
    code = market_main(
        [
            "test",
            market_fixture.page_url("anchor-md5"),
            "--registry",
            str(market_fixture.registry_path),
            "--ca-bundle",
            str(market_fixture.ca_bundle),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "checksumVerified" in out


def test_market_connect_cli_rejects_tampered(market_fixture, capsys):
    code = market_main(
        [
            "test",
            market_fixture.page_url("mitm-tampered"),
            "--registry",
            str(market_fixture.registry_path),
            "--ca-bundle",
            str(market_fixture.ca_bundle),
        ]
    )
    assert code == 2


def test_apkcheck_inspect_cli(tmp_path, capsys):
    signer = make_signer(0x706A633E)
    path = tmp_path / "a.apk"
    path.write_bytes(build_apk("com.cli.app", "3.1", signer))
    code = apkcheck_main(["inspect", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "com.cli.app" in out and "0x706a633e" in out


def test_apkcheck_inspect_reports_errors(tmp_path, capsys):
    path = tmp_path / "junk.apk"
    path.write_bytes(b"not an archive")
    code = apkcheck_main(["inspect", str(path)])
    err = capsys.readouterr().err
    assert code == 1 and "NotAZip" in err
