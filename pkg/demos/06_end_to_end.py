#!/usr/bin/env python3
"""The whole gateway: delegated upload, fee ticket, download, consortium sync.

Wires the ledger, registry contract, consortium store, fixture markets, and
the fee protocol together the way the server runs them, then walks one app
through upload and download, including what happens on a second (duplicate)
upload and when the paying ticket is replayed.
"""

import tempfile
from pathlib import Path

from appgate.gateway import AppGateway, Duplicate, FeeRejected, GatewayConfig
from appgate.ledger import Transaction
from appgate.markets.fixtures import start_market_fixture
from appgate.registry import donate_calldata

workdir = Path(tempfile.mkdtemp(prefix="gateway-demo-"))
fixture = start_market_fixture(workdir / "markets")

config = GatewayConfig(
    data_dir=workdir / "data",
    fees_enabled=True,
    markets_registry=fixture.registry_path,
    ca_bundle=fixture.ca_bundle,
    known_apps=fixture.known_apps_path,
    known_dev_serials=fixture.known_dev_serials_path,
    serial_db=fixture.serial_db_path,
    gateways=[
        {"name": "gw-near", "endpoint": "https://gw-near.demo", "rtt": 0.05},
        {"name": "gw-far", "endpoint": "https://gw-far.demo", "rtt": 0.70},
    ],
)
gateway = AppGateway(config)

url = fixture.page_url("anchor-md5")
print(f"uploading {url}")

gas, fee = gateway.estimate_fee(url)
print(f"estimated gas {gas}, fee {fee} wei at {gateway.chain.gas_price} wei/gas")

donor = config.owner_address  # any funded account can donate
tx = Transaction(donor, config.registry_addr, fee, donate_calldata(),
                 gateway.chain.nonce(donor))
ticket_receipt = gateway.chain.submit(tx, gateway.registry)
print(f"donated fee in tx 0x{ticket_receipt.tx_id.hex()[:16]}...")

result = gateway.upload(url, fee_tx_id=ticket_receipt.tx_id)
print(f"uploaded {result.package_name} {result.version_name}")
print(f"  verdict   : {result.verdict.channel.value}")
print(f"  repack    : {result.repack_verdict.value}")
print(f"  content   : {result.content_id.render()[:24]}...")
print(f"  chain tx  : 0x{result.tx_id.hex()[:16]}... (returned before confirmation)")

print("\nsecond upload of the same app:")
try:
    gateway.upload(url, fee_tx_id=ticket_receipt.tx_id)
except FeeRejected as exc:
    print(f"  refused: fee ticket {exc.condition} (each ticket pays for one upload)")
except Duplicate as exc:
    print(f"  refused: duplicate ({exc})")

print("\ndownloading through the fastest gateway:")
cid, data, served_by = gateway.download(result.package_name, result.version_name)
print(f"  {len(data)} bytes via {served_by.name} (rtt {served_by.last_rtt}s)")
print(f"  integrity: sha256(bytes) == {cid.render()[:24]}... OK")

print("\nconsortium sync pins everything on chain at the pinner node:")
outcomes = gateway.sync_pinner()
for content, outcome in outcomes.items():
    print(f"  {content[:24]}... {outcome}")

gateway.server_node.online = False
cid2, data2, _ = gateway.download(result.package_name, result.version_name)
print("\nwith the server's own store offline, the download still succeeds")
print(f"  (served from consortium copies; {len(data2)} bytes, same content id: {cid == cid2})")

gateway.close()
fixture.stop()
