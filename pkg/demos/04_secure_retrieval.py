#!/usr/bin/env python3
"""Secure retrieval from markets that serve downloads over plain HTTP.

Starts the authored fixture markets (real local HTTP + TLS servers), then
shows each verification channel: checksum extraction from download URLs and
script blocks, HTTPS upgrading, the known-app/known-developer fallbacks, and
a tampered download being refused.
"""

import hashlib
import tempfile
from pathlib import Path

from appgate.apkcheck import parse_apk
from appgate.markets import classify_retrieval
from appgate.markets.fixtures import start_market_fixture

workdir = Path(tempfile.mkdtemp(prefix="market-fixture-"))
fixture = start_market_fixture(workdir)
print(f"fixture markets serving from {fixture.http_base} and {fixture.tls_base}\n")

known_apps = {
    bytes.fromhex(line) for line in fixture.known_apps_path.read_text().split()
}
known_devs = {
    int(line, 16) for line in fixture.known_dev_serials_path.read_text().split()
}

client = fixture.client()
print(f"{'market':24} {'declared md5':34} verdict")
print("-" * 86)
for market_id, expectation in fixture.expectations.items():
    app, pattern = client.retrieve(expectation.page_url)
    serial = parse_apk(app.data).cert_serial
    verdict = classify_retrieval(app, pattern, serial, known_apps, known_devs)
    declared = app.declared_checksum or "(none)"
    print(f"{market_id:24} {declared:34} {verdict.channel.value}")

print("\n--- the tampered market in detail ---")
app, pattern = client.retrieve(fixture.page_url("mitm-tampered"))
verdict = classify_retrieval(app, pattern, 0, known_apps, known_devs)
print(f"page declares : {app.declared_checksum}")
print(f"bytes hash to : {hashlib.md5(app.data).hexdigest()}")
print(f"verdict       : {verdict.channel.value}")
print(f"detail        : {verdict.detail}")
print("\nan upload with this verdict is refused before anything is stored.")

fixture.stop()
