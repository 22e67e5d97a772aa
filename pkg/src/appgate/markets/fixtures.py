"""Authored fixture markets served over local HTTP and TLS.

Layout per market: ``<root>/<market-id>/{page.html, files/*.apk, meta.json}``.
The builder writes real signed archives, a pattern registry pointing at the
live server ports, the official-serial db, and the known-app / known-developer
fallback lists.  Mechanism classes covered: URL-embedded checksums (x3, one
via page-URL rewriting), script-embedded (x1), https-upgrade (x1),
no-checksum fallbacks (x3), a TLS market, a code-hosting direct URL, a
checksum-tampered market, and a repackaged app.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import ssl
import threading
from dataclasses import dataclass, field
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from cryptography import x509
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.x509.oid import NameOID

from ..apkcheck.fixtures import Signer, build_apk, make_signer
from ..apkcheck.serialdb import SerialDb
from .patterns import (
    Direct,
    HtmlAttribute,
    HttpsRewrite,
    InDownloadUrl,
    InScriptBlock,
    MarketPattern,
    NoChecksum,
    PatternRegistry,
    ScriptEmbedded,
    UrlEmbedded,
)
from .retrieval import MarketClient

MITM_DECLARED_MD5 = "f5580d6a58bb9d97c27929f1a9c585f1"

OFFICIAL_SERIAL = 0x706A633E
DEVELOPER_SERIAL = 0x51AB22
REPACK_SERIAL = 0xDEADBEA7


class _QuietHandler(SimpleHTTPRequestHandler):
    def log_message(self, *args):  # fixture servers stay silent under pytest
        pass


def _self_signed_tls(root: Path) -> tuple[Path, Path]:
    key = ec.generate_private_key(ec.SECP256R1())
    name = x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, "market fixture")])
    import ipaddress

    cert = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(datetime.datetime(2020, 1, 1))
        .not_valid_after(datetime.datetime(2045, 1, 1))
        .add_extension(x509.BasicConstraints(ca=True, path_length=None), critical=True)
        .add_extension(
            x509.SubjectAlternativeName(
                [
                    x509.IPAddress(ipaddress.IPv4Address("127.0.0.1")),
                    x509.DNSName("localhost"),
                ]
            ),
            critical=False,
        )
        .sign(key, hashes.SHA256())
    )
    tls_dir = root / "_tls"
    tls_dir.mkdir(parents=True, exist_ok=True)
    cert_path = tls_dir / "cert.pem"
    key_path = tls_dir / "key.pem"
    cert_path.write_bytes(cert.public_bytes(serialization.Encoding.PEM))
    key_path.write_bytes(
        key.private_bytes(
            serialization.Encoding.PEM,
            serialization.PrivateFormat.PKCS8,
            serialization.NoEncryption(),
        )
    )
    return cert_path, key_path


@dataclass
class MarketExpectation:
    """What tests should see for one fixture market."""

    package: str
    version: str
    page_url: str
    verdict_channel: str
    repack_verdict: str


@dataclass
class MarketFixture:
    root: Path
    http_base: str
    tls_base: str
    registry_path: Path
    serial_db_path: Path
    known_apps_path: Path
    known_dev_serials_path: Path
    ca_bundle: Path
    expectations: dict[str, MarketExpectation]
    _servers: list = field(default_factory=list)

    @property
    def registry(self) -> PatternRegistry:
        return PatternRegistry.load(self.registry_path)

    def client(self, **kwargs) -> MarketClient:
        return MarketClient(self.registry, ca_bundle=str(self.ca_bundle), **kwargs)

    def page_url(self, market_id: str) -> str:
        return self.expectations[market_id].page_url

    def bulk_page_urls(self, count: int = 20) -> list[str]:
        return [f"{self.http_base}/bulk/app-{i:03d}.html" for i in range(count)]

    def app_file(self, market_id: str) -> Path:
        files = sorted((self.root / market_id / "files").glob("*.apk"))
        return files[0]

    def stop(self) -> None:
        for server in self._servers:
            server.shutdown()
            server.server_close()
        self._servers.clear()


def _serve(root: Path, tls: tuple[Path, Path] | None = None) -> tuple:
    handler = partial(_QuietHandler, directory=str(root))
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    if tls is not None:
        context = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
        context.load_cert_chain(certfile=tls[0], keyfile=tls[1])
        server.socket = context.wrap_socket(server.socket, server_side=True)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address[1]


def _page(body: str) -> str:
    return f"<!doctype html><html><head><title>fixture market</title></head><body>{body}</body></html>"


def start_market_fixture(root: Path) -> MarketFixture:
    """Build every fixture market under ``root`` and serve it."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    cert_path, key_path = _self_signed_tls(root)
    http_server, http_port = _serve(root)
    tls_server, tls_port = _serve(root, tls=(cert_path, key_path))
    http_base = f"http://127.0.0.1:{http_port}"
    tls_base = f"https://127.0.0.1:{tls_port}"

    official = make_signer(OFFICIAL_SERIAL, "official release key")
    developer = make_signer(DEVELOPER_SERIAL, "known play developer")
    repacker = make_signer(REPACK_SERIAL, "repackager key")

    patterns: list[MarketPattern] = []
    expectations: dict[str, MarketExpectation] = {}
    serial_db = SerialDb()
    known_app_digests: list[str] = []

    def write_market(
        market_id: str,
        app: bytes,
        file_name: str,
        page_html: str | None,
        pattern: MarketPattern,
        page_name: str = "page.html",
        expectation: MarketExpectation | None = None,
    ) -> None:
        market_dir = root / market_id
        (market_dir / "files").mkdir(parents=True, exist_ok=True)
        (market_dir / "files" / file_name).write_bytes(app)
        if page_html is not None:
            (market_dir / page_name).write_text(page_html)
        (market_dir / "meta.json").write_text(
            json.dumps(
                {
                    "marketId": market_id,
                    "file": file_name,
                    "md5": hashlib.md5(app).hexdigest(),
                    "sha256": hashlib.sha256(app).hexdigest(),
                },
                indent=2,
            )
        )
        patterns.append(pattern)
        if expectation:
            expectations[market_id] = expectation

    def fixture_app(market_id: str, signer: Signer, version: str = "1.0") -> tuple[str, bytes]:
        package = f"com.fixture.{market_id.replace('-', '_')}"
        return package, build_apk(package, version, signer)

    # 1-2: checksum embedded in the download URL, link in an HTML attribute
    for market_id, selector, anchor in (
        ("anchor-md5", "a.download@href", '<a class="download" href="{href}">get</a>'),
        ("button-md5", "a#main-dl@href", '<a id="main-dl" href="{href}">get</a>'),
    ):
        package, app = fixture_app(market_id, official)
        md5 = hashlib.md5(app).hexdigest()
        write_market(
            market_id,
            app,
            f"{md5}.apk",
            _page(anchor.format(href=f"files/{md5}.apk")),
            MarketPattern(
                market_id,
                rf"{http_base}/{market_id}/page\.html",
                HtmlAttribute(selector),
                InDownloadUrl(),
                transport_secure=False,
            ),
            expectation=MarketExpectation(
                package, "1.0", f"{http_base}/{market_id}/page.html",
                "checksumVerified", "pass",
            ),
        )
        serial_db.add(package, official.serial)

    # 3: checksum-bearing download URL derived from the page URL itself
    package, app = fixture_app("path-md5", official)
    md5 = hashlib.md5(app).hexdigest()
    write_market(
        "path-md5",
        app,
        f"{md5}.apk",
        _page("<p>landing page; the download URL follows from this page URL</p>"),
        MarketPattern(
            "path-md5",
            rf"{http_base}/path-md5/app-([0-9a-f]{{32}})\.html",
            UrlEmbedded(rf"{http_base}/path-md5/files/\1.apk"),
            InDownloadUrl(),
            transport_secure=False,
        ),
        page_name=f"app-{md5}.html",
        expectation=MarketExpectation(
            package, "1.0", f"{http_base}/path-md5/app-{md5}.html",
            "checksumVerified", "pass",
        ),
    )
    serial_db.add(package, official.serial)

    # 4: download URL and checksum both in a <script> data section
    package, app = fixture_app("script-md5", official)
    md5 = hashlib.md5(app).hexdigest()
    write_market(
        "script-md5",
        app,
        "bundle.apk",
        _page(
            "<script>var appMeta = 1; var apkUrl = \"files/bundle.apk\"; "
            f'var apkMd5 = "{md5}";</script>'
        ),
        MarketPattern(
            "script-md5",
            rf"{http_base}/script-md5/page\.html",
            ScriptEmbedded("apkUrl"),
            InScriptBlock("apkMd5"),
            transport_secure=False,
        ),
        expectation=MarketExpectation(
            package, "1.0", f"{http_base}/script-md5/page.html",
            "checksumVerified", "pass",
        ),
    )
    serial_db.add(package, official.serial)

    # 5: no checksum, but the download URL upgrades to the TLS listener
    package, app = fixture_app("https-upgrade", official)
    write_market(
        "https-upgrade",
        app,
        "app.apk",
        _page(f'<a class="download" href="{http_base}/https-upgrade/files/app.apk">get</a>'),
        MarketPattern(
            "https-upgrade",
            rf"{http_base}/https-upgrade/page\.html",
            HttpsRewrite(
                "a.download@href",
                host_map={f"127.0.0.1:{http_port}": f"127.0.0.1:{tls_port}"},
            ),
            NoChecksum(),
            transport_secure=False,
        ),
        expectation=MarketExpectation(
            package, "1.0", f"{http_base}/https-upgrade/page.html",
            "httpsRewritten", "pass",
        ),
    )
    serial_db.add(package, official.serial)

    # 6-8: no checksum at all; fallback decides
    for market_id, signer, channel in (
        ("no-checksum-known-app", official, "knownAppMatch"),
        ("no-checksum-known-dev", developer, "knownDeveloperMatch"),
        ("no-checksum-unknown", developer, "unverifiedWarning"),
    ):
        package, app = fixture_app(market_id, signer)
        write_market(
            market_id,
            app,
            "app.apk",
            _page('<a class="download" href="files/app.apk">get</a>'),
            MarketPattern(
                market_id,
                rf"{http_base}/{market_id}/page\.html",
                HtmlAttribute("a.download@href"),
                NoChecksum(),
                transport_secure=False,
            ),
            expectation=MarketExpectation(
                package, "1.0", f"{http_base}/{market_id}/page.html",
                channel,
                "pass" if signer is official else "unchecked",
            ),
        )
        if market_id == "no-checksum-known-app":
            known_app_digests.append(hashlib.sha256(app).hexdigest())
            serial_db.add(package, official.serial)
        # known-dev and unknown packages stay out of the serial db on purpose:
        # their repack verdict must come back unchecked

    # the unknown market must not match the developer allowlist either, so
    # rebuild its app with a one-off signer
    one_off = make_signer(0x7777AB, "one-off signer")
    package, app = fixture_app("no-checksum-unknown", one_off)
    (root / "no-checksum-unknown" / "files" / "app.apk").write_bytes(app)

    # 9: a properly secured market (served from the TLS listener)
    package, app = fixture_app("secure-direct", official)
    write_market(
        "secure-direct",
        app,
        "app.apk",
        _page('<a class="download" href="files/app.apk">get</a>'),
        MarketPattern(
            "secure-direct",
            rf"{tls_base}/secure-direct/page\.html",
            HtmlAttribute("a.download@href"),
            NoChecksum(),
            transport_secure=True,
        ),
        expectation=MarketExpectation(
            package, "1.0", f"{tls_base}/secure-direct/page.html",
            "httpsDirect", "pass",
        ),
    )
    serial_db.add(package, official.serial)

    # 10: custom app via a code-hosting URL; /blob/ normalizes to /raw/
    package, app = fixture_app("codehost", official)
    raw_dir = root / "codehost" / "repo" / "raw" / "main"
    raw_dir.mkdir(parents=True, exist_ok=True)
    (raw_dir / "custom.apk").write_bytes(app)
    (root / "codehost" / "files").mkdir(parents=True, exist_ok=True)
    (root / "codehost" / "files" / "custom.apk").write_bytes(app)
    (root / "codehost" / "meta.json").write_text(
        json.dumps({"marketId": "codehost", "file": "repo/raw/main/custom.apk"})
    )
    patterns.append(
        MarketPattern(
            "codehost",
            rf"{tls_base}/codehost/repo/(blob|raw)/main/custom\.apk",
            Direct(),
            NoChecksum(),
            transport_secure=True,
        )
    )
    expectations["codehost"] = MarketExpectation(
        package, "1.0", f"{tls_base}/codehost/repo/blob/main/custom.apk",
        "httpsDirect", "pass",
    )
    serial_db.add(package, official.serial)

    # 11: man-in-the-middle reproduction: the page declares one checksum, the
    # served file is a different app entirely
    package, app = fixture_app("mitm-tampered", repacker)
    write_market(
        "mitm-tampered",
        app,
        f"{MITM_DECLARED_MD5}.apk",
        _page(f'<a class="download" href="files/{MITM_DECLARED_MD5}.apk">get</a>'),
        MarketPattern(
            "mitm-tampered",
            rf"{http_base}/mitm-tampered/page\.html",
            HtmlAttribute("a.download@href"),
            InDownloadUrl(),
            transport_secure=False,
        ),
        expectation=MarketExpectation(
            package, "1.0", f"{http_base}/mitm-tampered/page.html",
            "rejected", "unchecked",
        ),
    )

    # 12: checksum-clean transport but the app is re-signed by a stranger
    package, app = fixture_app("repacked-app", repacker)
    md5 = hashlib.md5(app).hexdigest()
    write_market(
        "repacked-app",
        app,
        f"{md5}.apk",
        _page(f'<a class="download" href="files/{md5}.apk">get</a>'),
        MarketPattern(
            "repacked-app",
            rf"{http_base}/repacked-app/page\.html",
            HtmlAttribute("a.download@href"),
            InDownloadUrl(),
            transport_secure=False,
        ),
        expectation=MarketExpectation(
            package, "1.0", f"{http_base}/repacked-app/page.html",
            "checksumVerified", "fail",
        ),
    )
    serial_db.add(package, official.serial)  # official key differs from signer

    # 13: a bulk market hosting many versions behind one pattern, for the
    # timing harness and batch-style exercises
    bulk_package = "com.fixture.bulk"
    bulk_dir = root / "bulk"
    (bulk_dir / "files").mkdir(parents=True, exist_ok=True)
    for i in range(24):
        version = f"1.0.{i}"
        app = build_apk(bulk_package, version, official)
        md5 = hashlib.md5(app).hexdigest()
        (bulk_dir / "files" / f"{md5}.apk").write_bytes(app)
        (bulk_dir / f"app-{i:03d}.html").write_text(
            _page(f'<a class="download" href="files/{md5}.apk">get</a>')
        )
    (bulk_dir / "meta.json").write_text(
        json.dumps({"marketId": "bulk", "package": bulk_package, "pages": 24})
    )
    patterns.append(
        MarketPattern(
            "bulk",
            rf"{http_base}/bulk/app-\d{{3}}\.html",
            HtmlAttribute("a.download@href"),
            InDownloadUrl(),
            transport_secure=False,
        )
    )
    serial_db.add(bulk_package, official.serial)

    registry = PatternRegistry(patterns)
    registry_path = root / "markets.json"
    registry.save(registry_path)

    serial_db_path = root / "serials.tsv"
    serial_db.save(serial_db_path)

    known_apps_path = root / "known_apps.txt"
    known_apps_path.write_text("\n".join(known_app_digests) + "\n")
    known_dev_path = root / "known_dev_serials.txt"
    known_dev_path.write_text(f"{DEVELOPER_SERIAL:x}\n")

    return MarketFixture(
        root=root,
        http_base=http_base,
        tls_base=tls_base,
        registry_path=registry_path,
        serial_db_path=serial_db_path,
        known_apps_path=known_apps_path,
        known_dev_serials_path=known_dev_path,
        ca_bundle=cert_path,
        expectations=expectations,
        _servers=[http_server, tls_server],
    )
