"""The orchestrating server node.

Upload pipeline, in order: resolve download URL, retrieve bytes, checksum or
fallback verification, repackaging check, duplicate check against chain logs,
consortium store, registry log.  A rejection at any stage leaves chain,
store, serial db, and fee tickets untouched.  Uploads of the same
(package, version) are serialized on an identity lock so the offloaded
duplicate check cannot race itself.
"""

from __future__ import annotations

import logging
import threading
import time
from collections import defaultdict
from dataclasses import dataclass, field

from ..apkcheck import ApkError, MalformedDer, SerialDb, parse_apk, repack_check
from ..castore import (
    ContentId,
    GatewayInfo,
    Network,
    NodeKind,
    RefreshDaemon,
    SimClock,
    StoreNode,
    WallClock,
    consortium_sync,
    select_gateway,
    table_prober,
)
from ..ledger import Address, Chain
from ..markets import (
    MarketClient,
    MarketError,
    PatternRegistry,
    SecurityVerdict,
    classify_retrieval,
)
from ..registry import (
    AppRecord,
    AppRegistry,
    RegistryClient,
    RegistryError,
    RepackVerdict,
    find_record,
    stored_records,
)
from .config import GatewayConfig
from .fees import FeeRejected, FeeTickets

logger = logging.getLogger(__name__)

UNVERIFIED_FLAG = "#unverified-transport"

# placeholder maxima used when estimating before the app is retrieved
MAX_PACKAGE_LEN = 80
MAX_VERSION_LEN = 40
MAX_SERIAL_BYTES = 20


class _PhaseTimer:
    """Contiguous phase accounting: every pipeline segment lands in a phase."""

    def __init__(self) -> None:
        self._last = time.perf_counter()
        self.timings: dict[str, float] = {}

    def mark(self, phase: str) -> None:
        now = time.perf_counter()
        self.timings[phase] = self.timings.get(phase, 0.0) + (now - self._last)
        self._last = now


class GatewayError(Exception):
    pass


class UnknownMarket(GatewayError):
    pass


class RetrievalFailed(GatewayError):
    pass


class Duplicate(GatewayError):
    pass


class NotOnChain(GatewayError):
    pass


class SecurityRejected(GatewayError):
    def __init__(self, verdict: SecurityVerdict):
        super().__init__(f"{verdict.channel.value}: {verdict.detail}")
        self.verdict = verdict


@dataclass
class UploadResult:
    package_name: str
    version_name: str
    content_id: ContentId
    verdict: SecurityVerdict
    repack_verdict: RepackVerdict
    tx_id: bytes  # pending: returned before confirmation
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "packageName": self.package_name,
            "versionName": self.version_name,
            "contentId": self.content_id.render(),
            "verdict": {
                "channel": self.verdict.channel.value,
                "detail": self.verdict.detail,
            },
            "repackVerdict": self.repack_verdict.value,
            "txId": "0x" + self.tx_id.hex(),
        }


def record_to_dict(record: AppRecord) -> dict:
    return {
        "packageName": record.package_name,
        "versionName": record.version,
        "certSerial": f"0x{record.cert_serial:x}",
        "originUrl": record.origin_url,
        "repackVerdict": record.repack_verdict.value,
        "contentId": ContentId(record.content_id).render(),
    }


class AppGateway:
    def __init__(self, config: GatewayConfig, clock: str = "sim"):
        self.config = config
        config.data_dir.mkdir(parents=True, exist_ok=True)

        self.chain = Chain.open(
            config.data_dir / "chain.log",
            genesis={Address.from_hex(a): v for a, v in config.genesis.items()},
            gas_price=config.gas_price,
        )
        self.registry = AppRegistry(config.registry_addr, config.owner_address)
        self.owner_client = RegistryClient(self.chain, self.registry, config.owner_address)
        self.server_client = RegistryClient(self.chain, self.registry, config.server_address)
        if not self.registry.is_whitelisted(self.chain, config.server_address):
            # genesis provisioning: the operator account whitelists its server
            self.owner_client.whitelist_add(config.server_address)

        self.network = Network(SimClock() if clock == "sim" else WallClock())
        self.server_node = self.network.add_node(StoreNode("server", NodeKind.ORIGIN))
        self.pinner_node = self.network.add_node(StoreNode("pinner-1", NodeKind.PINNER))
        # the server's own store is durable: blobs reload as pins on startup
        self._store_dir = config.data_dir / "store"
        self._store_dir.mkdir(parents=True, exist_ok=True)
        for blob_path in sorted(self._store_dir.glob("*.bin")):
            data = blob_path.read_bytes()
            cid = ContentId.for_bytes(data)
            if blob_path.stem != cid.render():
                logger.warning("dropping corrupt stored blob %s", blob_path.name)
                continue
            self.server_node.put(cid, data, self.network.clock.now(), pin=True)
        self.gateway_infos: list[GatewayInfo] = []
        self._rtt_table: dict[str, float] = {}
        self._sim_gateways: dict[str, StoreNode] = {}
        for entry in config.gateways:
            info = GatewayInfo(entry["name"], entry.get("endpoint", f"https://{entry['name']}"))
            self.gateway_infos.append(info)
            self._rtt_table[info.name] = entry.get("rtt", 1.0)
            node = self.network.add_node(
                StoreNode(f"gw:{info.name}", NodeKind.GATEWAY, ttl=config.cache_ttl_seconds)
            )
            self._sim_gateways[info.name] = node
        if not self.gateway_infos:
            info = GatewayInfo("local-gateway", "http://127.0.0.1")
            self.gateway_infos.append(info)
            self._rtt_table[info.name] = 0.01
            self._sim_gateways[info.name] = self.network.add_node(
                StoreNode("gw:local-gateway", NodeKind.GATEWAY, ttl=config.cache_ttl_seconds)
            )
        self.prober = table_prober(self._rtt_table)

        self.refresh_daemon = RefreshDaemon(
            self.network,
            cids=[ContentId(r.content_id) for _, r in stored_records(self.chain, config.registry_addr)],
            gateways=list(self._sim_gateways.values()),
            period=config.refresh_period_seconds,
        )

        self.market_client: MarketClient | None = None
        if config.markets_registry:
            self.market_client = MarketClient(
                PatternRegistry.load(config.markets_registry),
                ca_bundle=str(config.ca_bundle) if config.ca_bundle else None,
                per_host_connections=config.per_host_connections,
            )

        self.serial_db = SerialDb.load(config.serial_db) if config.serial_db else SerialDb()
        self.known_apps: set[bytes] = set()
        if config.known_apps and config.known_apps.exists():
            self.known_apps = {
                bytes.fromhex(line) for line in config.known_apps.read_text().split()
            }
        self.known_dev_serials: set[int] = set()
        if config.known_dev_serials and config.known_dev_serials.exists():
            self.known_dev_serials = {
                int(line, 16) for line in config.known_dev_serials.read_text().split()
            }

        self.fees = FeeTickets(
            self.chain, config.registry_addr, config.data_dir / "fee_tickets.log"
        )
        self._identity_locks: dict[tuple[str, str], threading.Lock] = defaultdict(
            threading.Lock
        )
        self._identity_locks_guard = threading.Lock()
        self.access_log: list[tuple[str, str]] = []

    # -- helpers ---------------------------------------------------------------

    def close(self) -> None:
        self.chain.close()

    def _identity_lock(self, package: str, version: str) -> threading.Lock:
        with self._identity_locks_guard:
            return self._identity_locks[(package, version)]

    def _require_market_client(self) -> MarketClient:
        if self.market_client is None:
            raise UnknownMarket("no market registry configured")
        return self.market_client

    # -- upload workflow ---------------------------------------------------------

    def upload(self, page_url: str, fee_tx_id: bytes | None = None) -> UploadResult:
        client = self._require_market_client()
        if client.registry.find(page_url) is None:
            raise UnknownMarket(page_url)

        timer = _PhaseTimer()
        try:
            app, pattern = client.retrieve(page_url)
        except MarketError as exc:
            raise RetrievalFailed(str(exc)) from exc
        timer.mark("retrieve")

        # repackaging check (parses the archive for identity + serial)
        try:
            summary = parse_apk(app.data)
        except (ApkError, MalformedDer) as exc:
            raise RetrievalFailed(f"retrieved file is not a parseable app: {exc}") from exc
        repack_verdict = repack_check(summary, self.serial_db)
        timer.mark("repackaging")

        # checksum / fallback verification
        verdict = classify_retrieval(
            app, pattern, summary.cert_serial, self.known_apps, self.known_dev_serials
        )
        timer.mark("checksum")
        if verdict.rejected:
            raise SecurityRejected(verdict)

        identity = (summary.package_name, summary.version_name)
        with self._identity_lock(*identity):
            # offloaded duplicate check: query chain logs before uploading.
            # Counted into store_upload together with fee verification and the
            # consortium write: it is server-side pre-store work.
            if find_record(self.chain, self.config.registry_addr, *identity):
                raise Duplicate(f"{identity[0]} {identity[1]} already on chain")

            ticket = None
            if self.config.fees_enabled:
                if fee_tx_id is None:
                    raise FeeRejected("unknownTx", "fee ticket required")
                gas, fee = self.estimate_fee(page_url)
                ticket = self.fees.verify_and_claim(fee_tx_id, fee)

            origin_url = page_url + (UNVERIFIED_FLAG if verdict.warning else "")
            cid = ContentId.for_bytes(app.data)
            already_held = self.server_node.holds(cid, self.network.clock.now())
            self.network.add(self.server_node, app.data)
            blob_path = self._store_dir / f"{cid.render()}.bin"
            blob_path.write_bytes(app.data)
            timer.mark("store_upload")

            record = AppRecord(
                package_name=summary.package_name,
                version=summary.version_name,
                cert_serial=summary.cert_serial,
                origin_url=origin_url,
                repack_verdict=repack_verdict,
                content_id=cid.digest,
            )
            try:
                receipt = self.server_client.store_app(record)
            except RegistryError:
                if not already_held:
                    self.server_node.pinned.discard(cid)
                    self.server_node.blobs.pop(cid, None)
                    blob_path.unlink(missing_ok=True)
                if ticket is not None:
                    self.fees.release(ticket)
                raise
            if ticket is not None:
                self.fees.commit(ticket)
            self.refresh_daemon.track(cid)
            timer.mark("chain_submit")
        timings = timer.timings

        return UploadResult(
            package_name=summary.package_name,
            version_name=summary.version_name,
            content_id=cid,
            verdict=verdict,
            repack_verdict=repack_verdict,
            tx_id=receipt.tx_id,
            timings=timings,
        )

    def upload_with_timing(self, page_url: str, fee_tx_id: bytes | None = None) -> UploadResult:
        return self.upload(page_url, fee_tx_id)

    # -- fee estimation ------------------------------------------------------------

    def estimate_fee(self, page_url: str) -> tuple[int, int]:
        """(gas units, fee in wei) for uploading an app from this page.

        Uses placeholder maxima for fields unknown before retrieval, so the
        estimate upper-bounds the gas later charged for the same URL.
        """
        client = self._require_market_client()
        if client.registry.find(page_url) is None:
            raise UnknownMarket(page_url)
        placeholder = AppRecord(
            package_name="x" * MAX_PACKAGE_LEN,
            version="y" * MAX_VERSION_LEN,
            cert_serial=(1 << (8 * MAX_SERIAL_BYTES)) - 1,
            origin_url=page_url + UNVERIFIED_FLAG,
            repack_verdict=RepackVerdict.UNCHECKED,
            content_id=b"\xff" * 32,
        )
        gas = self.registry.store_app_estimate(placeholder, self.chain.schedule)
        return gas, gas * self.chain.gas_price

    # -- download workflow -----------------------------------------------------------

    def download(self, package_name: str, version: str) -> tuple[ContentId, bytes, GatewayInfo]:
        """Bloom-filtered chain lookup, then fetch via the fastest gateway.

        Consumes zero gas and mutates no chain state.
        """
        record = find_record(self.chain, self.config.registry_addr, package_name, version)
        if record is None:
            raise NotOnChain(f"{package_name} {version}")
        cid = ContentId(record.content_id)
        best = select_gateway(self.gateway_infos, self.prober)
        data = self.network.fetch(cid, self._sim_gateways[best.name])
        if not cid.verify(data):  # fetch already verifies; belt and braces
            from ..castore import IntegrityMismatch

            raise IntegrityMismatch(cid.render())
        return cid, data, best

    # -- listings ---------------------------------------------------------------------

    def list_apps(self, offset: int = 0, limit: int = 50) -> list[AppRecord]:
        records = [r for _, r in stored_records(self.chain, self.config.registry_addr)]
        return records[offset : offset + limit]

    def get_app(self, package_name: str, version: str) -> AppRecord | None:
        return find_record(self.chain, self.config.registry_addr, package_name, version)

    # -- maintenance --------------------------------------------------------------------

    def sync_pinner(self) -> dict[str, str]:
        return consortium_sync(
            self.network, self.pinner_node, self.chain, self.config.registry_addr
        )

    def run_refresh_cycle(self) -> None:
        self.refresh_daemon.run_cycle()

    def probe_gateways(self) -> list[GatewayInfo]:
        try:
            select_gateway(self.gateway_infos, self.prober)
        except Exception:
            pass
        return self.gateway_infos
