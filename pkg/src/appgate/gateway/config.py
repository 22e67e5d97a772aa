"""Gateway configuration file (JSON; schema documented in FORMATS.md)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..ledger import Address, DEFAULT_GAS_PRICE


@dataclass
class GatewayConfig:
    data_dir: Path
    gas_price: int = DEFAULT_GAS_PRICE
    genesis: dict[str, int] = field(default_factory=dict)
    owner: str = "0x" + "0a" * 20
    server_account: str = "0x" + "0b" * 20
    registry_address: str = "0x" + "a9" * 20
    fees_enabled: bool = False
    markets_registry: Path | None = None
    ca_bundle: Path | None = None
    known_apps: Path | None = None
    known_dev_serials: Path | None = None
    serial_db: Path | None = None
    cache_ttl_seconds: float = 1800.0
    refresh_period_seconds: float = 600.0
    gateways: list[dict] = field(default_factory=list)
    admin_token: str = "change-me"
    per_host_connections: int = 4

    def __post_init__(self) -> None:
        self.data_dir = Path(self.data_dir)
        for name in ("markets_registry", "ca_bundle", "known_apps",
                     "known_dev_serials", "serial_db"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, Path(value))
        if not self.genesis:
            # owner and server both funded at genesis; a donor account for
            # exercising the fee protocol from the CLI
            self.genesis = {
                self.owner: 10**21,
                self.server_account: 10**21,
                "0x" + "0d" * 20: 10**21,
            }

    @property
    def owner_address(self) -> Address:
        return Address.from_hex(self.owner)

    @property
    def server_address(self) -> Address:
        return Address.from_hex(self.server_account)

    @property
    def registry_addr(self) -> Address:
        return Address.from_hex(self.registry_address)

    @classmethod
    def load(cls, path: str | Path) -> "GatewayConfig":
        doc = json.loads(Path(path).read_text())
        return cls(
            data_dir=doc["dataDir"],
            gas_price=doc.get("gasPrice", DEFAULT_GAS_PRICE),
            genesis={k: int(v) for k, v in doc.get("genesis", {}).items()},
            owner=doc.get("owner", cls.owner),
            server_account=doc.get("serverAccount", cls.server_account),
            registry_address=doc.get("registryAddress", cls.registry_address),
            fees_enabled=doc.get("fees", {}).get("enabled", False),
            markets_registry=doc.get("markets", {}).get("registry"),
            ca_bundle=doc.get("markets", {}).get("caBundle"),
            known_apps=doc.get("markets", {}).get("knownApps"),
            known_dev_serials=doc.get("markets", {}).get("knownDeveloperSerials"),
            serial_db=doc.get("serialDb"),
            cache_ttl_seconds=doc.get("castore", {}).get("ttlSeconds", 1800.0),
            refresh_period_seconds=doc.get("castore", {}).get("refreshSeconds", 600.0),
            gateways=doc.get("castore", {}).get("gateways", []),
            admin_token=doc.get("adminToken", "change-me"),
            per_host_connections=doc.get("perHostConnections", 4),
        )

    def to_dict(self) -> dict:
        return {
            "dataDir": str(self.data_dir),
            "gasPrice": self.gas_price,
            "genesis": self.genesis,
            "owner": self.owner,
            "serverAccount": self.server_account,
            "registryAddress": self.registry_address,
            "fees": {"enabled": self.fees_enabled},
            "markets": {
                "registry": str(self.markets_registry) if self.markets_registry else None,
                "caBundle": str(self.ca_bundle) if self.ca_bundle else None,
                "knownApps": str(self.known_apps) if self.known_apps else None,
                "knownDeveloperSerials": (
                    str(self.known_dev_serials) if self.known_dev_serials else None
                ),
            },
            "serialDb": str(self.serial_db) if self.serial_db else None,
            "castore": {
                "ttlSeconds": self.cache_ttl_seconds,
                "refreshSeconds": self.refresh_period_seconds,
                "gateways": self.gateways,
            },
            "adminToken": self.admin_token,
            "perHostConnections": self.per_host_connections,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")
