"""Public gateway selection by round-trip time."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .node import CastoreError


class NoGatewayReachable(CastoreError):
    pass


@dataclass
class GatewayInfo:
    name: str
    endpoint: str
    last_rtt: float | None = None
    reachable: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "endpoint": self.endpoint,
            "lastRtt": self.last_rtt,
            "reachable": self.reachable,
        }


Prober = Callable[[GatewayInfo], "float | None"]


def select_gateway(gateways: list[GatewayInfo], prober: Prober) -> GatewayInfo:
    """Probe every gateway, pick the reachable one with the lowest RTT.

    Ties break lexicographically by name.  Updates last_rtt/reachable on the
    probed entries.
    """
    for gateway in gateways:
        try:
            rtt = prober(gateway)
        except Exception:
            rtt = None
        if rtt is not None and rtt > 0:
            gateway.last_rtt = rtt
            gateway.reachable = True
        else:
            gateway.reachable = False
    reachable = [g for g in gateways if g.reachable]
    if not reachable:
        raise NoGatewayReachable("no gateway answered the probe")
    return min(reachable, key=lambda g: (g.last_rtt, g.name))


def table_prober(table: dict[str, float]) -> Prober:
    """Fixture prober: looks RTTs up in a name -> seconds table."""

    def probe(gateway: GatewayInfo) -> float | None:
        return table.get(gateway.name)

    return probe


def http_prober(probe_path: str = "/ipfs/", timeout: float = 5.0) -> Prober:
    """Live prober: times a HEAD request against the gateway endpoint."""
    import requests

    def probe(gateway: GatewayInfo) -> float | None:
        url = gateway.endpoint.rstrip("/") + probe_path
        started = time.perf_counter()
        try:
            requests.head(url, timeout=timeout)
        except requests.RequestException:
            return None
        return time.perf_counter() - started

    return probe


def http_gateway_fetch(
    gateway: GatewayInfo, cid_rendering: str, timeout: float = 30.0
) -> bytes:
    """Live mode: GET {endpoint}/ipfs/{cid} raw bytes from a real gateway."""
    import requests

    url = gateway.endpoint.rstrip("/") + "/ipfs/" + cid_rendering
    response = requests.get(url, timeout=timeout)
    response.raise_for_status()
    return response.content


def load_gateway_table(path: str | Path) -> tuple[list[GatewayInfo], dict[str, float]]:
    """Load a gateway RTT fixture file: [{name, location?, rtt}, ...]."""
    entries = json.loads(Path(path).read_text())
    gateways = [
        GatewayInfo(name=e["name"], endpoint=e.get("endpoint", f"https://{e['name']}"))
        for e in entries
    ]
    return gateways, {e["name"]: e["rtt"] for e in entries}
