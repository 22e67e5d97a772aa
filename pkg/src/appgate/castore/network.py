"""The consortium network: request-triggered caching, refresh, and sync.

Availability law: a fetch succeeds iff some online node holds the content
pinned or cached-unexpired.  Content only spreads on request -- a gateway
caches after serving a fetch -- so origin loss without a prior request means
total unavailability until someone adds the same bytes back.
"""

from __future__ import annotations

import logging
import time as _time
from dataclasses import dataclass, field

from .content import ContentId
from .node import (
    CastoreError,
    IntegrityMismatch,
    NodeKind,
    NodeOffline,
    NotFound,
    StoreNode,
)

logger = logging.getLogger(__name__)


class SimClock:
    """Test-driver-advanced clock; no wall-clock races in simulations."""

    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("clock only moves forward")
        self._now += seconds


class WallClock:
    def now(self) -> float:
        return _time.time()


class Network:
    def __init__(self, clock: SimClock | WallClock | None = None):
        self.clock = clock or SimClock()
        self.nodes: dict[str, StoreNode] = {}

    def add_node(self, node: StoreNode) -> StoreNode:
        self.nodes[node.node_id] = node
        return node

    def node(self, node_id: str) -> StoreNode:
        return self.nodes[node_id]

    def add(self, node: StoreNode, data: bytes) -> ContentId:
        """Store bytes at ``node`` (pinned there, as a local add) and return
        the self-certifying id."""
        if not node.online:
            raise NodeOffline(node.node_id)
        cid = ContentId.for_bytes(data)
        node.put(cid, data, self.clock.now(), pin=True)
        return cid

    def providers(self, cid: ContentId) -> list[StoreNode]:
        now = self.clock.now()
        return sorted(
            (n for n in self.nodes.values() if n.online and n.holds(cid, now)),
            key=lambda n: n.node_id,
        )

    def fetch(self, cid: ContentId, via: StoreNode) -> bytes:
        """Gateway-mediated fetch; installs a fresh cache entry at ``via``."""
        if via.kind is not NodeKind.GATEWAY:
            raise ValueError(f"{via.node_id} is not a gateway")
        if not via.online:
            raise NodeOffline(via.node_id)
        data = self._serve(cid, prefer=via)
        via.put(cid, data, self.clock.now(), pin=False)
        return data

    def retrieve(self, cid: ContentId) -> bytes:
        """Direct provider read (a consortium node acting for itself);
        installs no cache entry anywhere."""
        return self._serve(cid)

    def _serve(self, cid: ContentId, prefer: StoreNode | None = None) -> bytes:
        candidates = self.providers(cid)
        if prefer is not None and prefer in candidates:
            candidates.remove(prefer)
            candidates.insert(0, prefer)
        if not candidates:
            raise NotFound(cid.render())
        data = candidates[0].read(cid)
        if not cid.verify(data):
            raise IntegrityMismatch(
                f"{cid.render()} served corrupt bytes by {candidates[0].node_id}"
            )
        return data

    def gc_all(self) -> dict[str, set[ContentId]]:
        now = self.clock.now()
        return {nid: node.gc(now) for nid, node in self.nodes.items()}


@dataclass
class RefreshDaemon:
    """Re-requests content through gateways before their caches expire.

    Each cycle fetches every configured content id through every configured
    gateway; per-gateway failures are logged and do not stop the cycle.
    """

    network: Network
    cids: list[ContentId]
    gateways: list[StoreNode]
    period: float
    next_due: float = 0.0
    failures: list[tuple[float, str, str, str]] = field(default_factory=list)

    def due(self, now: float) -> bool:
        return now >= self.next_due

    def run_cycle(self) -> None:
        now = self.network.clock.now()
        for cid in self.cids:
            for gateway in self.gateways:
                try:
                    self.network.fetch(cid, gateway)
                except CastoreError as exc:
                    self.failures.append(
                        (now, gateway.node_id, cid.render(), str(exc))
                    )
                    logger.warning(
                        "refresh via %s failed for %s: %s",
                        gateway.node_id,
                        cid.render(),
                        exc,
                    )
        self.next_due = now + self.period

    def track(self, cid: ContentId) -> None:
        if cid not in self.cids:
            self.cids.append(cid)


def run_simulation(
    network: Network,
    daemons: list[RefreshDaemon],
    until: float,
    gc_each_step: bool = True,
) -> None:
    """Advance the simulated clock to ``until``, firing due daemon cycles."""
    clock = network.clock
    while True:
        upcoming = [d.next_due for d in daemons if d.next_due <= until]
        if not upcoming:
            break
        target = min(upcoming)
        if target > clock.now():
            clock.advance(target - clock.now())
        if gc_each_step:
            network.gc_all()
        for daemon in daemons:
            if daemon.due(clock.now()):
                daemon.run_cycle()
    if clock.now() < until:
        clock.advance(until - clock.now())
    if gc_each_step:
        network.gc_all()


def consortium_sync(
    network: Network,
    pinner: StoreNode,
    chain,
    registry_address,
) -> dict[str, str]:
    """Pin every content id indexed on chain at ``pinner``.

    Returns a per-content outcome map: "pinned", "already-pinned", or the
    failure message.  Idempotent; partial failures do not abort the sync.
    """
    from ..registry import stored_records

    if not pinner.online:
        raise NodeOffline(pinner.node_id)
    outcomes: dict[str, str] = {}
    for _, record in stored_records(chain, registry_address):
        cid = ContentId(record.content_id)
        key = cid.render()
        if key in outcomes and outcomes[key] in ("pinned", "already-pinned"):
            continue
        if cid in pinner.pinned:
            outcomes[key] = "already-pinned"
            continue
        try:
            data = network.retrieve(cid)
        except CastoreError as exc:
            outcomes[key] = f"failed: {exc}"
            continue
        pinner.put(cid, data, network.clock.now(), pin=True)
        outcomes[key] = "pinned"
    return outcomes
