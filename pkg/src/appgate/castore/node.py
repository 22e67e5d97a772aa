"""Storage nodes: origins, caching gateways, and pinning servers."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

from .content import ContentId

DEFAULT_TTL = 30 * 60.0  # simulated seconds


class CastoreError(Exception):
    pass


class NodeOffline(CastoreError):
    pass


class NotFound(CastoreError):
    """No online node holds the content (pinned or cached fresh)."""


class IntegrityMismatch(CastoreError):
    """Served bytes do not hash to the requested content id."""


class NodeKind(Enum):
    ORIGIN = "origin"
    GATEWAY = "gateway"
    PINNER = "pinner"


@dataclass
class CacheEntry:
    content_id: ContentId
    cached_at: float
    ttl: float

    def fresh(self, now: float) -> bool:
        return now - self.cached_at <= self.ttl


class StoreNode:
    """One member of the consortium.  State is guarded per node."""

    def __init__(self, node_id: str, kind: NodeKind, ttl: float = DEFAULT_TTL):
        self.node_id = node_id
        self.kind = kind
        self.ttl = ttl
        self.online = True
        self.blobs: dict[ContentId, bytes] = {}
        self.pinned: set[ContentId] = set()
        self.cache: dict[ContentId, CacheEntry] = {}
        self._lock = threading.Lock()

    def holds(self, cid: ContentId, now: float) -> bool:
        """Pinned, or cached and unexpired.  Ignores online state."""
        with self._lock:
            if cid not in self.blobs:
                return False
            if cid in self.pinned:
                return True
            entry = self.cache.get(cid)
            return entry is not None and entry.fresh(now)

    def put(self, cid: ContentId, data: bytes, now: float, pin: bool) -> None:
        with self._lock:
            self.blobs[cid] = data
            if pin:
                self.pinned.add(cid)
                self.cache.pop(cid, None)
            elif cid not in self.pinned:
                self.cache[cid] = CacheEntry(cid, now, self.ttl)

    def pin(self, cid: ContentId) -> None:
        with self._lock:
            if cid not in self.blobs:
                raise NotFound(f"{cid.render()} not present at {self.node_id}")
            self.pinned.add(cid)
            self.cache.pop(cid, None)

    def gc(self, now: float) -> set[ContentId]:
        """Evict exactly the expired, unpinned cache entries."""
        with self._lock:
            evicted = {
                cid
                for cid, entry in self.cache.items()
                if not entry.fresh(now) and cid not in self.pinned
            }
            for cid in evicted:
                del self.cache[cid]
                self.blobs.pop(cid, None)
            return evicted

    def read(self, cid: ContentId) -> bytes:
        with self._lock:
            return self.blobs[cid]

    def corrupt(self, cid: ContentId) -> None:
        """Test helper: flip a byte of the stored blob in place."""
        with self._lock:
            data = bytearray(self.blobs[cid])
            data[0] ^= 0xFF if data else 0
            self.blobs[cid] = bytes(data)

    def __repr__(self) -> str:
        state = "online" if self.online else "offline"
        return f"StoreNode({self.node_id}, {self.kind.value}, {state})"
