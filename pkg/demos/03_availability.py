#!/usr/bin/env python3
"""Content-addressed storage is not distributed by itself.

Files live only where they were added; gateways cache them only on request,
and caches expire.  This demo walks the failure mode and the two mitigations:
a refresh daemon that re-requests content before the TTL lapses, and
consortium pinners that keep permanent copies.
"""

from appgate.castore import (
    Network,
    NodeKind,
    NotFound,
    RefreshDaemon,
    SimClock,
    StoreNode,
    run_simulation,
)

network = Network(SimClock())
origin = network.add_node(StoreNode("origin", NodeKind.ORIGIN))
gateway = network.add_node(StoreNode("gateway", NodeKind.GATEWAY, ttl=1800))
pinner = network.add_node(StoreNode("pinner", NodeKind.PINNER))

cid = network.add(origin, b"the app bytes")
print(f"added content {cid.render()[:20]}... at the origin node")

print("\n--- failure mode: origin goes away, nobody ever requested the file ---")
origin.online = False
try:
    network.fetch(cid, gateway)
except NotFound:
    print("fetch: NOT FOUND - the whole network lost the file with its origin")
origin.online = True

print("\n--- mitigation 0: one user request caches the file at the gateway ---")
network.fetch(cid, gateway)
origin.online = False
network.clock.advance(900)
print(f"origin offline, 900 s later: fetch -> {network.fetch(cid, gateway)!r}")
network.clock.advance(2000)
network.gc_all()
try:
    network.fetch(cid, gateway)
except NotFound:
    print("but after the TTL + garbage collection: NOT FOUND again")

print("\n--- mitigation 1: refresh daemon re-requests before the TTL lapses ---")
origin.online = True
network.fetch(cid, gateway)
origin.online = False
daemon = RefreshDaemon(network, [cid], [gateway], period=600)
run_simulation(network, [daemon], until=network.clock.now() + 18_000)
print(f"10x TTL after origin loss: fetch -> {network.fetch(cid, gateway)!r}")

print("\n--- mitigation 2: consortium pinners hold permanent copies ---")
pinner.put(cid, network.retrieve(cid), network.clock.now(), pin=True)
gateway.online = False
network.clock.advance(10**6)
network.gc_all()
print(f"everything else offline, ages later: retrieve -> {network.retrieve(cid)!r}")
print("\npinned content is exempt from garbage collection, by definition.")
