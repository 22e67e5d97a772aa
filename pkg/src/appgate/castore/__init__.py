from .content import ContentId
from .gateways import (
    GatewayInfo,
    NoGatewayReachable,
    http_prober,
    load_gateway_table,
    select_gateway,
    table_prober,
)
from .network import (
    Network,
    RefreshDaemon,
    SimClock,
    WallClock,
    consortium_sync,
    run_simulation,
)
from .node import (
    CacheEntry,
    CastoreError,
    DEFAULT_TTL,
    IntegrityMismatch,
    NodeKind,
    NodeOffline,
    NotFound,
    StoreNode,
)
from .scenario import ScenarioFailure, ScenarioRunner, run_scenario_file

__all__ = [
    "CacheEntry",
    "CastoreError",
    "ContentId",
    "DEFAULT_TTL",
    "GatewayInfo",
    "IntegrityMismatch",
    "Network",
    "NoGatewayReachable",
    "NodeKind",
    "NodeOffline",
    "NotFound",
    "RefreshDaemon",
    "ScenarioFailure",
    "ScenarioRunner",
    "SimClock",
    "StoreNode",
    "WallClock",
    "consortium_sync",
    "http_prober",
    "load_gateway_table",
    "run_scenario_file",
    "run_simulation",
    "select_gateway",
    "table_prober",
]
