from .config import GatewayConfig
from .fees import FeeRejected, FeeTicket, FeeTickets
from .service import (
    AppGateway,
    Duplicate,
    GatewayError,
    NotOnChain,
    RetrievalFailed,
    SecurityRejected,
    UnknownMarket,
    UploadResult,
    record_to_dict,
)
from .bench import (
    GasBenchReport,
    TimingReport,
    fee_reference_record,
    market_records,
    run_gas_bench,
    run_timing_bench,
    uniform_records,
)

__all__ = [
    "AppGateway",
    "Duplicate",
    "FeeRejected",
    "FeeTicket",
    "FeeTickets",
    "GasBenchReport",
    "GatewayConfig",
    "GatewayError",
    "NotOnChain",
    "RetrievalFailed",
    "SecurityRejected",
    "TimingReport",
    "UnknownMarket",
    "UploadResult",
    "fee_reference_record",
    "market_records",
    "record_to_dict",
    "run_gas_bench",
    "run_timing_bench",
    "uniform_records",
]
