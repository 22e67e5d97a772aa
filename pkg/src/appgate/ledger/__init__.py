from .bloom import BLOOM_BITS, Bloom2048, bloom_indices
from .chain import (
    Chain,
    ContractExecutor,
    ExecutionContext,
    NoopExecutor,
    ScanStats,
    DEFAULT_GAS_PRICE,
)
from .codec import BlockFile, CodecError, encode_block, decode_block, encode_tx
from .types import (
    Address,
    BadNonce,
    Block,
    GasSchedule,
    InsufficientBalance,
    LedgerError,
    LogEntry,
    RangeOutOfBounds,
    Receipt,
    Reverted,
    Transaction,
    TxStatus,
)

__all__ = [
    "Address",
    "BadNonce",
    "Block",
    "BlockFile",
    "BLOOM_BITS",
    "Bloom2048",
    "bloom_indices",
    "Chain",
    "CodecError",
    "ContractExecutor",
    "DEFAULT_GAS_PRICE",
    "ExecutionContext",
    "GasSchedule",
    "InsufficientBalance",
    "LedgerError",
    "LogEntry",
    "NoopExecutor",
    "RangeOutOfBounds",
    "Receipt",
    "Reverted",
    "ScanStats",
    "Transaction",
    "TxStatus",
    "decode_block",
    "encode_block",
    "encode_tx",
]
