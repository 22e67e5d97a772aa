from .records import (
    AppRecord,
    EVENT_SIGNATURE,
    EVENT_TOPIC,
    MalformedRecord,
    RepackVerdict,
    decode_record,
    encode_record,
    identity_topic,
)
from .contract import (
    AppRegistry,
    BatchTooLarge,
    DuplicateRecord,
    EmptyBatch,
    MAX_BATCH,
    NotOwner,
    NotWhitelisted,
    RegistryClient,
    RegistryError,
    ZeroValue,
    baseline_calldata,
    donate_calldata,
    find_record,
    store_calldata,
    stored_records,
    whitelist_calldata,
)

__all__ = [
    "AppRecord",
    "AppRegistry",
    "BatchTooLarge",
    "DuplicateRecord",
    "EVENT_SIGNATURE",
    "EVENT_TOPIC",
    "EmptyBatch",
    "MAX_BATCH",
    "MalformedRecord",
    "NotOwner",
    "NotWhitelisted",
    "RegistryClient",
    "RegistryError",
    "RepackVerdict",
    "ZeroValue",
    "baseline_calldata",
    "decode_record",
    "donate_calldata",
    "encode_record",
    "find_record",
    "identity_topic",
    "store_calldata",
    "stored_records",
    "whitelist_calldata",
]
