from .patterns import (
    ChecksumSource,
    Direct,
    DownloadRule,
    ExtractionFailed,
    HtmlAttribute,
    HttpsRewrite,
    InDownloadUrl,
    InScriptBlock,
    MarketError,
    MarketPattern,
    NoChecksum,
    PatternMismatch,
    PatternRegistry,
    RewriteInapplicable,
    ScriptEmbedded,
    UrlEmbedded,
    https_rewrite,
    resolve_download_url,
)
from .retrieval import MarketClient, PatternMismatchError, RetrievalFailed
from .verify import (
    ChecksumSourceMissing,
    RetrievedApp,
    SecurityVerdict,
    VerdictChannel,
    classify_retrieval,
    extract_checksum,
    fallback_verify,
    verify_checksum,
)

__all__ = [
    "ChecksumSource",
    "ChecksumSourceMissing",
    "Direct",
    "DownloadRule",
    "ExtractionFailed",
    "HtmlAttribute",
    "HttpsRewrite",
    "InDownloadUrl",
    "InScriptBlock",
    "MarketClient",
    "MarketError",
    "MarketPattern",
    "NoChecksum",
    "PatternMismatch",
    "PatternMismatchError",
    "PatternRegistry",
    "RetrievalFailed",
    "RetrievedApp",
    "RewriteInapplicable",
    "ScriptEmbedded",
    "SecurityVerdict",
    "UrlEmbedded",
    "VerdictChannel",
    "classify_retrieval",
    "extract_checksum",
    "fallback_verify",
    "https_rewrite",
    "resolve_download_url",
    "verify_checksum",
]
