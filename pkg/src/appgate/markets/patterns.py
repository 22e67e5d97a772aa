"""Per-market transition patterns: page URL -> download URL.

Each upstream market follows one fixed mechanism; the registry file
(documented in FORMATS.md) declares which.  Extraction never falls back
silently: a page URL either matches a registered pattern or the lookup
reports nothing.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import urljoin, urlsplit, urlunsplit


class MarketError(Exception):
    pass


class PatternMismatch(MarketError):
    pass


class ExtractionFailed(MarketError):
    """Page structure changed: the declared rule yields no URL."""


class RewriteInapplicable(MarketError):
    pass


# -- download-url rules -------------------------------------------------------


@dataclass(frozen=True)
class HtmlAttribute:
    """Take an attribute off the first matching element: ``a.download@href``."""

    selector: str
    kind = "htmlAttribute"


@dataclass(frozen=True)
class UrlEmbedded:
    """Derive the download URL from the page URL via match-group expansion."""

    replacement: str
    kind = "urlEmbedded"


@dataclass(frozen=True)
class ScriptEmbedded:
    """Read ``key = "..."`` out of a <script> data section."""

    key: str
    kind = "scriptEmbedded"


@dataclass(frozen=True)
class HttpsRewrite:
    """Extract an insecure URL, then upgrade scheme (and optionally host)."""

    selector: str
    host_map: dict[str, str] = field(default_factory=dict)
    kind = "httpsRewrite"


@dataclass(frozen=True)
class Direct:
    """The page URL itself points at the file, normalized to its raw form."""

    blob_to_raw: bool = True
    kind = "direct"


DownloadRule = HtmlAttribute | UrlEmbedded | ScriptEmbedded | HttpsRewrite | Direct


# -- checksum sources ---------------------------------------------------------


@dataclass(frozen=True)
class NoChecksum:
    kind = "none"


@dataclass(frozen=True)
class InDownloadUrl:
    kind = "inDownloadUrl"


@dataclass(frozen=True)
class InScriptBlock:
    key: str
    kind = "inScriptBlock"


ChecksumSource = NoChecksum | InDownloadUrl | InScriptBlock


@dataclass(frozen=True)
class MarketPattern:
    market_id: str
    page_url_pattern: str
    download_rule: DownloadRule
    checksum_source: ChecksumSource
    transport_secure: bool

    def matches(self, page_url: str) -> bool:
        return re.fullmatch(self.page_url_pattern, page_url) is not None


# -- registry file ------------------------------------------------------------

_RULE_TYPES = {
    "htmlAttribute": lambda d: HtmlAttribute(d["selector"]),
    "urlEmbedded": lambda d: UrlEmbedded(d["replacement"]),
    "scriptEmbedded": lambda d: ScriptEmbedded(d["key"]),
    "httpsRewrite": lambda d: HttpsRewrite(d["selector"], d.get("hostMap", {})),
    "direct": lambda d: Direct(d.get("blobToRaw", True)),
}

_SOURCE_TYPES = {
    "none": lambda d: NoChecksum(),
    "inDownloadUrl": lambda d: InDownloadUrl(),
    "inScriptBlock": lambda d: InScriptBlock(d["key"]),
}


def _rule_to_dict(rule: DownloadRule) -> dict:
    out: dict = {"kind": rule.kind}
    if isinstance(rule, HtmlAttribute):
        out["selector"] = rule.selector
    elif isinstance(rule, UrlEmbedded):
        out["replacement"] = rule.replacement
    elif isinstance(rule, ScriptEmbedded):
        out["key"] = rule.key
    elif isinstance(rule, HttpsRewrite):
        out["selector"] = rule.selector
        out["hostMap"] = dict(rule.host_map)
    elif isinstance(rule, Direct):
        out["blobToRaw"] = rule.blob_to_raw
    return out


def _source_to_dict(source: ChecksumSource) -> dict:
    out: dict = {"kind": source.kind}
    if isinstance(source, InScriptBlock):
        out["key"] = source.key
    return out


class PatternRegistry:
    def __init__(self, patterns: list[MarketPattern] | None = None):
        self.patterns = patterns or []

    def find(self, page_url: str) -> MarketPattern | None:
        for pattern in self.patterns:
            if pattern.matches(page_url):
                return pattern
        return None

    def by_id(self, market_id: str) -> MarketPattern | None:
        for pattern in self.patterns:
            if pattern.market_id == market_id:
                return pattern
        return None

    @classmethod
    def load(cls, path: str | Path) -> "PatternRegistry":
        doc = json.loads(Path(path).read_text())
        patterns = []
        for entry in doc["markets"]:
            rule_doc = entry["downloadUrlRule"]
            source_doc = entry.get("checksumSource", {"kind": "none"})
            patterns.append(
                MarketPattern(
                    market_id=entry["marketId"],
                    page_url_pattern=entry["pageUrlPattern"],
                    download_rule=_RULE_TYPES[rule_doc["kind"]](rule_doc),
                    checksum_source=_SOURCE_TYPES[source_doc["kind"]](source_doc),
                    transport_secure=entry["transportSecure"],
                )
            )
        return cls(patterns)

    def save(self, path: str | Path) -> None:
        doc = {
            "markets": [
                {
                    "marketId": p.market_id,
                    "pageUrlPattern": p.page_url_pattern,
                    "downloadUrlRule": _rule_to_dict(p.download_rule),
                    "checksumSource": _source_to_dict(p.checksum_source),
                    "transportSecure": p.transport_secure,
                }
                for p in self.patterns
            ]
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")


# -- html extraction ----------------------------------------------------------


class _AttrFinder(HTMLParser):
    def __init__(self, tag: str, klass: str | None, elem_id: str | None, attr: str):
        super().__init__()
        self.tag, self.klass, self.elem_id, self.attr = tag, klass, elem_id, attr
        self.found: str | None = None

    def handle_starttag(self, tag, attrs):
        if self.found is not None or tag != self.tag:
            return
        attr_map = dict(attrs)
        if self.klass and self.klass not in (attr_map.get("class") or "").split():
            return
        if self.elem_id and attr_map.get("id") != self.elem_id:
            return
        value = attr_map.get(self.attr)
        if value:
            self.found = value


def _parse_selector(selector: str) -> tuple[str, str | None, str | None, str]:
    """``tag[.class|#id]@attr`` -> (tag, class, id, attr)."""
    head, _, attr = selector.partition("@")
    if not attr:
        raise ValueError(f"selector {selector!r} lacks @attr")
    if "." in head:
        tag, _, klass = head.partition(".")
        return tag, klass, None, attr
    if "#" in head:
        tag, _, elem_id = head.partition("#")
        return tag, None, elem_id, attr
    return head, None, None, attr


def extract_html_attribute(page_html: bytes, selector: str, base_url: str) -> str:
    tag, klass, elem_id, attr = _parse_selector(selector)
    finder = _AttrFinder(tag, klass, elem_id, attr)
    finder.feed(page_html.decode("utf-8", errors="replace"))
    if finder.found is None:
        raise ExtractionFailed(f"no element matches {selector!r}")
    return urljoin(base_url, finder.found)


class _ScriptCollector(HTMLParser):
    def __init__(self):
        super().__init__()
        self._in_script = False
        self.blocks: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "script":
            self._in_script = True
            self.blocks.append("")

    def handle_endtag(self, tag):
        if tag == "script":
            self._in_script = False

    def handle_data(self, data):
        if self._in_script:
            self.blocks[-1] += data


def extract_script_value(page_html: bytes, key: str) -> str | None:
    collector = _ScriptCollector()
    collector.feed(page_html.decode("utf-8", errors="replace"))
    pattern = re.compile(
        rf"{re.escape(key)}\s*[:=]\s*[\"']([^\"']+)[\"']"
    )
    for block in collector.blocks:
        match = pattern.search(block)
        if match:
            return match.group(1)
    return None


# -- the operations -----------------------------------------------------------


def resolve_download_url(
    pattern: MarketPattern, page_html: bytes, page_url: str
) -> str:
    """Absolute download URL per the market's declared rule."""
    match = re.fullmatch(pattern.page_url_pattern, page_url)
    if match is None:
        raise PatternMismatch(f"{page_url} does not match {pattern.market_id}")
    rule = pattern.download_rule
    if isinstance(rule, HtmlAttribute):
        return extract_html_attribute(page_html, rule.selector, page_url)
    if isinstance(rule, UrlEmbedded):
        return match.expand(rule.replacement)
    if isinstance(rule, ScriptEmbedded):
        value = extract_script_value(page_html, rule.key)
        if value is None:
            raise ExtractionFailed(f"script key {rule.key!r} not found")
        return urljoin(page_url, value)
    if isinstance(rule, HttpsRewrite):
        return extract_html_attribute(page_html, rule.selector, page_url)
    if isinstance(rule, Direct):
        if rule.blob_to_raw and "/blob/" in page_url:
            return page_url.replace("/blob/", "/raw/", 1)
        return page_url
    raise ExtractionFailed(f"unhandled rule {rule!r}")


def https_rewrite(pattern: MarketPattern, download_url: str) -> str:
    """Upgrade an insecure download URL per the market's rewrite rule.

    Idempotent on already-secure input.
    """
    if not isinstance(pattern.download_rule, HttpsRewrite):
        raise RewriteInapplicable(f"{pattern.market_id} declares no rewrite rule")
    parts = urlsplit(download_url)
    netloc = pattern.download_rule.host_map.get(parts.netloc, parts.netloc)
    return urlunsplit(("https", netloc, parts.path, parts.query, parts.fragment))
