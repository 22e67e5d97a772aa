"""HTTP retrieval of market pages and app files."""

from __future__ import annotations

import requests
from requests.adapters import HTTPAdapter

from .patterns import (
    Direct,
    HttpsRewrite,
    MarketError,
    MarketPattern,
    PatternRegistry,
    https_rewrite,
    resolve_download_url,
)
from .verify import RetrievedApp, extract_checksum


class RetrievalFailed(MarketError):
    pass


class MarketClient:
    """Shared session with a per-host connection cap."""

    def __init__(
        self,
        registry: PatternRegistry,
        ca_bundle: str | None = None,
        per_host_connections: int = 4,
        timeout: float = 15.0,
    ):
        self.registry = registry
        self.timeout = timeout
        self.session = requests.Session()
        adapter = HTTPAdapter(
            pool_connections=8, pool_maxsize=per_host_connections, pool_block=True
        )
        self.session.mount("http://", adapter)
        self.session.mount("https://", adapter)
        if ca_bundle:
            self.session.verify = ca_bundle

    def _get(self, url: str) -> bytes:
        try:
            response = self.session.get(url, timeout=self.timeout)
            response.raise_for_status()
        except requests.RequestException as exc:
            raise RetrievalFailed(f"GET {url}: {exc}") from exc
        return response.content

    def fetch_page(self, page_url: str) -> bytes:
        return self._get(page_url)

    def retrieve(self, page_url: str) -> tuple[RetrievedApp, MarketPattern]:
        """Resolve, download, and package one app retrieval.

        Raises PatternMismatch / ExtractionFailed / ChecksumSourceMissing /
        RetrievalFailed; UnknownMarket handling belongs to the caller, who
        decides what an unregistered URL means.
        """
        pattern = self.registry.find(page_url)
        if pattern is None:
            raise PatternMismatchError(page_url)
        # direct-rule pages are the file itself; everything else needs HTML
        page_html = b""
        if not isinstance(pattern.download_rule, Direct):
            page_html = self.fetch_page(page_url)
        download_url = resolve_download_url(pattern, page_html, page_url)
        if isinstance(pattern.download_rule, HttpsRewrite):
            download_url = https_rewrite(pattern, download_url)
        declared = extract_checksum(pattern, page_html, download_url)
        data = self._get(download_url)
        if not data:
            raise RetrievalFailed(f"{download_url} served an empty body")
        return (
            RetrievedApp(
                data=data,
                origin_page_url=page_url,
                download_url=download_url,
                declared_checksum=declared,
                transport_secure=download_url.startswith("https:"),
            ),
            pattern,
        )


class PatternMismatchError(MarketError):
    """No registered market pattern matches this page URL."""

    def __init__(self, page_url: str):
        super().__init__(f"no registered market matches {page_url}")
        self.page_url = page_url
