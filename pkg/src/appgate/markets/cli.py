"""Dry-run extraction and verification for one market page URL."""

from __future__ import annotations

import argparse
import hashlib
import sys

from .patterns import MarketError, PatternRegistry
from .retrieval import MarketClient
from .verify import classify_retrieval


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="market-connect")
    sub = parser.add_subparsers(dest="command", required=True)
    test = sub.add_parser("test", help="dry-run extraction and verification")
    test.add_argument("page_url")
    test.add_argument("--registry", required=True, help="pattern registry JSON")
    test.add_argument("--ca-bundle", default=None)
    args = parser.parse_args(argv)

    registry = PatternRegistry.load(args.registry)
    client = MarketClient(registry, ca_bundle=args.ca_bundle)
    try:
        app, pattern = client.retrieve(args.page_url)
    except MarketError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    verdict = classify_retrieval(app, pattern, cert_serial=0, known_apps=set(),
                                 known_developer_serials=set())
    print(f"market:       {pattern.market_id}")
    print(f"download URL: {app.download_url}")
    print(f"bytes:        {len(app.data)}")
    print(f"md5:          {hashlib.md5(app.data).hexdigest()}")
    print(f"declared:     {app.declared_checksum or '(none)'}")
    print(f"transport:    {'https' if app.transport_secure else 'http'}")
    print(f"verdict:      {verdict.channel.value}: {verdict.detail}")
    return 0 if not verdict.rejected else 2


if __name__ == "__main__":
    raise SystemExit(main())
