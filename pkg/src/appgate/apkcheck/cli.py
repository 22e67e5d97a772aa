"""Inspect command: print what the parser extracts from an archive."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .apk import ApkError, parse_apk
from .der import MalformedDer


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="apkcheck")
    sub = parser.add_subparsers(dest="command", required=True)
    inspect = sub.add_parser("inspect", help="print package, version, and cert serial")
    inspect.add_argument("file", type=Path)
    args = parser.parse_args(argv)

    try:
        summary = parse_apk(args.file.read_bytes())
    except (ApkError, MalformedDer) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(f"package:     {summary.package_name}")
    print(f"versionName: {summary.version_name}")
    print(f"certSerial:  0x{summary.cert_serial:x}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
