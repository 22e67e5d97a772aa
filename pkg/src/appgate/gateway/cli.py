"""Operator CLI: serve the API, drive uploads/downloads, run the benches."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..ledger import Address, Transaction
from ..registry import donate_calldata
from .bench import run_gas_bench, run_timing_bench
from .config import GatewayConfig
from .service import AppGateway


def _load_gateway(args, clock: str = "wall") -> AppGateway:
    config = GatewayConfig.load(args.config)
    return AppGateway(config, clock=clock)


def cmd_init(args) -> int:
    config = GatewayConfig(data_dir=Path(args.data_dir))
    config.save(args.config)
    print(f"wrote sample config to {args.config}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_api

    gateway = _load_gateway(args)
    app = create_api(gateway)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_upload(args) -> int:
    gateway = _load_gateway(args)
    fee_tx = bytes.fromhex(args.fee_tx.removeprefix("0x")) if args.fee_tx else None
    result = gateway.upload(args.page_url, fee_tx)
    print(json.dumps(result.to_dict(), indent=2))
    gateway.close()
    return 0


def cmd_download(args) -> int:
    gateway = _load_gateway(args)
    cid, data, served_by = gateway.download(args.package, args.version)
    out = Path(args.output or f"{args.package}-{args.version}.apk")
    out.write_bytes(data)
    print(f"{cid.render()} ({len(data)} bytes) via {served_by.name} -> {out}")
    gateway.close()
    return 0


def cmd_estimate(args) -> int:
    gateway = _load_gateway(args)
    gas, fee = gateway.estimate_fee(args.page_url)
    print(json.dumps({"gas": gas, "feeWei": fee, "gasPriceWei": gateway.chain.gas_price}))
    gateway.close()
    return 0


def cmd_donate(args) -> int:
    gateway = _load_gateway(args)
    sender = Address.from_hex(args.sender)
    tx = Transaction(
        sender,
        gateway.config.registry_addr,
        args.value,
        donate_calldata(),
        gateway.chain.nonce(sender),
    )
    receipt = gateway.chain.submit(tx, gateway.registry)
    print(json.dumps({"txId": "0x" + receipt.tx_id.hex(), "gasUsed": receipt.gas_used}))
    gateway.close()
    return 0


def cmd_sync(args) -> int:
    gateway = _load_gateway(args)
    outcomes = gateway.sync_pinner()
    for cid, outcome in outcomes.items():
        print(f"{cid}\t{outcome}")
    print(f"{sum(1 for o in outcomes.values() if o == 'pinned')} newly pinned")
    gateway.close()
    return 0


def cmd_refresh(args) -> int:
    gateway = _load_gateway(args)
    gateway.run_refresh_cycle()
    failures = gateway.refresh_daemon.failures
    print(f"refresh cycle complete; {len(failures)} gateway failures")
    gateway.close()
    return 0


def cmd_whitelist(args) -> int:
    gateway = _load_gateway(args)
    member = Address.from_hex(args.address)
    if args.action == "add":
        gateway.owner_client.whitelist_add(member)
    else:
        gateway.owner_client.whitelist_remove(member)
    print(f"{args.action}: {member.hex()}")
    gateway.close()
    return 0


def cmd_serialdb_import(args) -> int:
    from ..apkcheck import build_serial_db

    gateway = _load_gateway(args)
    apks = [p.read_bytes() for p in sorted(Path(args.directory).glob("*.apk"))]
    db = build_serial_db(apks)
    for package, serials in db.entries.items():
        for serial in serials:
            gateway.serial_db.add(package, serial)
    if gateway.config.serial_db:
        gateway.serial_db.save(gateway.config.serial_db)
    print(f"imported {len(apks)} archives, {len(db)} packages")
    gateway.close()
    return 0


def cmd_bench_gas(args) -> int:
    report = run_gas_bench()
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_bench_timing(args) -> int:
    gateway = _load_gateway(args)
    if not args.page_urls:
        print("bench timing needs at least one page URL", file=sys.stderr)
        return 1
    report = run_timing_bench(gateway, args.page_urls)
    print(json.dumps(report.to_dict(), indent=2))
    gateway.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="appgate")
    parser.add_argument("--config", default="appgate.json", help="config file path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="write a sample config")
    p.add_argument("--data-dir", default="data")
    p.set_defaults(fn=cmd_init)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("upload", help="delegate one app upload")
    p.add_argument("page_url")
    p.add_argument("--fee-tx", default=None)
    p.set_defaults(fn=cmd_upload)

    p = sub.add_parser("download", help="download by package + version")
    p.add_argument("package")
    p.add_argument("version")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_download)

    p = sub.add_parser("estimate", help="estimate upload gas and fee")
    p.add_argument("page_url")
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("donate", help="send an upload-fee donation")
    p.add_argument("value", type=int)
    p.add_argument("--sender", default="0x" + "0d" * 20)
    p.set_defaults(fn=cmd_donate)

    p = sub.add_parser("sync", help="pin all on-chain content at the pinner node")
    p.set_defaults(fn=cmd_sync)

    p = sub.add_parser("refresh", help="run one gateway refresh cycle")
    p.set_defaults(fn=cmd_refresh)

    p = sub.add_parser("whitelist", help="manage the upload whitelist")
    p.add_argument("action", choices=["add", "remove"])
    p.add_argument("address")
    p.set_defaults(fn=cmd_whitelist)

    p = sub.add_parser("serialdb", help="serial database maintenance")
    serialdb_sub = p.add_subparsers(dest="serialdb_command", required=True)
    imp = serialdb_sub.add_parser("import", help="import official archives from a directory")
    imp.add_argument("directory")
    imp.set_defaults(fn=cmd_serialdb_import)

    p = sub.add_parser("bench", help="measurement harnesses")
    bench_sub = p.add_subparsers(dest="bench_command", required=True)
    gas = bench_sub.add_parser("gas", help="storage-design gas comparison")
    gas.set_defaults(fn=cmd_bench_gas)
    timing = bench_sub.add_parser("timing", help="per-phase upload timing")
    timing.add_argument("page_urls", nargs="*")
    timing.set_defaults(fn=cmd_bench_timing)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
