"""HTTP JSON API over the gateway, including the /ipfs/{cid} gateway shape."""

from __future__ import annotations

from fastapi import FastAPI, Header, HTTPException, Request, Response
from pydantic import BaseModel

from ..castore import (
    ContentId,
    IntegrityMismatch,
    NoGatewayReachable,
    NotFound,
)
from ..markets import MarketError
from ..registry import RegistryError
from .fees import FeeRejected
from .service import (
    AppGateway,
    Duplicate,
    NotOnChain,
    RetrievalFailed,
    SecurityRejected,
    UnknownMarket,
    record_to_dict,
)

_ERROR_CODES: list[tuple[type, int]] = [
    (UnknownMarket, 400),
    (RetrievalFailed, 502),
    (SecurityRejected, 422),
    (Duplicate, 409),
    (FeeRejected, 402),
    (NotOnChain, 404),
    (NotFound, 404),
    (NoGatewayReachable, 503),
    (IntegrityMismatch, 502),
    (MarketError, 502),
    (RegistryError, 500),
]


class UploadBody(BaseModel):
    pageUrl: str
    feeTxId: str | None = None


class WhitelistBody(BaseModel):
    action: str  # add | remove
    address: str


class SerialDbBody(BaseModel):
    package: str
    serialHex: str


def _http_error(exc: Exception) -> HTTPException:
    for err_type, code in _ERROR_CODES:
        if isinstance(exc, err_type):
            detail: dict = {"error": type(exc).__name__, "detail": str(exc)}
            if isinstance(exc, SecurityRejected):
                detail["verdict"] = {
                    "channel": exc.verdict.channel.value,
                    "detail": exc.verdict.detail,
                }
            if isinstance(exc, FeeRejected):
                detail["condition"] = exc.condition
            return HTTPException(status_code=code, detail=detail)
    return HTTPException(status_code=500, detail={"error": type(exc).__name__, "detail": str(exc)})


def create_api(gateway: AppGateway) -> FastAPI:
    app = FastAPI(title="app delegation gateway", version="0.1.0")

    @app.middleware("http")
    async def log_access(request: Request, call_next):
        gateway.access_log.append((request.method, request.url.path))
        return await call_next(request)

    def _admin(token: str | None) -> None:
        if token != gateway.config.admin_token:
            raise HTTPException(status_code=401, detail={"error": "BadAdminToken"})

    @app.post("/api/upload")
    def upload(body: UploadBody):
        fee_tx = bytes.fromhex(body.feeTxId.removeprefix("0x")) if body.feeTxId else None
        try:
            result = gateway.upload(body.pageUrl, fee_tx)
        except Exception as exc:
            raise _http_error(exc)
        return result.to_dict()

    @app.get("/api/apps")
    def list_apps(offset: int = 0, limit: int = 50):
        return [record_to_dict(r) for r in gateway.list_apps(offset, limit)]

    @app.get("/api/apps/{package}/{version}")
    def get_app(package: str, version: str):
        record = gateway.get_app(package, version)
        if record is None:
            raise HTTPException(status_code=404, detail={"error": "NotOnChain"})
        return record_to_dict(record)

    @app.get("/api/download/{package}/{version}")
    def download(package: str, version: str):
        try:
            cid, data, served_by = gateway.download(package, version)
        except Exception as exc:
            raise _http_error(exc)
        return Response(
            content=data,
            media_type="application/vnd.android.package-archive",
            headers={
                "X-Content-Id": cid.render(),
                "X-Served-By": served_by.name,
            },
        )

    @app.get("/api/estimate")
    def estimate(pageUrl: str):
        try:
            gas, fee = gateway.estimate_fee(pageUrl)
        except Exception as exc:
            raise _http_error(exc)
        return {"gas": gas, "feeWei": fee, "gasPriceWei": gateway.chain.gas_price}

    @app.get("/api/gateways")
    def gateways():
        return [g.to_dict() for g in gateway.probe_gateways()]

    @app.get("/ipfs/{cid}")
    def ipfs_fetch(cid: str):
        try:
            content = ContentId.parse(cid)
        except ValueError:
            raise HTTPException(status_code=400, detail={"error": "BadContentId"})
        try:
            data = gateway.network.retrieve(content)
        except Exception as exc:
            raise _http_error(exc)
        return Response(content=data, media_type="application/octet-stream")

    @app.head("/ipfs/{cid}")
    def ipfs_probe(cid: str):
        return Response(status_code=200)

    @app.post("/api/admin/whitelist")
    def admin_whitelist(body: WhitelistBody, x_admin_token: str | None = Header(None)):
        _admin(x_admin_token)
        from ..ledger import Address

        member = Address.from_hex(body.address)
        try:
            if body.action == "add":
                gateway.owner_client.whitelist_add(member)
            elif body.action == "remove":
                gateway.owner_client.whitelist_remove(member)
            else:
                raise HTTPException(status_code=400, detail={"error": "BadAction"})
        except RegistryError as exc:
            raise _http_error(exc)
        return {"ok": True, "whitelisted": gateway.registry.is_whitelisted(gateway.chain, member)}

    @app.post("/api/admin/serialdb")
    def admin_serialdb(body: SerialDbBody, x_admin_token: str | None = Header(None)):
        _admin(x_admin_token)
        serial = int(body.serialHex, 16)
        gateway.serial_db.add(body.package, serial)
        if gateway.config.serial_db:
            from ..apkcheck import SerialDb

            SerialDb.append_entry(gateway.config.serial_db, body.package, serial)
        return {"ok": True}

    @app.get("/api/admin/accesslog")
    def admin_accesslog(x_admin_token: str | None = Header(None)):
        _admin(x_admin_token)
        return [{"method": m, "path": p} for m, p in gateway.access_log]

    return app
