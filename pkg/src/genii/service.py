"""HTTP render service.

Endpoints:

* ``POST /render``   — gene + data in, SVG out. The response carries an
  ``X-Genii-Hash`` header (sha256 of the body) so clients can verify the
  byte-determinism promise without downloading twice.
* ``POST /validate`` — 200 verdict for any well-formed request, listing every
  schema violation at once; only a malformed body (not-JSON, missing gene) is 400.
* ``GET /paths``     — the path-mode catalogue with parameter hints.
* ``POST/GET /genes`` and ``PATCH /genes/{id}`` — a small persistent library
  of saved designs (see :mod:`genii.store`).

Schema problems are 400 with a field path; geometrically unrenderable input
is 422. CORS is wide open because the builder UI runs on its own origin.
"""

from __future__ import annotations

import json
import os

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .data import Dataset, parse_dataset
from .errors import GeniiError, SchemaError
from .gene import Gene, parse_gene
from .generators import PATH_CATALOGUE
from .render import RenderOptions, render, render_hash
from .store import GeneStore

__all__ = ["create_app", "app", "DEFAULT_ADDR"]

DEFAULT_ADDR = "127.0.0.1:8765"


def _as_bytes(value) -> bytes:
    if isinstance(value, str):
        return value.encode("utf-8")
    return json.dumps(value).encode("utf-8")


def _schema_response(err: SchemaError, prefix: str = "") -> JSONResponse:
    errors = err.errors or [(err.path, err.message)]
    return JSONResponse(
        status_code=400,
        content={
            "error": {
                "path": (prefix + errors[0][0]).rstrip("."),
                "message": errors[0][1],
                "errors": [
                    {"path": (prefix + p).rstrip("."), "message": m} for p, m in errors
                ],
            }
        },
    )


def _gene_from(payload: dict) -> Gene:
    if "gene" not in payload:
        raise SchemaError("gene", "missing field")
    return parse_gene(_as_bytes(payload["gene"]))


def _dataset_from(payload: dict) -> Dataset:
    if "data" not in payload or payload["data"] is None:
        return Dataset()
    return parse_dataset(_as_bytes(payload["data"]))


def _options_from(payload: dict) -> RenderOptions:
    raw = payload.get("options") or {}
    if not isinstance(raw, dict):
        raise SchemaError("options", "must be an object")
    dpi = raw.get("dpi")
    if dpi is not None and (not isinstance(dpi, (int, float)) or dpi <= 0):
        raise SchemaError("options.dpi", "must be a positive number")
    background = raw.get("background")
    if background is not None and not isinstance(background, str):
        raise SchemaError("options.background", "must be a colour string")
    debug = bool(raw.get("debugPath", False))
    return RenderOptions(dpi=dpi, background=background, emit_debug_path=debug)


def create_app(store_path: str | None = None) -> FastAPI:
    app = FastAPI(title="genii render service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Genii-Hash"],
    )
    store = GeneStore(
        store_path or os.environ.get("GENII_STORE") or "genii_store.jsonl"
    )
    app.state.store = store

    @app.get("/health")
    def health():
        return {"status": "ok", "service": "genii", "version": "0.1.0"}

    @app.post("/render")
    async def render_endpoint(request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _schema_response(SchemaError("", f"body is not valid JSON: {exc}"))
        if not isinstance(payload, dict):
            return _schema_response(SchemaError("", "body must be a JSON object"))
        try:
            gene = _gene_from(payload)
        except SchemaError as exc:
            return _schema_response(exc, prefix="gene." if exc.path != "gene" else "")
        try:
            dataset = _dataset_from(payload)
        except SchemaError as exc:
            return _schema_response(exc, prefix="data.")
        try:
            options = _options_from(payload)
        except SchemaError as exc:
            return _schema_response(exc)
        try:
            svg = render(gene, dataset, options)
        except SchemaError as exc:
            return _schema_response(exc)
        except GeniiError as exc:
            return JSONResponse(
                status_code=422,
                content={"error": {"kind": type(exc).__name__, "message": str(exc)}},
            )
        return Response(
            content=svg,
            media_type="image/svg+xml",
            headers={"X-Genii-Hash": render_hash(svg)},
        )

    @app.post("/validate")
    async def validate_endpoint(request: Request):
        # body-shape problems are 400; a well-formed request always gets a
        # 200 verdict, however broken the gene inside it is
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _schema_response(SchemaError("", f"body is not valid JSON: {exc}"))
        if not isinstance(payload, dict) or "gene" not in payload:
            return _schema_response(SchemaError("gene", "missing field"))
        try:
            parse_gene(_as_bytes(payload["gene"]))
        except SchemaError as exc:
            errors = exc.errors or [(exc.path, exc.message)]
            return {"valid": False,
                    "errors": [{"path": p, "message": m} for p, m in errors]}
        return {"valid": True, "errors": []}

    @app.get("/paths")
    def paths_endpoint():
        return {
            "paths": [
                {"mode": mode, **info} for mode, info in PATH_CATALOGUE.items()
            ]
        }

    @app.post("/genes", status_code=201)
    async def create_gene(request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _schema_response(SchemaError("", f"body is not valid JSON: {exc}"))
        if not isinstance(payload, dict) or "gene" not in payload:
            return _schema_response(SchemaError("gene", "missing field"))
        try:
            rec = store.create(_as_bytes(payload["gene"]))
        except SchemaError as exc:
            return _schema_response(exc, prefix="gene." if exc.path != "gene" else "")
        return rec.to_json()

    @app.get("/genes")
    def list_genes():
        return {"genes": [rec.to_json() for rec in store.list()]}

    @app.get("/genes/{record_id}")
    def get_gene(record_id: str):
        rec = store.get(record_id)
        if rec is None:
            return JSONResponse(status_code=404,
                                content={"error": {"message": "unknown gene id"}})
        return rec.to_json()

    @app.patch("/genes/{record_id}")
    async def patch_gene(record_id: str, request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError as exc:
            return _schema_response(SchemaError("", f"body is not valid JSON: {exc}"))
        if not isinstance(payload, dict) or not isinstance(payload.get("liked"), bool):
            return _schema_response(SchemaError("liked", "must be a boolean"))
        rec = store.set_liked(record_id, payload["liked"])
        if rec is None:
            return JSONResponse(status_code=404,
                                content={"error": {"message": "unknown gene id"}})
        return rec.to_json()

    return app


app = create_app()
