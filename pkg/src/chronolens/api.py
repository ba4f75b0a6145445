"""HTTP surface of the archive.

Endpoints are thin: each one reads the currently published snapshot once,
delegates to a payload builder in the service module, and relies on a shared
exception handler to map archive errors onto HTTP statuses with
machine-readable bodies.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import ChronolensError, InvalidParameter
from .service import (
    DATA_ENV_VAR,
    Archive,
    api_entity,
    api_network,
    api_quotes,
    api_search,
    api_stats,
    parse_span,
)

# HTTP status per machine-readable error code; unlisted codes fall back to 400.
_STATUS = {
    "empty_query": 400,
    "malformed_input": 400,
    "malformed_timestamp": 400,
    "unknown_entity": 404,
    "invalid_span": 422,
    "invalid_parameter": 422,
}


def default_data_dir() -> Path:
    return Path(os.environ.get(DATA_ENV_VAR, "chronolens-data"))


def create_app(data_dir=None, static_dir=None) -> FastAPI:
    """Build the application around one Archive instance.

    static_dir, when given and present, is mounted at / so the built web UI
    can be served by the same process.
    """
    archive = Archive(Path(data_dir) if data_dir else default_data_dir())
    app = FastAPI(title="chronolens")
    app.state.archive = archive

    @app.exception_handler(ChronolensError)
    async def archive_error(request: Request, exc: ChronolensError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 400),
            content={"code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def parameter_error(request: Request, exc: RequestValidationError):
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        return JSONResponse(
            status_code=422, content={"code": "invalid_parameter", "message": detail}
        )

    @app.get("/api/search")
    def search(
        q: str = "",
        from_: str | None = Query(None, alias="from"),
        to: str | None = None,
        limit: int = 10,
    ):
        if limit < 1:
            raise InvalidParameter("limit must be >= 1")
        return api_search(archive.snapshot(), q, parse_span(from_, to), limit)

    @app.get("/api/entity/{entity_id}")
    def entity(
        entity_id: str,
        from_: str | None = Query(None, alias="from"),
        to: str | None = None,
        granularity: str = "month",
    ):
        return api_entity(archive.snapshot(), entity_id, parse_span(from_, to), granularity)

    @app.get("/api/entity/{entity_id}/quotes")
    def quotes(
        entity_id: str,
        from_: str | None = Query(None, alias="from"),
        to: str | None = None,
    ):
        return api_quotes(archive.snapshot(), entity_id, parse_span(from_, to))

    @app.get("/api/network")
    def network(
        entity_id: str | None = None,
        from_: str | None = Query(None, alias="from"),
        to: str | None = None,
        max_nodes: int | None = None,
        layout: bool = False,
    ):
        if max_nodes is not None and max_nodes < 1:
            raise InvalidParameter("max_nodes must be >= 1")
        return api_network(archive.snapshot(), entity_id, parse_span(from_, to), max_nodes, layout)

    @app.post("/api/ingest")
    async def ingest(request: Request):
        body = await request.body()
        return archive.ingest(body).to_json()

    @app.get("/api/stats")
    def stats():
        return api_stats(archive.snapshot())

    if static_dir is not None:
        static = Path(static_dir)
        if static.is_dir():
            app.mount("/", StaticFiles(directory=static, html=True), name="ui")

    return app
