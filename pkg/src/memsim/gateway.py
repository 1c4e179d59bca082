"""HTTP gateway: a thin adapter over the session engine.

Adds transport, routing, and telemetry decimation only; every behavior is
the engine's. Streaming uses server-sent events (one `event:` name plus a
JSON `data:` payload per frame) so any browser client can consume it.
"""
from __future__ import annotations

import json
import os
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse

from .attack import AttackConfig
from .config import ValidationError, attack_from_dict, from_dict, to_dict
from .host import DEFAULT_DECIMATION, HostRegistry, IllegalTransition
from .logio import EXPORT_FORMATS, export_log
from .metrics import ReferenceMismatch, compute_metrics
from .session import LifecycleError, SessionState

READABLE_STATES = (SessionState.PAUSED, SessionState.COMPLETED,
                   SessionState.FAULTED)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def _validation_error(exc: ValidationError) -> JSONResponse:
    return JSONResponse(status_code=422, content={
        "error": "validation failed",
        "violations": [{"field": f, "message": m} for f, m in exc.violations],
    })


def create_app(registry: HostRegistry | None = None,
               ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="memsim gateway", docs_url=None, redoc_url=None)
    app.state.registry = registry or HostRegistry()

    def get_host(session_id: int):
        return app.state.registry.get(session_id)

    @app.post("/sessions")
    async def create_session(request: Request):
        try:
            body = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            return _error(400, f"malformed JSON: {exc}")
        try:
            cfg = from_dict(body).require_valid()
        except ValidationError as exc:
            return _validation_error(exc)
        host = app.state.registry.create(cfg)
        return JSONResponse(status_code=201, content={
            "id": host.session.id,
            "config": to_dict(cfg),
        })

    @app.get("/sessions")
    def list_sessions():
        return [h.view() for h in app.state.registry.all()]

    @app.get("/sessions/{session_id}")
    def get_session(session_id: int):
        try:
            return get_host(session_id).view()
        except KeyError:
            return _error(404, f"no session {session_id}")

    @app.post("/sessions/{session_id}/command")
    async def session_command(session_id: int, request: Request):
        try:
            body = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            return _error(400, f"malformed JSON: {exc}")
        command = body.get("command")
        try:
            host = get_host(session_id)
        except KeyError:
            return _error(404, f"no session {session_id}")
        try:
            if command == "start":
                pace = body.get("pace", 1.0)
                if not isinstance(pace, (int, float)) or pace < 0:
                    return _error(422, "pace must be a number >= 0")
                result = host.start(pace=float(pace))
            elif command == "pause":
                result = host.pause()
            elif command == "reset":
                result = host.reset()
            else:
                return _error(422, f"unknown command {command!r}")
        except (IllegalTransition, LifecycleError) as exc:
            return _error(409, str(exc))
        return {"id": session_id, **result}

    @app.post("/sessions/{session_id}/attack")
    async def apply_attack(session_id: int, request: Request):
        try:
            body = json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            return _error(400, f"malformed JSON: {exc}")
        try:
            host = get_host(session_id)
        except KeyError:
            return _error(404, f"no session {session_id}")
        try:
            cfg: AttackConfig = attack_from_dict(body)
            result = host.apply_attack(cfg)
        except ValidationError as exc:
            return _validation_error(exc)
        except (IllegalTransition, LifecycleError) as exc:
            return _error(409, str(exc))
        return {"id": session_id, **result}

    @app.get("/sessions/{session_id}/telemetry")
    def stream_telemetry(session_id: int,
                         decimation: int = DEFAULT_DECIMATION):
        try:
            host = get_host(session_id)
        except KeyError:
            return _error(404, f"no session {session_id}")
        if decimation < 1:
            return _error(422, "decimation must be >= 1")

        def frames():
            for name, payload in host.telemetry(decimation=decimation):
                yield f"event: {name}\ndata: {json.dumps(payload, separators=(',', ':'))}\n\n"

        return StreamingResponse(frames(), media_type="text/event-stream",
                                 headers={"Cache-Control": "no-store"})

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: int, reference: Optional[int] = None):
        try:
            host = get_host(session_id)
        except KeyError:
            return _error(404, f"no session {session_id}")
        if host.session.state not in READABLE_STATES:
            return _error(409, "metrics require a paused or completed session")
        ref_log = None
        if reference is not None:
            try:
                ref_host = get_host(reference)
            except KeyError:
                return _error(404, f"no reference session {reference}")
            if ref_host.session.state not in READABLE_STATES:
                return _error(409, "reference session is still running")
            ref_log = ref_host.session.log
        try:
            report = compute_metrics(host.session.log, reference=ref_log)
        except ReferenceMismatch as exc:
            return _error(422, str(exc))
        except ValueError as exc:
            return _error(409, str(exc))
        return report.to_dict()

    @app.get("/sessions/{session_id}/log")
    def download_log(session_id: int, format: str = "csv"):
        try:
            host = get_host(session_id)
        except KeyError:
            return _error(404, f"no session {session_id}")
        if host.session.state == SessionState.RUNNING:
            return _error(409, "pause or complete the session first")
        if format not in EXPORT_FORMATS:
            return _error(422, f"unknown format {format!r}")
        payload = export_log(host.session.log, format)
        media = "text/csv" if format == "csv" else "application/json"
        return Response(content=payload, media_type=media, headers={
            "Content-Disposition":
                f'attachment; filename="session-{session_id}.{format}"'})

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def main() -> None:
    """Serve the gateway; port from MEMSIM_PORT, loopback by default."""
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="memsim gateway server")
    parser.add_argument("--host", default="127.0.0.1",
                        help="bind address (loopback unless exposed on purpose)")
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("MEMSIM_PORT", "8377")))
    parser.add_argument("--ui", default=None,
                        help="directory of built dashboard assets to serve")
    args = parser.parse_args()
    uvicorn.run(create_app(ui_dir=args.ui), host=args.host, port=args.port,
                log_level="warning")


if __name__ == "__main__":
    main()
