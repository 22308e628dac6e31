"""Websocket front end: one ASGI app around a Hub, plus the blocking runner.

Each client speaks the JSON wire protocol over a websocket at /ws. Every
connection gets an outbound queue; the hub enqueues synchronously (under
its lock) and a writer task drains the queue, so per-room broadcast
order survives the async boundary. With a UI directory configured, the
same port serves the static bundle over plain HTTP.
"""

from __future__ import annotations

import asyncio
import contextlib
import socket
import logging

import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from starlette.staticfiles import StaticFiles

from .errors import BindFailure
from .hub import Hub, ServerConfig
from . import wire

logger = logging.getLogger(__name__)

_CLOSE = object()


def build_app(hub: Hub, ui_dir: str | None = None) -> FastAPI:
    @contextlib.asynccontextmanager
    async def lifespan(_app: FastAPI):
        async def reaper():
            while True:
                await asyncio.sleep(hub.config.heartbeat_interval)
                hub.reap()

        task = asyncio.create_task(reaper())
        try:
            yield
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task

    app = FastAPI(lifespan=lifespan)

    @app.websocket("/ws")
    async def websocket_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        queue: asyncio.Queue = asyncio.Queue()
        conn_id = hub.connect(send=queue.put_nowait, close=lambda: queue.put_nowait(_CLOSE))

        async def writer() -> None:
            while True:
                doc = await queue.get()
                if doc is _CLOSE:
                    with contextlib.suppress(RuntimeError):
                        await ws.close()
                    return
                await ws.send_text(wire.encode(doc))

        writer_task = asyncio.create_task(writer())
        try:
            while True:
                text = await ws.receive_text()
                hub.receive(conn_id, text)
        except WebSocketDisconnect:
            pass
        finally:
            hub.disconnect(conn_id)
            writer_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await writer_task

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def bind_socket(config: ServerConfig) -> socket.socket:
    try:
        return socket.create_server((config.bind, config.port))
    except OSError as exc:
        raise BindFailure(f"cannot bind {config.bind}:{config.port}: {exc}") from exc


def serve(config: ServerConfig, hub: Hub | None = None) -> None:
    """Run until interrupted. Raises BindFailure if the port is taken."""
    hub = hub or Hub(config)
    app = build_app(hub, config.ui_dir)
    sock = bind_socket(config)
    host, port = sock.getsockname()[:2]
    print(f"sortlab server listening on {host}:{port} (websocket path /ws)", flush=True)
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])
