"""WebSocket transport for sessions, plus a tiny static file server.

One Session per connection, speaking the newline-JSON protocol on the /ws
path.  Plain HTTP requests on other paths serve the playground assets (when
a static directory is given) and /catalog.json.  Run loops are paced by
steps_per_second; if the socket cannot keep up, state snapshots are skipped
for overdue steps but reports always go out.
"""

from __future__ import annotations

import asyncio
import json
import mimetypes
import pathlib
import signal

from websockets.asyncio.server import serve as ws_serve
from websockets.datastructures import Headers
from websockets.exceptions import ConnectionClosed
from websockets.http11 import Response

from .catalog import catalog_json
from .session import Session


def _http_response(status: int, content_type: str, body: bytes) -> Response:
    headers = Headers([("Content-Type", content_type),
                       ("Content-Length", str(len(body)))])
    reasons = {200: "OK", 404: "Not Found"}
    return Response(status, reasons.get(status, ""), headers, body)


def _process_request(static_dir: pathlib.Path | None):
    def handler(connection, request):
        path = request.path.split("?", 1)[0]
        if path == "/ws":
            return None  # continue the websocket handshake
        if path == "/catalog.json":
            return _http_response(200, "application/json",
                                  catalog_json().encode())
        if static_dir is None:
            return _http_response(404, "text/plain", b"no static assets\n")
        rel = path.lstrip("/") or "index.html"
        target = (static_dir / rel).resolve()
        if not str(target).startswith(str(static_dir.resolve())) or not target.is_file():
            return _http_response(404, "text/plain", b"not found\n")
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return _http_response(200, ctype, target.read_bytes())

    return handler


async def _send_events(ws, events: list[dict]) -> None:
    for event in events:
        await ws.send(json.dumps(event, sort_keys=True))


async def _connection(ws) -> None:
    session = Session()
    loop = asyncio.get_running_loop()
    recv_task = asyncio.create_task(ws.recv())
    next_due = loop.time()
    try:
        while True:
            if session.running:
                now = loop.time()
                interval = 1.0 / session.rate
                timeout = max(0.0, next_due - now)
            else:
                timeout = None
            done, _ = await asyncio.wait({recv_task}, timeout=timeout)
            if recv_task in done:
                try:
                    message = recv_task.result()
                except ConnectionClosed:
                    break
                was_running = session.running
                await _send_events(ws, session.handle_message(message))
                if session.running and not was_running:
                    next_due = loop.time()
                recv_task = asyncio.create_task(ws.recv())
                continue
            # timer fired: run one engine step; drop the state snapshot when
            # we are more than two intervals behind
            now = loop.time()
            lagging = now - next_due > 2.0 * interval
            await _send_events(ws, session.tick(suppress_state=lagging))
            next_due = max(next_due + interval, now - interval)
    finally:
        recv_task.cancel()


async def serve(host: str, port: int, static_dir: str | None = None):
    static = pathlib.Path(static_dir) if static_dir else None
    stop = asyncio.get_running_loop().create_future()

    def request_stop(*_args) -> None:
        if not stop.done():
            stop.set_result(None)

    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        try:
            loop.add_signal_handler(sig, request_stop)
        except (NotImplementedError, RuntimeError):
            pass
    async with ws_serve(_connection, host, port,
                        process_request=_process_request(static)):
        await stop


def main(host: str, port: int, static_dir: str | None = None) -> int:
    try:
        asyncio.run(serve(host, port, static_dir))
    except OSError as exc:  # bind failure
        print(f"serve: {exc}")
        return 1
    return 0
