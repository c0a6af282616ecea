"""Live scoring and recording over WebSocket connections.

One connection is one session with its own calibration and state; sessions
are fully independent and may run concurrently. Inbound messages are
processed strictly in arrival order through a per-connection queue, so a
client outpacing the frame budget sees frames queue rather than drop; the
current queue depth rides along in each report's timing fields.

A malformed inbound message is answered with a structured error and the
session continues as if it never arrived.
"""

from __future__ import annotations

import asyncio
import time
from datetime import datetime, timezone

from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from .config import EngineConfig
from .engine import SessionEngine
from .errors import PoiseError
from .replay import SessionRecorder
from .landmarks import validate_stream_order
from . import wire


async def _scoring_session(websocket, config: EngineConfig) -> None:
    engine = SessionEngine(config)
    queue: asyncio.Queue[str | None] = asyncio.Queue()

    async def reader():
        try:
            async for raw in websocket:
                await queue.put(raw)
        except ConnectionClosed:
            pass
        finally:
            await queue.put(None)

    reader_task = asyncio.create_task(reader())
    try:
        while True:
            raw = await queue.get()
            if raw is None:
                break
            depth = queue.qsize()
            start = time.perf_counter_ns()
            try:
                msg_type, obj = wire.decode_message(raw)
                if msg_type == wire.END:
                    try:
                        await websocket.send(wire.summary_line(engine.summary()))
                    except PoiseError as e:
                        await websocket.send(wire.error_line(e))
                    break
                frame = wire.decode_frame(obj)
                report = engine.process(frame)
            except PoiseError as e:
                await websocket.send(wire.error_line(e))
                continue
            if report is not None:
                processing_us = (time.perf_counter_ns() - start) // 1000
                await websocket.send(
                    wire.report_line(report, processing_us=processing_us, queue_depth=depth)
                )
    except ConnectionClosed:
        pass
    finally:
        reader_task.cancel()


async def _recording_session(websocket, recorder: SessionRecorder, done: asyncio.Event) -> None:
    prev_t: int | None = None
    try:
        async for raw in websocket:
            try:
                msg_type, obj = wire.decode_message(raw)
                if msg_type == wire.END:
                    await websocket.send(wire.end_line())
                    break
                frame = wire.decode_frame(obj)
                validate_stream_order(prev_t, frame)
                prev_t = frame.t_ms
                recorder.add(frame)
            except PoiseError as e:
                await websocket.send(wire.error_line(e))
    except ConnectionClosed:
        pass
    finally:
        recorder.close()
        done.set()


class ScoringServer:
    """Async WebSocket server wrapping the scoring engine.

    Use as an async context manager; ``port`` reports the bound port (useful
    with port 0 in tests).
    """

    def __init__(self, config: EngineConfig, host: str = "127.0.0.1", port: int = 8765):
        self.config = config
        self.host = host
        self._requested_port = port
        self._server = None

    @property
    def port(self) -> int:
        sockets = self._server.sockets if self._server else ()
        if not sockets:
            raise RuntimeError("server is not running")
        return sockets[0].getsockname()[1]

    async def __aenter__(self) -> "ScoringServer":
        self._server = await ws_serve(
            lambda ws: _scoring_session(ws, self.config),
            self.host,
            self._requested_port,
        )
        return self

    async def __aexit__(self, *exc) -> None:
        self._server.close()
        await self._server.wait_closed()
        self._server = None

    async def serve_forever(self) -> None:
        await asyncio.get_running_loop().create_future()


async def serve(config: EngineConfig, host: str, port: int) -> None:
    """Run the scoring service until cancelled."""
    async with ScoringServer(config, host, port) as server:
        await server.serve_forever()


class RecordServer:
    """Accepts a single inbound session and persists it to a session file.

    The file is finalized when the client sends ``end`` or disconnects;
    extra concurrent connections are refused (one output file, one session).
    """

    def __init__(self, out_path: str, host: str = "127.0.0.1", port: int = 8765,
                 source: str = "live"):
        self.out_path = out_path
        self.host = host
        self._requested_port = port
        self.source = source
        self._server = None
        self._recorder: SessionRecorder | None = None
        self._done = asyncio.Event()
        self._busy = False

    @property
    def port(self) -> int:
        sockets = self._server.sockets if self._server else ()
        if not sockets:
            raise RuntimeError("server is not running")
        return sockets[0].getsockname()[1]

    async def _handler(self, websocket) -> None:
        if self._busy:
            await websocket.send(
                wire.error_line("SessionBusy", "recorder accepts one connection")
            )
            await websocket.close()
            return
        self._busy = True
        await _recording_session(websocket, self._recorder, self._done)

    async def __aenter__(self) -> "RecordServer":
        self._recorder = SessionRecorder(
            self.out_path,
            source=self.source,
            started_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        self._server = await ws_serve(self._handler, self.host, self._requested_port)
        return self

    async def __aexit__(self, *exc) -> None:
        self._server.close()
        await self._server.wait_closed()
        self._recorder.close()
        self._server = None

    async def wait(self) -> int:
        """Block until the session ends; returns frames written."""
        await self._done.wait()
        return self._recorder.frames_written


async def record(out_path: str, host: str, port: int, source: str = "live") -> int:
    """Record one inbound session to a file; returns frames written."""
    async with RecordServer(out_path, host, port, source=source) as server:
        return await server.wait()
