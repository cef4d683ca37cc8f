"""HTTP feedback service.

Owns one live session on a scaled clock (time_scale simulated seconds per
wall second), accepts usage events and keypresses, and broadcasts each new
temperature message to all subscribers over Server-Sent Events, both as
structured JSON and as the 12-byte wire payload in hex.

Intake, ticks, and resets are serialized through one asyncio lock; stream
subscribers each drain a private queue, so a slow reader never blocks the
session.
"""

from __future__ import annotations

import asyncio
import json
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import AsyncIterator, Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .codec import encode, payload_hex
from .engine import EngineParams, TemperatureMessage
from .ingest import EventKind, RawEvent
from .session import FeedbackSession

TICK_INTERVAL_S = 0.05  # wall-clock cadence of the background tick loop
HEARTBEAT_S = 0.5  # SSE keep-alive comment cadence


@dataclass
class ServiceConfig:
    params: EngineParams = field(default_factory=EngineParams)
    time_scale: float = 60.0  # one wall second = one simulated minute
    host: str = "127.0.0.1"
    port: int = 8600
    ui_dir: str | None = None

    def __post_init__(self) -> None:
        if self.time_scale <= 0:
            raise ValueError("time_scale must be > 0")


def params_json(params: EngineParams) -> dict:
    return {
        "sampling_period_s": params.sampling_period_s,
        "notification_correction_s": params.notification_correction_s,
        "notification_threshold_s": params.notification_threshold_s,
        "alpha": params.alpha,
        "strictness": params.strictness,
        "level_count": params.level_count,
    }


def message_json(message: TemperatureMessage) -> dict:
    return {
        "period_index": message.period_index,
        "level": message.level,
        "color": list(message.color),
        "phrase": message.phrase,
        "payload_hex": payload_hex(encode(message)),
    }


class _Hub:
    """Fan-out of published messages to subscriber queues."""

    def __init__(self) -> None:
        self._queues: dict[int, asyncio.Queue] = {}
        self._next_id = 0
        self.latest: dict | None = None

    def subscribe(self) -> tuple[int, asyncio.Queue]:
        self._next_id += 1
        queue: asyncio.Queue = asyncio.Queue()
        self._queues[self._next_id] = queue
        return self._next_id, queue

    def unsubscribe(self, subscriber_id: int) -> None:
        self._queues.pop(subscriber_id, None)

    def publish(self, payload: dict) -> None:
        self.latest = payload
        for queue in self._queues.values():
            queue.put_nowait(payload)


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse({"detail": detail}, status_code=400)


def create_app(
    config: ServiceConfig, clock: Callable[[], float] | None = None
) -> FastAPI:
    """Build the service app.

    clock is a wall-seconds source (default time.monotonic); tests inject a
    fake one to drive the simulated clock deterministically.
    """
    wall_clock = clock or time.monotonic
    session = FeedbackSession(config.params)
    hub = _Hub()
    lock = asyncio.Lock()
    wall_origin = wall_clock()

    def sim_now_ms() -> int:
        return int((wall_clock() - wall_origin) * config.time_scale * 1000)

    async def advance() -> None:
        """Catch the session up to the simulated clock and broadcast any
        messages for boundaries that passed."""
        async with lock:
            for message in session.advance_to(sim_now_ms()):
                hub.publish(message_json(message))

    @asynccontextmanager
    async def lifespan(app: FastAPI) -> AsyncIterator[None]:
        async def tick_loop() -> None:
            while True:
                await advance()
                await asyncio.sleep(TICK_INTERVAL_S)

        task = asyncio.create_task(tick_loop())
        try:
            yield
        finally:
            task.cancel()

    app = FastAPI(title="heatkbd feedback service", lifespan=lifespan)

    @app.post("/events")
    async def post_event(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _bad_request("body must be a JSON object")
        if not isinstance(body, dict):
            return _bad_request("body must be a JSON object")
        t = body.get("t")
        if not isinstance(t, int) or isinstance(t, bool) or t < 0:
            return _bad_request("'t' must be a non-negative integer millisecond count")
        try:
            kind = EventKind(body.get("kind"))
        except ValueError:
            return _bad_request(f"unknown kind {body.get('kind')!r}")
        await advance()
        async with lock:
            if t >= session.current_period_end_ms:
                return _bad_request("event timestamp lies in a future period")
            session.ingest_event(RawEvent(t, kind))
        await advance()
        return {"status": "ok"}

    @app.post("/keypress")
    async def post_keypress():
        await advance()
        async with lock:
            session.keypress(sim_now_ms())
        return {"status": "ok"}

    @app.post("/reset")
    async def post_reset():
        await advance()
        async with lock:
            message = session.reset()
            hub.publish(message_json(message))
        return {"status": "ok"}

    @app.get("/state")
    async def get_state():
        await advance()
        snap = session.snapshot()
        current = snap.current_message
        return {
            "current_message": message_json(current) if current else None,
            "overall_usage": snap.overall_usage,
            "next_period_index": snap.next_period_index,
            "origin_ms": snap.origin_ms,
            "sim_now_ms": snap.sim_now_ms,
            "params": params_json(snap.params),
        }

    @app.get("/config")
    async def get_config():
        return {
            "params": params_json(config.params),
            "time_scale": config.time_scale,
            "listen": {"host": config.host, "port": config.port},
        }

    @app.get("/stream")
    async def get_stream():
        async def event_stream() -> AsyncIterator[str]:
            await advance()
            async with lock:
                subscriber_id, queue = hub.subscribe()
                current = hub.latest
            try:
                if current is not None:
                    yield f"data: {json.dumps(current)}\n\n"
                while True:
                    try:
                        payload = await asyncio.wait_for(queue.get(), HEARTBEAT_S)
                    except asyncio.TimeoutError:
                        yield ": keep-alive\n\n"
                        continue
                    yield f"data: {json.dumps(payload)}\n\n"
            finally:
                hub.unsubscribe(subscriber_id)

        return StreamingResponse(
            event_stream(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig, clock: Callable[[], float] | None = None) -> None:
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    app = create_app(config, clock)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
