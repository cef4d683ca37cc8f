"""Live feedback session: an engine instance driven by a simulated clock.

Accumulates screen/call events and keypress activity, and when the
simulated clock passes a sampling-period boundary computes that period's
usage factor with the same rules as batch replay, advances the engine, and
yields the new temperature message.

Replay classifies an interval by its total duration (glance vs. sustained
use). A live session cannot always do that exactly at a boundary: an
interval still open there may yet turn out to be either. Boundary
processing is therefore deferred while any such fragment is younger than
the notification threshold; it resolves within one threshold's worth of
simulated time, and the emitted sequence then matches replay on the same
events.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import (
    EngineParams,
    EngineState,
    Palette,
    Quantizer,
    TemperatureMessage,
    advance_period,
    default_palette,
    level_phrase,
    make_quantizer,
)
from .ingest import (
    ActiveInterval,
    EventKind,
    PeriodGrid,
    RawEvent,
    call_intervals,
    interval_period_contribution_ms,
    normalize_events,
    screen_intervals,
    subtract_calls,
)

KEYPRESS_GRACE_MS = 2000  # simulated ms of screen activity per keypress


@dataclass(frozen=True)
class SessionSnapshot:
    """Read-only view of a session."""

    current_message: TemperatureMessage | None
    overall_usage: float
    next_period_index: int
    origin_ms: int
    sim_now_ms: int
    params: EngineParams


class FeedbackSession:
    """Single owner of the live engine state.

    All mutators take or imply simulated time in milliseconds; callers are
    expected to serialize access (the HTTP service does so with a lock).
    """

    def __init__(self, params: EngineParams, origin_ms: int = 0):
        self.params = params
        self.quantizer: Quantizer = make_quantizer(
            params.level_count, params.strictness
        )
        self.palette: Palette = default_palette(params.level_count)
        self._grid = PeriodGrid(origin_ms, params.sampling_period_ms)
        self._state = EngineState()
        self._events: list[RawEvent] = []
        self._keywindows: list[list[int]] = []  # merged [start, end) spans
        self._current: TemperatureMessage | None = None
        self._sim_now = origin_ms

    @property
    def sim_now_ms(self) -> int:
        return self._sim_now

    @property
    def next_boundary_ms(self) -> int:
        """End of the period the session is currently accumulating."""
        return self._grid.period_start_ms(self._state.next_period_index + 1)

    @property
    def current_period_end_ms(self) -> int:
        """End of the grid period containing the simulated clock.

        Differs from next_boundary_ms while a boundary is deferred; event
        admission is judged against simulated time, not engine progress.
        """
        elapsed = max(self._sim_now - self._grid.origin_ms, 0)
        period = elapsed // self._grid.period_ms
        return self._grid.period_start_ms(period + 1)

    def ingest_event(self, event: RawEvent) -> None:
        """Fold one screen/call event into the session.

        Duplicate events are harmless: normalization drops them.
        """
        self._events.append(event)

    def keypress(self, at_ms: int) -> None:
        """Record typing as screen activity covering the keypress instant
        plus a short grace window; keypresses within the window merge."""
        if self._keywindows and at_ms <= self._keywindows[-1][1]:
            last = self._keywindows[-1]
            if at_ms >= last[0]:
                last[1] = max(last[1], at_ms + KEYPRESS_GRACE_MS)
                return
        self._keywindows.append([at_ms, at_ms + KEYPRESS_GRACE_MS])
        self._keywindows.sort()
        merged: list[list[int]] = []
        for span in self._keywindows:
            if merged and span[0] <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], span[1])
            else:
                merged.append(span)
        self._keywindows = merged

    def _activity(self, horizon_ms: int) -> tuple[list[ActiveInterval], set[int]]:
        """Call-excluded activity fragments as of the horizon, plus the set
        of fragment end values that may still move right."""
        normalized = normalize_events(self._events)
        # Accepted events may sit slightly ahead of the clock (anywhere in
        # the current period); never close an open interval before them.
        event_horizon = horizon_ms
        if self._events:
            event_horizon = max(
                event_horizon, max(e.timestamp_ms for e in self._events)
            )
        screen = screen_intervals(normalized, event_horizon)
        calls = call_intervals(normalized, event_horizon)
        screen_open = False
        for event in normalized:
            if event.kind is EventKind.SCREEN_ON:
                screen_open = True
            elif event.kind is EventKind.SCREEN_OFF:
                screen_open = False
        extendable: set[int] = set()
        if screen_open:
            extendable.add(event_horizon)
        spans = [(iv.start_ms, iv.end_ms) for iv in screen]
        for start, end in self._keywindows:
            spans.append((start, end))
            if end >= horizon_ms:
                extendable.add(end)
        spans.sort()
        merged: list[ActiveInterval] = []
        for start, end in spans:
            if merged and start <= merged[-1].end_ms:
                if end > merged[-1].end_ms:
                    merged[-1] = ActiveInterval(merged[-1].start_ms, end)
            else:
                merged.append(ActiveInterval(start, end))
        return subtract_calls(merged, calls), extendable

    def advance_to(self, sim_now_ms: int) -> list[TemperatureMessage]:
        """Move simulated time forward, emitting one message per period
        boundary that passes and resolves."""
        if sim_now_ms > self._sim_now:
            self._sim_now = sim_now_ms
        messages: list[TemperatureMessage] = []
        threshold = self.params.notification_threshold_ms
        while True:
            period = self._state.next_period_index
            boundary = self._grid.period_start_ms(period + 1)
            if boundary > self._sim_now:
                break
            fragments, extendable = self._activity(self._sim_now)
            period_start = self._grid.period_start_ms(period)
            unresolved = any(
                f.end_ms > period_start
                and f.start_ms < boundary
                and f.end_ms in extendable
                and f.duration_ms < threshold
                for f in fragments
            )
            if unresolved:
                break
            total = sum(
                interval_period_contribution_ms(f, self._grid, self.params, period)
                for f in fragments
            )
            u = min(total / self.params.sampling_period_ms, 1.0)
            self._state, message = advance_period(
                self._state, u, self.params, self.quantizer, self.palette
            )
            self._current = message
            messages.append(message)
        return messages

    def snapshot(self) -> SessionSnapshot:
        return SessionSnapshot(
            current_message=self._current,
            overall_usage=self._state.overall_usage,
            next_period_index=self._state.next_period_index,
            origin_ms=self._grid.origin_ms,
            sim_now_ms=self._sim_now,
            params=self.params,
        )

    def reset(self) -> TemperatureMessage:
        """Return the engine to a cold start, re-anchoring the period grid
        at the current simulated time, and produce the minimal-temperature
        message to broadcast."""
        self._grid = PeriodGrid(self._sim_now, self.params.sampling_period_ms)
        self._state = EngineState()
        self._events.clear()
        self._keywindows.clear()
        self._current = TemperatureMessage(
            period_index=0,
            level=0,
            color=self.palette.colors[0],
            phrase=level_phrase(0, self.params.level_count),
        )
        return self._current
