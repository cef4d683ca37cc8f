"""Event-log ingestion.

Parses newline-delimited JSON screen/call events, normalizes malformed
streams, derives call-excluded active intervals, and credits corrected
durations to sampling periods. All interval arithmetic is exact integer
milliseconds.

Log format: one JSON object per line, {"t": <integer ms>, "kind":
"screen_on" | "screen_off" | "call_start" | "call_end"}; lines starting
with '#' are comments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .engine import EngineParams, PeriodSample, correct_duration


class EventKind(Enum):
    SCREEN_ON = "screen_on"
    SCREEN_OFF = "screen_off"
    CALL_START = "call_start"
    CALL_END = "call_end"


class LogParseError(ValueError):
    """Malformed event-log line; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class GridRangeError(ValueError):
    """An interval falls outside the period grid under consideration."""


@dataclass(frozen=True)
class RawEvent:
    timestamp_ms: int
    kind: EventKind

    def __post_init__(self) -> None:
        if self.timestamp_ms < 0:
            raise ValueError("timestamp_ms must be >= 0")


@dataclass(frozen=True)
class ActiveInterval:
    """Half-open span [start_ms, end_ms) of screen activity."""

    start_ms: int
    end_ms: int

    def __post_init__(self) -> None:
        if self.start_ms >= self.end_ms:
            raise ValueError("interval must have start_ms < end_ms")

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


@dataclass(frozen=True)
class PeriodGrid:
    """Sampling-period timeline: period n covers
    [origin_ms + n * period_ms, origin_ms + (n + 1) * period_ms)."""

    origin_ms: int
    period_ms: int

    def __post_init__(self) -> None:
        if self.period_ms <= 0:
            raise ValueError("period_ms must be > 0")

    def period_start_ms(self, n: int) -> int:
        return self.origin_ms + n * self.period_ms

    def period_of(self, timestamp_ms: int) -> int:
        return (timestamp_ms - self.origin_ms) // self.period_ms


def parse_event_log(text: str) -> list[RawEvent]:
    """Parse an event log into events, in input order.

    Raises LogParseError (with the offending line number) on malformed JSON,
    unknown kinds, or invalid timestamps. Blank lines and '#' comments are
    skipped.
    """
    events: list[RawEvent] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            record = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise LogParseError(line_no, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise LogParseError(line_no, "expected a JSON object")
        t = record.get("t")
        if not isinstance(t, int) or isinstance(t, bool):
            raise LogParseError(line_no, "'t' must be an integer millisecond count")
        if t < 0:
            raise LogParseError(line_no, "'t' must be >= 0")
        kind_text = record.get("kind")
        try:
            kind = EventKind(kind_text)
        except ValueError:
            raise LogParseError(line_no, f"unknown kind {kind_text!r}") from None
        events.append(RawEvent(t, kind))
    return events


_CHANNELS = {
    EventKind.SCREEN_ON: ("screen", True),
    EventKind.SCREEN_OFF: ("screen", False),
    EventKind.CALL_START: ("call", True),
    EventKind.CALL_END: ("call", False),
}


def normalize_events(events: list[RawEvent]) -> list[RawEvent]:
    """Sort events chronologically (stable) and drop mismatched ones.

    Per channel (screen, call): a repeated open keeps the first and drops
    the rest; a close without a matching open is dropped. Idempotent.
    """
    ordered = sorted(events, key=lambda e: e.timestamp_ms)
    open_state = {"screen": False, "call": False}
    kept: list[RawEvent] = []
    for event in ordered:
        channel, opens = _CHANNELS[event.kind]
        if opens == open_state[channel]:
            continue
        open_state[channel] = opens
        kept.append(event)
    return kept


def _pair_intervals(
    events: list[RawEvent],
    on_kind: EventKind,
    off_kind: EventKind,
    horizon_ms: int,
) -> list[ActiveInterval]:
    intervals: list[ActiveInterval] = []
    open_at: int | None = None
    for event in events:
        if event.timestamp_ms > horizon_ms:
            raise ValueError("event timestamp beyond horizon_ms")
        if event.kind is on_kind and open_at is None:
            open_at = event.timestamp_ms
        elif event.kind is off_kind and open_at is not None:
            if event.timestamp_ms > open_at:
                intervals.append(ActiveInterval(open_at, event.timestamp_ms))
            open_at = None
    if open_at is not None and horizon_ms > open_at:
        intervals.append(ActiveInterval(open_at, horizon_ms))
    return intervals


def screen_intervals(
    events: list[RawEvent], horizon_ms: int
) -> list[ActiveInterval]:
    """Screen-on intervals from a normalized event list, one per on/off
    pair; a trailing unmatched on closes at the horizon."""
    return _pair_intervals(
        events, EventKind.SCREEN_ON, EventKind.SCREEN_OFF, horizon_ms
    )


def call_intervals(events: list[RawEvent], horizon_ms: int) -> list[ActiveInterval]:
    """In-call intervals, paired the same way as screen intervals."""
    return _pair_intervals(
        events, EventKind.CALL_START, EventKind.CALL_END, horizon_ms
    )


def _merge(intervals: list[ActiveInterval]) -> list[tuple[int, int]]:
    """Coalesce sorted intervals that touch or overlap into maximal spans."""
    merged: list[list[int]] = []
    for iv in intervals:
        if merged and iv.start_ms <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], iv.end_ms)
        else:
            merged.append([iv.start_ms, iv.end_ms])
    return [(a, b) for a, b in merged]


def subtract_calls(
    screen: list[ActiveInterval], calls: list[ActiveInterval]
) -> list[ActiveInterval]:
    """Set difference screen \\ calls as maximal disjoint intervals.

    Inputs must be sorted and disjoint (touching endpoints are fine);
    zero-length fragments are dropped.
    """
    result: list[ActiveInterval] = []
    call_spans = _merge(calls)
    ci = 0
    for start, end in _merge(screen):
        cursor = start
        while ci < len(call_spans) and call_spans[ci][1] <= cursor:
            ci += 1
        cj = ci
        while cj < len(call_spans) and call_spans[cj][0] < end:
            c_start, c_end = call_spans[cj]
            if cursor < c_start:
                result.append(ActiveInterval(cursor, c_start))
            cursor = max(cursor, c_end)
            cj += 1
        if cursor < end:
            result.append(ActiveInterval(cursor, end))
    return result


def interval_period_contribution_ms(
    interval: ActiveInterval,
    grid: PeriodGrid,
    params: EngineParams,
    period_index: int,
) -> int:
    """Usage credited by one active interval to one sampling period.

    An interval shorter than the notification threshold is a glance: its
    corrected duration goes entirely to the period containing its start. A
    longer interval is split at period boundaries, each period receiving
    the actual overlap.
    """
    if interval.duration_ms < params.notification_threshold_ms:
        if grid.period_of(interval.start_ms) == period_index:
            return correct_duration(interval.duration_ms, params)
        return 0
    lo = max(interval.start_ms, grid.period_start_ms(period_index))
    hi = min(interval.end_ms, grid.period_start_ms(period_index + 1))
    return max(hi - lo, 0)


def assign_to_periods(
    active: list[ActiveInterval],
    grid: PeriodGrid,
    params: EngineParams,
    last_period: int,
) -> list[PeriodSample]:
    """Per-period usage factors for periods 0..last_period inclusive.

    Zero-usage periods are emitted too, so the downstream filter can cool.
    Raises GridRangeError if an interval falls outside the grid span.
    """
    if last_period < 0:
        raise ValueError("last_period must be >= 0")
    if grid.period_ms != params.sampling_period_ms:
        raise ValueError("grid period does not match params.sampling_period_s")
    end_limit = grid.period_start_ms(last_period + 1)
    totals = [0] * (last_period + 1)
    for iv in active:
        if iv.start_ms < grid.origin_ms or iv.end_ms > end_limit:
            raise GridRangeError(
                f"interval [{iv.start_ms}, {iv.end_ms}) outside grid range "
                f"[{grid.origin_ms}, {end_limit})"
            )
        for p in range(grid.period_of(iv.start_ms), grid.period_of(iv.end_ms - 1) + 1):
            totals[p] += interval_period_contribution_ms(iv, grid, params, p)
    period_ms = params.sampling_period_ms
    return [
        PeriodSample(n, min(total / period_ms, 1.0))
        for n, total in enumerate(totals)
    ]


def default_origin_ms(events: list[RawEvent], period_ms: int) -> int:
    """Default grid origin: the first event's timestamp truncated down to a
    whole period multiple of the epoch; 0 for an empty log."""
    if not events:
        return 0
    first = min(e.timestamp_ms for e in events)
    return (first // period_ms) * period_ms
