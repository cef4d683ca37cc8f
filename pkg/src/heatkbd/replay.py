"""Deterministic replay of event logs and synthetic scenario generation.

Replaying pipes a parsed log through ingestion and the engine and emits one
timeline record per sampling period. Scenario generation produces seeded
event logs for the bundled demo shapes.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass

from .engine import (
    EngineParams,
    EngineState,
    Palette,
    Quantizer,
    TemperatureMessage,
    advance_period,
    default_palette,
    make_quantizer,
)
from .ingest import (
    PeriodGrid,
    RawEvent,
    assign_to_periods,
    call_intervals,
    default_origin_ms,
    normalize_events,
    parse_event_log,
    screen_intervals,
    subtract_calls,
)

SCENARIOS = ("typical-day", "uninterrupted", "idle", "notification-storm")

# Scenario shape constants (illustrative demo values, in simulated seconds).
STORM_MEAN_GAP_S = 90  # mean gap between notification glances
STORM_GLANCE_S = (2, 10)  # glance duration range; stays below the threshold
DAY_QUIET_GAP_S = (900, 2400)  # gap between morning/evening glances
DAY_BURST_USE_S = (240, 1200)  # midday sustained-use block
DAY_BURST_GAP_S = (60, 600)  # pause between midday blocks

_HORIZON_RE = re.compile(r"^#\s*horizon_ms\s*=\s*(\d+)\s*$")


@dataclass(frozen=True)
class TimelineRecord:
    """One sampling period of the replayed pipeline."""

    period_index: int
    period_start_ms: int
    usage_factor: float
    overall_usage: float
    level: int
    color: tuple[int, int, int]
    phrase: str


def scan_horizon_comment(text: str) -> int | None:
    """Horizon marker from a '# horizon_ms=N' comment line, if present."""
    for line in text.splitlines():
        match = _HORIZON_RE.match(line.strip())
        if match:
            return int(match.group(1))
    return None


def last_period_for_horizon(grid: PeriodGrid, horizon_ms: int) -> int:
    """Index of the last period touched by the half-open span
    [origin, horizon); at least 0."""
    if horizon_ms <= grid.origin_ms:
        return 0
    return (horizon_ms - grid.origin_ms - 1) // grid.period_ms


def replay_events(
    events: list[RawEvent],
    params: EngineParams,
    grid: PeriodGrid,
    horizon_ms: int,
) -> list[TimelineRecord]:
    """Run parsed events through ingestion and the engine.

    Emits one record per period from 0 through the last period touched by
    the horizon. Deterministic: identical inputs give identical records.
    """
    normalized = normalize_events(events)
    active = subtract_calls(
        screen_intervals(normalized, horizon_ms),
        call_intervals(normalized, horizon_ms),
    )
    last_period = last_period_for_horizon(grid, horizon_ms)
    samples = assign_to_periods(active, grid, params, last_period)
    quantizer = make_quantizer(params.level_count, params.strictness)
    palette = default_palette(params.level_count)
    state = EngineState()
    records: list[TimelineRecord] = []
    for sample in samples:
        state, message = advance_period(
            state, sample.usage_factor, params, quantizer, palette
        )
        records.append(
            TimelineRecord(
                period_index=sample.period_index,
                period_start_ms=grid.period_start_ms(sample.period_index),
                usage_factor=sample.usage_factor,
                overall_usage=state.overall_usage,
                level=message.level,
                color=message.color,
                phrase=message.phrase,
            )
        )
    return records


def run_replay(
    log_text: str,
    params: EngineParams,
    origin_ms: int | None = None,
    horizon_ms: int | None = None,
) -> list[TimelineRecord]:
    """Replay a raw event log.

    The grid origin defaults to the first event's timestamp truncated to a
    whole period. The horizon defaults to a '# horizon_ms=N' marker in the
    log or, failing that, the last event timestamp.
    """
    events = parse_event_log(log_text)
    period_ms = params.sampling_period_ms
    if origin_ms is None:
        origin_ms = default_origin_ms(events, period_ms)
    grid = PeriodGrid(origin_ms, period_ms)
    candidates = [origin_ms]
    if horizon_ms is not None:
        candidates.append(horizon_ms)
    else:
        marker = scan_horizon_comment(log_text)
        if marker is not None:
            candidates.append(marker)
    candidates.extend(e.timestamp_ms for e in events)
    return replay_events(events, params, grid, max(candidates))


def record_message(record: TimelineRecord) -> TemperatureMessage:
    """The temperature message a record corresponds to."""
    return TemperatureMessage(
        period_index=record.period_index,
        level=record.level,
        color=record.color,
        phrase=record.phrase,
    )


def _sig6(x: float) -> float:
    """Round to the 6 significant digits used by both output formats."""
    return float(format(x, ".6g"))


def _color_hex(color: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)


def to_csv(records: list[TimelineRecord]) -> str:
    lines = ["period,start_ms,u,y,level,color_hex,phrase"]
    for r in records:
        lines.append(
            f"{r.period_index},{r.period_start_ms},"
            f"{format(r.usage_factor, '.6g')},{format(r.overall_usage, '.6g')},"
            f"{r.level},{_color_hex(r.color)},{r.phrase}"
        )
    return "\n".join(lines) + "\n"


def to_jsonl(records: list[TimelineRecord]) -> str:
    lines = []
    for r in records:
        lines.append(
            json.dumps(
                {
                    "period": r.period_index,
                    "start_ms": r.period_start_ms,
                    "u": _sig6(r.usage_factor),
                    "y": _sig6(r.overall_usage),
                    "level": r.level,
                    "color_hex": _color_hex(r.color),
                    "phrase": r.phrase,
                }
            )
        )
    return "\n".join(lines) + "\n"


def _emit(events: list[tuple[int, str]], horizon_ms: int, header: str) -> str:
    lines = [f"# {header}", f"# horizon_ms={horizon_ms}"]
    for t, kind in sorted(events):
        lines.append(json.dumps({"t": t, "kind": kind}))
    return "\n".join(lines) + "\n"


def _glance(rng: random.Random, at_s: int) -> list[tuple[int, str]]:
    dur = rng.randint(*STORM_GLANCE_S)
    return [(at_s * 1000, "screen_on"), ((at_s + dur) * 1000, "screen_off")]


def gen_scenario(
    name: str, seed: int, horizon_periods: int, period_s: int = 1800
) -> str:
    """Deterministic synthetic event log for one of the named scenarios.

    Timestamps are whole seconds; the log carries a horizon marker so idle
    stretches at the end still replay as cooling periods.
    """
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; choose from {SCENARIOS}")
    if horizon_periods <= 0:
        raise ValueError("horizon_periods must be > 0")
    horizon_s = horizon_periods * period_s
    horizon_ms = horizon_s * 1000
    header = f"scenario={name} seed={seed} periods={horizon_periods} period_s={period_s}"
    rng = random.Random(seed)
    events: list[tuple[int, str]] = []

    if name == "idle":
        pass
    elif name == "uninterrupted":
        events = [(0, "screen_on"), (horizon_ms, "screen_off")]
    elif name == "notification-storm":
        t = rng.randint(0, STORM_MEAN_GAP_S)
        while t + STORM_GLANCE_S[1] < horizon_s:
            events.extend(_glance(rng, t))
            t += max(1 + STORM_GLANCE_S[1], int(rng.expovariate(1 / STORM_MEAN_GAP_S)))
    else:  # typical-day: morning quiet, midday bursts, evening cool-down
        morning_end = horizon_s // 4
        evening_start = (3 * horizon_s) // 4
        t = rng.randint(*DAY_QUIET_GAP_S)
        while t + STORM_GLANCE_S[1] < morning_end:
            events.extend(_glance(rng, t))
            t += rng.randint(*DAY_QUIET_GAP_S)
        t = morning_end
        while t < evening_start:
            use = min(rng.randint(*DAY_BURST_USE_S), evening_start - t)
            events.append((t * 1000, "screen_on"))
            events.append(((t + use) * 1000, "screen_off"))
            t += use + rng.randint(*DAY_BURST_GAP_S)
        t += rng.randint(*DAY_QUIET_GAP_S)
        while t + STORM_GLANCE_S[1] < horizon_s:
            events.extend(_glance(rng, t))
            t += rng.randint(*DAY_QUIET_GAP_S) * 2

    return _emit(events, horizon_ms, header)
