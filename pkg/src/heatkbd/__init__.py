"""Smartphone-usage feedback pipeline for a heating-up keyboard.

Screen/call event logs become per-period usage factors, a forgetting filter
consolidates them into one number, a strictness-shaped quantizer maps it to
a temperature level, and the level travels as a color-coded message to
whatever display is listening.
"""

from .engine import (
    EngineParams,
    EngineState,
    Palette,
    PeriodSample,
    Quantizer,
    TemperatureMessage,
    advance_period,
    correct_duration,
    default_palette,
    doubling_quantizer,
    forgetting_step,
    impulse_weight,
    level_phrase,
    make_quantizer,
    period_usage_factor,
    quantize,
)
from .ingest import (
    ActiveInterval,
    EventKind,
    GridRangeError,
    LogParseError,
    PeriodGrid,
    RawEvent,
    assign_to_periods,
    call_intervals,
    normalize_events,
    parse_event_log,
    screen_intervals,
    subtract_calls,
)
from .codec import decode, encode, payload_hex
from .replay import TimelineRecord, gen_scenario, run_replay
from .session import FeedbackSession

__all__ = [
    "ActiveInterval",
    "EngineParams",
    "EngineState",
    "EventKind",
    "FeedbackSession",
    "GridRangeError",
    "LogParseError",
    "Palette",
    "PeriodGrid",
    "PeriodSample",
    "Quantizer",
    "RawEvent",
    "TemperatureMessage",
    "TimelineRecord",
    "advance_period",
    "assign_to_periods",
    "call_intervals",
    "correct_duration",
    "decode",
    "default_palette",
    "doubling_quantizer",
    "encode",
    "forgetting_step",
    "gen_scenario",
    "impulse_weight",
    "level_phrase",
    "make_quantizer",
    "normalize_events",
    "parse_event_log",
    "payload_hex",
    "period_usage_factor",
    "quantize",
    "run_replay",
    "screen_intervals",
    "subtract_calls",
]
