"""Usage estimation engine.

Turns per-period usage factors into "temperature" feedback: a forgetting
filter consolidates recent usage into one number in [0, 1], a
strictness-shaped quantizer maps that number to a small set of levels, and
a palette/phrase table renders each level as a color and a short label.

Everything here is pure: parameters and state are immutable values, and a
period advance returns a new state plus the message to display.
"""

from __future__ import annotations

import warnings
from bisect import bisect_right
from dataclasses import dataclass

MIN_LEVELS = 2
MAX_LEVELS = 8  # colors stop being recognizable beyond ~eight messages

# Phrases for the standard five-level configuration, coldest first.
FIVE_LEVEL_PHRASES = (
    "very little",
    "little",
    "medium amount",
    "a lot",
    "a great deal",
)

NEUTRAL_GRAY = (158, 158, 158)

# Red ramp for warm levels, least to most saturated. Level 0 stays gray so a
# cold keyboard looks like a regular one.
RED_RAMP = (
    (255, 205, 210),
    (229, 115, 115),
    (229, 57, 53),
    (183, 28, 28),
)


def _to_ms(seconds: float) -> int:
    return int(round(seconds * 1000))


@dataclass(frozen=True)
class EngineParams:
    """Tuning knobs of the estimation pipeline.

    Durations are given in seconds; internal arithmetic uses the integer
    millisecond properties below.

    Attributes:
        sampling_period_s: how often usage is sampled (T_S).
        notification_correction_s: minimum usage time charged for a very
            short interaction, e.g. a notification glance (T_N).
        notification_threshold_s: interval durations below this are treated
            as notification checks and corrected up to T_N.
        alpha: forgetting coefficient in (0, 1); larger forgets faster.
        strictness: exponent shaping quantizer endpoints; > 1 reaches hot
            levels sooner.
        level_count: number of temperature levels (2..8).
    """

    sampling_period_s: float = 1800.0
    notification_correction_s: float = 300.0
    notification_threshold_s: float = 30.0
    alpha: float = 0.2
    strictness: float = 1.0
    level_count: int = 5

    def __post_init__(self) -> None:
        if self.sampling_period_s <= 0:
            raise ValueError("sampling_period_s must be > 0")
        if self.notification_correction_s < 0:
            raise ValueError("notification_correction_s must be >= 0")
        if self.notification_threshold_s < 0:
            raise ValueError("notification_threshold_s must be >= 0")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.strictness <= 0:
            raise ValueError("strictness must be > 0")
        if not isinstance(self.level_count, int) or isinstance(self.level_count, bool):
            raise ValueError("level_count must be an integer")
        if not MIN_LEVELS <= self.level_count <= MAX_LEVELS:
            raise ValueError(
                f"level_count must be in [{MIN_LEVELS}, {MAX_LEVELS}]"
            )
        if self.notification_correction_s < self.notification_threshold_s:
            warnings.warn(
                "notification_correction_s < notification_threshold_s: the "
                "short-interval correction never changes a duration",
                stacklevel=2,
            )

    @property
    def sampling_period_ms(self) -> int:
        return _to_ms(self.sampling_period_s)

    @property
    def notification_correction_ms(self) -> int:
        return _to_ms(self.notification_correction_s)

    @property
    def notification_threshold_ms(self) -> int:
        return _to_ms(self.notification_threshold_s)


@dataclass(frozen=True)
class PeriodSample:
    """Usage factor of one sampling period: fraction of the period spent
    using the device, after corrections, clamped to [0, 1]."""

    period_index: int
    usage_factor: float

    def __post_init__(self) -> None:
        if self.period_index < 0:
            raise ValueError("period_index must be >= 0")
        if not 0.0 <= self.usage_factor <= 1.0:
            raise ValueError("usage_factor must lie in [0, 1]")


@dataclass(frozen=True)
class EngineState:
    """Filter output so far plus the index of the next period to consume."""

    overall_usage: float = 0.0
    next_period_index: int = 0


@dataclass(frozen=True)
class Quantizer:
    """Partition of [0, 1] into level intervals [e_k, e_{k+1}), the last one
    closed at 1. Ties at interior endpoints resolve to the higher level."""

    endpoints: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.endpoints) - 1
        if not MIN_LEVELS <= n <= MAX_LEVELS:
            raise ValueError(
                f"quantizer must have between {MIN_LEVELS} and {MAX_LEVELS} levels"
            )
        if self.endpoints[0] != 0.0 or self.endpoints[-1] != 1.0:
            raise ValueError("endpoints must start at 0 and end at 1")
        for lo, hi in zip(self.endpoints, self.endpoints[1:]):
            if not lo < hi:
                raise ValueError("endpoints must be strictly increasing")

    @property
    def level_count(self) -> int:
        return len(self.endpoints) - 1


@dataclass(frozen=True)
class Palette:
    """Ordered level colors, coldest first."""

    colors: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if not MIN_LEVELS <= len(self.colors) <= MAX_LEVELS:
            raise ValueError(
                f"palette must have between {MIN_LEVELS} and {MAX_LEVELS} colors"
            )
        for color in self.colors:
            if len(color) != 3 or any(not 0 <= c <= 255 for c in color):
                raise ValueError(f"invalid RGB triple: {color!r}")
        if len(set(self.colors)) != len(self.colors):
            raise ValueError("palette colors must be pairwise distinct")


@dataclass(frozen=True)
class TemperatureMessage:
    """One period's feedback: the quantized level with its rendering."""

    period_index: int
    level: int
    color: tuple[int, int, int]
    phrase: str


def correct_duration(actual_ms: int, params: EngineParams) -> int:
    """Corrected duration of one active interval, in milliseconds.

    Intervals shorter than the notification threshold count as at least the
    notification correction time; longer intervals pass through unchanged.
    """
    if actual_ms < 0:
        raise ValueError("duration must be >= 0")
    if actual_ms < params.notification_threshold_ms:
        return max(actual_ms, params.notification_correction_ms)
    return actual_ms


def period_usage_factor(
    corrected_durations_ms: list[int], params: EngineParams
) -> float:
    """Fraction of one sampling period spent using the device.

    Sums corrected durations and normalizes by the sampling period; the
    correction can push the sum past the period length, so the result is
    clamped to 1.
    """
    total = 0
    for d in corrected_durations_ms:
        if d < 0:
            raise ValueError("duration must be >= 0")
        total += d
    return min(total / params.sampling_period_ms, 1.0)


def forgetting_step(y_prev: float, u: float, alpha: float) -> float:
    """One step of the auto-regressive forgetting filter:
    y = (1 - alpha) * y_prev + alpha * u."""
    return (1.0 - alpha) * y_prev + alpha * u


def impulse_weight(alpha: float, k: int) -> float:
    """Weight of the usage factor observed k periods ago: (1 - alpha)^k * alpha."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return (1.0 - alpha) ** k * alpha


def make_quantizer(level_count: int, strictness: float) -> Quantizer:
    """Quantizer with endpoints (k / level_count) ** strictness.

    strictness > 1 pulls the endpoints down (hot levels are reached at lower
    overall usage); strictness < 1 pushes them up; 1 is uniform.
    """
    if not isinstance(level_count, int) or isinstance(level_count, bool):
        raise ValueError("level_count must be an integer")
    if not MIN_LEVELS <= level_count <= MAX_LEVELS:
        raise ValueError(f"level_count must be in [{MIN_LEVELS}, {MAX_LEVELS}]")
    if strictness <= 0:
        raise ValueError("strictness must be > 0")
    # (k/L)**s computed as k**s / L**s: one rounding instead of two, so
    # integer-ratio endpoints (0.04, 0.16, ... at s=2) come out exactly.
    endpoints = tuple(
        k**strictness / level_count**strictness for k in range(level_count + 1)
    )
    return Quantizer(endpoints)


def doubling_quantizer() -> Quantizer:
    """Five-level quantizer whose intervals double in length, so roughly
    one-half overall usage already reaches the hottest level."""
    return Quantizer((0.0, 1 / 31, 3 / 31, 7 / 31, 15 / 31, 1.0))


def quantize(quantizer: Quantizer, y: float) -> int:
    """Level index of y: the unique k with e_k <= y < e_{k+1}, with y = 1
    mapping to the top level."""
    if not 0.0 <= y <= 1.0:
        raise ValueError("y must lie in [0, 1]")
    if y == 1.0:
        return quantizer.level_count - 1
    return bisect_right(quantizer.endpoints, y) - 1


def level_phrase(level: int, level_count: int) -> str:
    """Short label for a level: the standard phrases for five levels, a
    generic "level k of L" otherwise."""
    if not 0 <= level < level_count:
        raise ValueError("level must lie in [0, level_count)")
    if level_count == len(FIVE_LEVEL_PHRASES):
        return FIVE_LEVEL_PHRASES[level]
    return f"level {level} of {level_count}"


def _ramp_color(numerator: int, denominator: int) -> tuple[int, int, int]:
    """Piecewise-linear sample of RED_RAMP at fraction numerator/denominator.

    Exact integer arithmetic at the ramp's control points, so the standard
    five-level palette reproduces RED_RAMP verbatim.
    """
    segments = len(RED_RAMP) - 1
    pos_num = numerator * segments
    index, rem = divmod(pos_num, denominator)
    if index >= segments:
        return RED_RAMP[-1]
    lo, hi = RED_RAMP[index], RED_RAMP[index + 1]
    return tuple(
        round(lo[c] + (hi[c] - lo[c]) * rem / denominator) for c in range(3)
    )


def default_palette(level_count: int) -> Palette:
    """Default palette: gray at level 0, then reds of increasing saturation."""
    if not MIN_LEVELS <= level_count <= MAX_LEVELS:
        raise ValueError(f"level_count must be in [{MIN_LEVELS}, {MAX_LEVELS}]")
    if level_count == 2:
        return Palette((NEUTRAL_GRAY, RED_RAMP[-1]))
    reds = tuple(_ramp_color(j, level_count - 2) for j in range(level_count - 1))
    return Palette((NEUTRAL_GRAY,) + reds)


def advance_period(
    state: EngineState,
    u: float,
    params: EngineParams,
    quantizer: Quantizer,
    palette: Palette,
) -> tuple[EngineState, TemperatureMessage]:
    """Consume one period's usage factor.

    Returns the new state (filtered usage, next period index) and the
    message to display during the following period.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    if quantizer.level_count != params.level_count:
        raise ValueError("quantizer level count does not match params")
    if len(palette.colors) != params.level_count:
        raise ValueError("palette size does not match params")
    y = forgetting_step(state.overall_usage, u, params.alpha)
    level = quantize(quantizer, y)
    message = TemperatureMessage(
        period_index=state.next_period_index,
        level=level,
        color=palette.colors[level],
        phrase=level_phrase(level, params.level_count),
    )
    return EngineState(y, state.next_period_index + 1), message
