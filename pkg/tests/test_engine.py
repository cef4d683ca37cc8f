"""Unit tests for the estimation engine."""

import math

import pytest

from heatkbd.engine import (
    FIVE_LEVEL_PHRASES,
    NEUTRAL_GRAY,
    EngineParams,
    EngineState,
    Palette,
    Quantizer,
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

PARAMS = EngineParams()  # Table-style defaults: 30 min period, 5 min correction


class TestEngineParams:
    def test_defaults_in_milliseconds(self):
        assert PARAMS.sampling_period_ms == 1_800_000
        assert PARAMS.notification_correction_ms == 300_000
        assert PARAMS.notification_threshold_ms == 30_000

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
    def test_alpha_must_be_strictly_inside_unit_interval(self, alpha):
        with pytest.raises(ValueError):
            EngineParams(alpha=alpha)

    @pytest.mark.parametrize("levels", [1, 9, 0, -3])
    def test_level_count_bounds(self, levels):
        with pytest.raises(ValueError):
            EngineParams(level_count=levels)

    def test_rejects_nonpositive_period_and_strictness(self):
        with pytest.raises(ValueError):
            EngineParams(sampling_period_s=0)
        with pytest.raises(ValueError):
            EngineParams(strictness=0)
        with pytest.raises(ValueError):
            EngineParams(notification_correction_s=-1)

    def test_warns_when_correction_below_threshold(self):
        with pytest.warns(UserWarning):
            EngineParams(notification_correction_s=10, notification_threshold_s=30)


class TestCorrectDuration:
    def test_short_glance_is_corrected_up(self):
        assert correct_duration(10_000, PARAMS) == 300_000

    def test_at_threshold_passes_through(self):
        assert correct_duration(30_000, PARAMS) == 30_000

    def test_long_interval_passes_through(self):
        assert correct_duration(600_000, PARAMS) == 600_000

    def test_never_shrinks(self):
        for ms in (0, 1, 29_999, 30_000, 10_000_000):
            assert correct_duration(ms, PARAMS) >= ms

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            correct_duration(-1, PARAMS)


class TestPeriodUsageFactor:
    def test_empty_sum_is_zero(self):
        assert period_usage_factor([], PARAMS) == 0.0

    def test_direct_substitution(self):
        assert period_usage_factor([900_000], PARAMS) == 0.5

    def test_clamps_at_one(self):
        assert period_usage_factor([1_500_000, 600_000], PARAMS) == 1.0

    def test_rejects_negative_duration(self):
        with pytest.raises(ValueError):
            period_usage_factor([-5], PARAMS)


class TestForgettingStep:
    def test_direct_substitution(self):
        assert forgetting_step(0.0, 1.0, 0.2) == 0.2

    @pytest.mark.parametrize("alpha", [0.2, 0.3, 0.5, 0.7, 0.9])
    def test_fixed_point_when_input_equals_state(self, alpha):
        assert forgetting_step(0.5, 0.5, alpha) == pytest.approx(0.5, abs=1e-15)

    def test_eight_saturated_steps(self):
        y = 0.0
        for _ in range(8):
            y = forgetting_step(y, 1.0, 0.2)
        assert y == pytest.approx(0.8322, abs=5e-5)
        assert y == pytest.approx(1.0 - 0.8**8, abs=1e-12)


class TestImpulseWeight:
    def test_first_weight_is_alpha(self):
        assert impulse_weight(0.2, 0) == 0.2

    def test_second_weight(self):
        assert impulse_weight(0.2, 1) == pytest.approx(0.16, abs=1e-15)

    def test_direct_evaluation(self):
        assert impulse_weight(0.5, 3) == 0.0625

    def test_strictly_decreasing_in_k(self):
        weights = [impulse_weight(0.3, k) for k in range(20)]
        assert all(a > b for a, b in zip(weights, weights[1:]))

    def test_rejects_negative_k(self):
        with pytest.raises(ValueError):
            impulse_weight(0.2, -1)


class TestMakeQuantizer:
    def test_strict_endpoints_exact(self):
        assert list(make_quantizer(5, 2.0).endpoints) == [0.0, 0.04, 0.16, 0.36, 0.64, 1.0]

    def test_uniform_endpoints_exact(self):
        assert list(make_quantizer(5, 1.0).endpoints) == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]

    def test_lenient_top_interval_roughly_point_nine(self):
        e4 = make_quantizer(5, 0.5).endpoints[4]
        assert e4 == math.sqrt(0.8)
        assert abs(e4 - 0.9) < 0.01

    @pytest.mark.parametrize("levels,strictness", [(1, 1.0), (9, 1.0), (5, 0.0), (5, -2.0)])
    def test_rejects_out_of_bounds(self, levels, strictness):
        with pytest.raises(ValueError):
            make_quantizer(levels, strictness)

    def test_quantizer_invariants_enforced(self):
        with pytest.raises(ValueError):
            Quantizer((0.0, 0.5, 0.5, 1.0))
        with pytest.raises(ValueError):
            Quantizer((0.1, 0.5, 1.0))


class TestQuantize:
    def test_zero_maps_to_lowest_level(self):
        assert quantize(make_quantizer(5, 1.0), 0.0) == 0

    def test_one_maps_to_top_level(self):
        assert quantize(make_quantizer(5, 1.0), 1.0) == 4

    def test_half_under_strict_quantizer(self):
        # endpoints 0.36 <= 0.5 < 0.64
        assert quantize(make_quantizer(5, 2.0), 0.5) == 3

    def test_interior_tie_goes_to_higher_level(self):
        q = make_quantizer(5, 1.0)
        assert quantize(q, 0.2) == 1
        assert quantize(q, 0.4) == 2

    @pytest.mark.parametrize("y", [-0.1, 1.1, 2.0])
    def test_rejects_out_of_range(self, y):
        with pytest.raises(ValueError):
            quantize(make_quantizer(5, 1.0), y)


class TestDoublingQuantizer:
    def test_exact_endpoints(self):
        q = doubling_quantizer()
        assert list(q.endpoints) == [0.0, 1 / 31, 3 / 31, 7 / 31, 15 / 31, 1.0]

    def test_each_interval_twice_the_previous(self):
        e = doubling_quantizer().endpoints
        widths = [b - a for a, b in zip(e, e[1:])]
        for prev, nxt in zip(widths, widths[1:]):
            assert nxt == pytest.approx(2 * prev, rel=1e-12)

    def test_half_reaches_the_top_level(self):
        assert quantize(doubling_quantizer(), 0.5) == 4

    def test_zero_is_lowest(self):
        assert quantize(doubling_quantizer(), 0.0) == 0


class TestLevelPhrase:
    def test_five_level_phrases(self):
        assert level_phrase(0, 5) == "very little"
        assert level_phrase(4, 5) == "a great deal"
        assert [level_phrase(k, 5) for k in range(5)] == list(FIVE_LEVEL_PHRASES)

    def test_generic_fallback(self):
        assert level_phrase(2, 7) == "level 2 of 7"

    def test_rejects_out_of_range_level(self):
        with pytest.raises(ValueError):
            level_phrase(5, 5)


class TestDefaultPalette:
    def test_five_level_palette_is_normative(self):
        assert default_palette(5).colors == (
            (158, 158, 158),
            (255, 205, 210),
            (229, 115, 115),
            (229, 57, 53),
            (183, 28, 28),
        )

    @pytest.mark.parametrize("levels", range(2, 9))
    def test_gray_base_and_distinct_colors(self, levels):
        palette = default_palette(levels)
        assert palette.colors[0] == NEUTRAL_GRAY
        assert len(palette.colors) == levels
        assert len(set(palette.colors)) == levels

    def test_palette_invariants_enforced(self):
        with pytest.raises(ValueError):
            Palette(((0, 0, 0), (0, 0, 0)))
        with pytest.raises(ValueError):
            Palette(((0, 0, 300), (1, 1, 1)))


class TestAdvancePeriod:
    def setup_method(self):
        self.q = make_quantizer(5, 1.0)
        self.palette = default_palette(5)

    def test_cold_start_stays_cold_without_usage(self):
        state, message = advance_period(EngineState(), 0.0, PARAMS, self.q, self.palette)
        assert state.overall_usage == 0.0
        assert message.level == 0
        assert message.color == NEUTRAL_GRAY

    def test_first_saturated_period_reaches_little(self):
        state, message = advance_period(EngineState(), 1.0, PARAMS, self.q, self.palette)
        assert state.overall_usage == pytest.approx(0.2, abs=1e-15)
        assert (message.level, message.phrase) == (1, "little")
        assert message.period_index == 0
        assert state.next_period_index == 1

    def test_cooling_composition(self):
        params = EngineParams(alpha=0.5)
        state, message = advance_period(
            EngineState(0.95, 7), 0.0, params, self.q, self.palette
        )
        assert state.overall_usage == pytest.approx(0.475, abs=1e-15)
        assert message.level == 2
        assert message.period_index == 7
        assert state.next_period_index == 8

    def test_message_color_comes_from_palette(self):
        _, message = advance_period(EngineState(), 1.0, PARAMS, self.q, self.palette)
        assert message.color == self.palette.colors[message.level]

    def test_rejects_invalid_usage(self):
        with pytest.raises(ValueError):
            advance_period(EngineState(), 1.5, PARAMS, self.q, self.palette)

    def test_rejects_mismatched_quantizer(self):
        with pytest.raises(ValueError):
            advance_period(EngineState(), 0.5, PARAMS, make_quantizer(3, 1.0), self.palette)
