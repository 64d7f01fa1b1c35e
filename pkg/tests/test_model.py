from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from afterimage.colors import NamedColor, Rgb, mix, opposite, scale
from afterimage.model import (
    BASELINE_DIMMING,
    BaselineScheme,
    ModelParams,
    ParamProvenance,
    StimulusSpec,
    UnpairedColorError,
    afterimage_inducing_color,
    afterimage_test_color,
    complement,
    complementary_baseline,
    modified_test_color,
    predict,
    select_params,
)

RED = NamedColor.RED.rgb
GREEN = NamedColor.GREEN.rgb
BLUE = NamedColor.BLUE.rgb
WHITE = NamedColor.WHITE.rgb
BLACK = NamedColor.BLACK.rgb
YELLOW = NamedColor.YELLOW.rgb
MAGENTA = NamedColor.MAGENTA.rgb

units = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
colors = st.builds(Rgb, units, units, units)
# Weights strictly inside (0, 1), drawn as exact rationals.
open_weights = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000))
specs = st.builds(StimulusSpec, colors, colors, colors)
params_sets = st.builds(
    ModelParams.manual, open_weights, open_weights, open_weights
)


def spec(c_ot: Rgb, c_oi: Rgb, c_n: Rgb) -> StimulusSpec:
    return StimulusSpec(c_ot=c_ot, c_oi=c_oi, c_n=c_n)


class TestModelParams:
    def test_defaults_have_exact_closed_form_coefficients(self):
        p = select_params(spec(RED, WHITE, GREEN))
        assert p.coefficients() == (0.24, 0.16, 0.60)

    def test_partition_is_exactly_one_for_all_parameter_sets(self):
        for s in [
            spec(RED, WHITE, GREEN),
            spec(RED, WHITE, RED),
            spec(GREEN, WHITE, GREEN),
            spec(BLUE, WHITE, BLUE),
            spec(RED, GREEN, YELLOW),
        ]:
            assert select_params(s).coefficient_partition() == 1

    @given(params_sets)
    def test_partition_is_exactly_one_for_any_weights(self, p):
        assert p.coefficient_partition() == 1

    @pytest.mark.parametrize("bad", [0, 1, Fraction(-1, 10), Fraction(11, 10)])
    def test_rejects_weights_outside_open_interval(self, bad):
        with pytest.raises(ValueError):
            ModelParams.manual(bad, "0.4", "0.1")

    def test_requires_fractions_unless_built_via_manual(self):
        with pytest.raises(TypeError):
            ModelParams(0.4, 0.4, 0.1)  # type: ignore[arg-type]

    def test_manual_accepts_floats_strings_fractions(self):
        p = ModelParams.manual(0.4, "0.4", Fraction(1, 10))
        assert p.beta_t == Fraction(2, 5)
        assert p.provenance is ParamProvenance.MANUAL


class TestSelectParams:
    def test_default_for_white_surround(self):
        p = select_params(spec(RED, WHITE, GREEN))
        assert (p.alpha, p.beta_t, p.beta_i) == (
            Fraction("0.4"),
            Fraction("0.4"),
            Fraction("0.1"),
        )
        assert p.provenance is ParamProvenance.DEFAULT

    def test_chromatic_surround_raises_inducing_weight(self):
        p = select_params(spec(BLUE, RED, MAGENTA))
        assert p.beta_i == Fraction("0.2")
        assert p.provenance is ParamProvenance.DEFAULT

    def test_black_surround_counts_as_chromatic(self):
        assert select_params(spec(RED, BLACK, WHITE)).beta_i == Fraction("0.2")

    @pytest.mark.parametrize(
        "primary, alpha, beta_t, provenance",
        [
            (RED, "0.6", "0.35", ParamProvenance.SPECIAL_RED),
            (GREEN, "0.75", "0.45", ParamProvenance.SPECIAL_GREEN),
            (BLUE, "0.7", "0.4", ParamProvenance.SPECIAL_BLUE),
        ],
    )
    def test_repeated_primary_special_cases(self, primary, alpha, beta_t, provenance):
        p = select_params(spec(primary, WHITE, primary))
        assert p.alpha == Fraction(alpha)
        assert p.beta_t == Fraction(beta_t)
        assert p.beta_i == Fraction("0.1")
        assert p.provenance is provenance

    def test_special_case_requires_white_surround(self):
        p = select_params(spec(RED, GREEN, RED))
        assert p.provenance is ParamProvenance.DEFAULT

    def test_special_case_requires_new_color_to_repeat_test_color(self):
        p = select_params(spec(RED, WHITE, GREEN))
        assert p.provenance is ParamProvenance.DEFAULT

    def test_near_primary_does_not_match(self):
        near_red = Rgb(1 - 1e-9, 0, 0)
        p = select_params(spec(near_red, WHITE, near_red))
        assert p.provenance is ParamProvenance.DEFAULT

    @given(specs)
    def test_total_and_deterministic(self, s):
        assert select_params(s) == select_params(s)


class TestModifiedTestColor:
    def test_white_surround_just_dims(self):
        p = select_params(spec(RED, WHITE, WHITE))
        assert modified_test_color(spec(RED, WHITE, WHITE), p) == Rgb("0.6", 0, 0)

    @given(colors, open_weights)
    def test_white_surround_general(self, c_ot, alpha):
        p = ModelParams.manual(alpha, "0.4", "0.1")
        s = spec(c_ot, WHITE, WHITE)
        assert modified_test_color(s, p) == scale(c_ot, 1 - alpha)

    def test_chromatic_surround_shifts_toward_its_opposite(self):
        p = ModelParams.manual("0.4", "0.4", "0.2")
        assert modified_test_color(spec(RED, GREEN, YELLOW), p) == Rgb(1, 0, "0.4")

    @given(colors, open_weights)
    def test_fixed_point_when_test_color_equals_opposite_surround(self, c, alpha):
        p = ModelParams.manual(alpha, "0.4", "0.1")
        s = spec(c, opposite(c), WHITE)
        assert modified_test_color(s, p) == c


class TestAfterimageTestColor:
    @pytest.mark.parametrize(
        "s, expected",
        [
            (spec(RED, WHITE, WHITE), Rgb("0.76", 1, 1)),
            (spec(RED, WHITE, BLACK), Rgb("0.16", "0.4", "0.4")),
            (spec(RED, WHITE, GREEN), Rgb("0.16", 1, "0.4")),
            (spec(RED, WHITE, BLUE), Rgb("0.16", "0.4", 1)),
            (spec(RED, WHITE, RED), Rgb("0.86", "0.35", "0.35")),
            (spec(GREEN, WHITE, GREEN), Rgb("0.45", "0.8875", "0.45")),
        ],
    )
    def test_published_values_reproduce_exactly(self, s, expected):
        assert afterimage_test_color(s, select_params(s)) == expected

    def test_repeated_blue_value_from_hand_arithmetic(self):
        # k_opp = 0.4*0.3 = 0.12, k_ind = 0.4*0.7 = 0.28, k_new = 0.6:
        # r = 0.12*1 + 0.28*1 + 0 = 0.4; g likewise; b = 0.28 + 0.6 = 0.88.
        s = spec(BLUE, WHITE, BLUE)
        assert afterimage_test_color(s, select_params(s)) == Rgb("0.4", "0.4", "0.88")

    @given(specs, params_sets)
    def test_closed_form_equals_composed_route_exactly(self, s, p):
        composed = mix(opposite(modified_test_color(s, p)), s.c_n, p.beta_t)
        assert afterimage_test_color(s, p) == composed

    @given(specs, params_sets)
    def test_output_needs_no_clamping(self, s, p):
        assert all(0 <= v <= 1 for v in afterimage_test_color(s, p).exact_components())


class TestAfterimageInducingColor:
    def test_published_chromatic_surround_values(self):
        s1 = spec(RED, GREEN, YELLOW)
        assert afterimage_inducing_color(s1, select_params(s1)) == Rgb(1, "0.8", "0.2")
        s2 = spec(BLUE, RED, MAGENTA)
        assert afterimage_inducing_color(s2, select_params(s2)) == Rgb("0.8", "0.2", 1)

    @given(colors)
    def test_white_surround_dims_new_color_by_ten_percent(self, c_n):
        s = spec(RED, WHITE, c_n)
        assert afterimage_inducing_color(s, select_params(s)) == scale(c_n, "0.9")

    @given(specs, params_sets)
    def test_output_needs_no_clamping(self, s, p):
        assert all(0 <= v <= 1 for v in afterimage_inducing_color(s, p).exact_components())


class TestPredict:
    def test_bundles_all_three_outputs_with_params(self):
        result = predict(spec(RED, WHITE, WHITE))
        assert result.c_mt == Rgb("0.6", 0, 0)
        assert result.c_at == Rgb("0.76", 1, 1)
        assert result.c_ai == Rgb("0.9", "0.9", "0.9")
        assert result.params.provenance is ParamProvenance.DEFAULT

    def test_special_case_green(self):
        result = predict(spec(GREEN, WHITE, GREEN))
        assert result.c_at == Rgb("0.45", "0.8875", "0.45")
        assert result.params.provenance is ParamProvenance.SPECIAL_GREEN

    def test_chromatic_surround_case_follows_the_formula(self):
        # The published figure prints (0.76, 1.0, 0.4) here, which is the
        # white-surround output; the formula value for a green surround is
        # (0.6, 1.0, 0.24). See reference.py.
        result = predict(spec(RED, GREEN, YELLOW))
        assert result.c_at == Rgb("0.6", 1, "0.24")
        assert result.c_ai == Rgb(1, "0.8", "0.2")

    def test_explicit_params_override_selection(self):
        p = ModelParams.manual("0.5", "0.5", "0.5")
        result = predict(spec(RED, WHITE, WHITE), params=p)
        assert result.params is p
        assert result.c_at == Rgb("0.75", 1, 1)

    def test_gray_is_a_fixed_point_of_the_default_model(self):
        gray = Rgb("0.5", "0.5", "0.5")
        result = predict(spec(gray, gray, gray))
        assert result.c_mt == gray
        assert result.c_at == gray
        assert result.c_ai == gray


class TestComplement:
    def test_group2_is_the_opposite_color(self):
        assert complement(RED, BaselineScheme.GROUP2) == Rgb(0, 1, 1)
        assert complement(Rgb("0.2", "0.3", "0.4"), BaselineScheme.GROUP2) == Rgb(
            "0.8", "0.7", "0.6"
        )

    def test_group1_table_is_symmetric(self):
        purple = Rgb("0.5", 0, "0.5")
        orange = Rgb(1, "0.5", 0)
        pairs = [(RED, GREEN), (YELLOW, purple), (BLUE, orange)]
        for a, b in pairs:
            assert complement(a, BaselineScheme.GROUP1) == b
            assert complement(b, BaselineScheme.GROUP1) == a

    @pytest.mark.parametrize("unpaired", [NamedColor.CYAN.rgb, NamedColor.WHITE.rgb, Rgb("0.5", "0.5", "0.5")])
    def test_group1_rejects_unpaired_colors(self, unpaired):
        with pytest.raises(UnpairedColorError):
            complement(unpaired, BaselineScheme.GROUP1)


class TestComplementaryBaseline:
    def test_dimmed_opposite_over_dimmed_new_color(self):
        c_ct, c_ci = complementary_baseline(spec(RED, WHITE, GREEN), BaselineScheme.GROUP2)
        assert c_ct == Rgb(0, "0.9", "0.9")
        assert c_ci == Rgb(0, "0.9", 0)

    def test_green_test_color_group2(self):
        c_ct, _ = complementary_baseline(spec(GREEN, WHITE, GREEN), BaselineScheme.GROUP2)
        assert c_ct == Rgb("0.9", 0, "0.9")

    def test_group1_uses_the_pairing_table(self):
        c_ct, _ = complementary_baseline(spec(RED, WHITE, WHITE), BaselineScheme.GROUP1)
        assert c_ct == Rgb(0, "0.9", 0)

    def test_dimming_factor(self):
        assert BASELINE_DIMMING == Fraction(9, 10)

    @given(specs)
    def test_both_fields_are_dimmed_by_the_same_factor(self, s):
        c_ct, c_ci = complementary_baseline(s, BaselineScheme.GROUP2)
        assert c_ct == scale(opposite(s.c_ot), BASELINE_DIMMING)
        assert c_ci == scale(s.c_n, BASELINE_DIMMING)


class TestStimulusSpec:
    def test_rejects_non_color_fields(self):
        with pytest.raises(TypeError):
            StimulusSpec((1, 0, 0), WHITE, WHITE)  # type: ignore[arg-type]
