"""Colour parsing, blending, and gradient sampling."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genii.colors import OKABE_ITO, blend, gradient_colour, parse_colour, to_hex
from genii.errors import BadColour


class TestParse:
    @pytest.mark.parametrize(
        "text, rgba",
        [
            ("#000000", (0, 0, 0, 255)),
            ("#FFFFFF", (255, 255, 255, 255)),
            ("#0072B2", (0, 114, 178, 255)),
            ("#e69f00", (230, 159, 0, 255)),  # case-insensitive
            ("#F0E44280", (240, 228, 66, 128)),
        ],
    )
    def test_hex_forms(self, text, rgba):
        assert parse_colour(text) == rgba

    def test_hex_three_expands(self):
        assert parse_colour("#fff") == (255, 255, 255, 255)
        assert parse_colour("#a3c") == (0xAA, 0x33, 0xCC, 255)

    def test_named_colours(self):
        assert parse_colour("black") == (0, 0, 0, 255)
        assert parse_colour("Orange") == (255, 165, 0, 255)
        assert parse_colour("none") == (0, 0, 0, 0)

    @pytest.mark.parametrize("bad", ["", "chartreuse-ish", "#12345", "#GGGGGG", "0072B2", "#"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(BadColour):
            parse_colour(bad)

    def test_to_hex_uppercase_and_alpha_elision(self):
        assert to_hex((0, 114, 178, 255)) == "#0072B2"
        assert to_hex((213, 94, 0, 128)) == "#D55E0080"
        assert to_hex(parse_colour("#d55e00")) == "#D55E00"

    @given(st.tuples(*[st.integers(0, 255)] * 4))
    def test_round_trip_any_rgba(self, rgba):
        assert parse_colour(to_hex(rgba)) == rgba


class TestBlend:
    def test_endpoints(self):
        assert blend("#000000", "#FFFFFF", 0.0) == "#000000"
        assert blend("#000000", "#FFFFFF", 1.0) == "#FFFFFF"

    def test_midpoint_rounds(self):
        assert blend("#000000", "#FFFFFF", 0.5) == "#808080"
        assert blend("#000000", "#0A0000", 0.5) == "#050000"

    def test_t_clamped(self):
        assert blend("#000000", "#FFFFFF", -3.0) == "#000000"
        assert blend("#000000", "#FFFFFF", 9.0) == "#FFFFFF"

    @given(
        st.tuples(*[st.integers(0, 255)] * 3),
        st.tuples(*[st.integers(0, 255)] * 3),
        st.floats(0, 1),
    )
    def test_stays_between_components(self, a, b, t):
        out = parse_colour(blend(to_hex((*a, 255)), to_hex((*b, 255)), t))
        for lo_hi, o in zip(zip(a, b), out[:3]):
            assert min(lo_hi) <= o <= max(lo_hi)


class TestGradient:
    STOPS = ((0.0, "#0072B2"), (0.5, "#F0E442"), (1.0, "#D55E00"))

    def test_hits_exact_stops(self):
        assert gradient_colour(self.STOPS, 0.0) == "#0072B2"
        assert gradient_colour(self.STOPS, 0.5) == "#F0E442"
        assert gradient_colour(self.STOPS, 1.0) == "#D55E00"

    def test_quarter_point_blends_first_pair(self):
        assert gradient_colour(self.STOPS, 0.25) == blend("#0072B2", "#F0E442", 0.5)

    def test_clamps_outside_unit(self):
        assert gradient_colour(self.STOPS, -1.0) == "#0072B2"
        assert gradient_colour(self.STOPS, 2.0) == "#D55E00"

    def test_single_stop_is_constant(self):
        stops = ((0.0, "#009E73"),)
        assert gradient_colour(stops, 0.0) == gradient_colour(stops, 0.7) == "#009E73"

    def test_unsorted_stops_still_interpolate(self):
        shuffled = (self.STOPS[2], self.STOPS[0], self.STOPS[1])
        assert gradient_colour(shuffled, 0.5) == "#F0E442"

    def test_no_stops_rejected(self):
        with pytest.raises(BadColour):
            gradient_colour((), 0.5)

    @given(st.floats(0, 1))
    def test_output_always_parses(self, t):
        parse_colour(gradient_colour(self.STOPS, t))


class TestPalette:
    def test_okabe_ito_order_and_size(self):
        assert len(OKABE_ITO) == 8
        assert OKABE_ITO[0] == "#000000"
        assert OKABE_ITO[1] == "#E69F00"
        assert OKABE_ITO[5] == "#0072B2"

    def test_every_entry_parses(self):
        for entry in OKABE_ITO:
            parse_colour(entry)
