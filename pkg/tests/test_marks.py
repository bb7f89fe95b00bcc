"""Mark placement: sizing, stacking, donut bands, scatter, jitter, clipping."""

import math
import warnings as pywarnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genii.envelope import EnvelopeSpec, build_envelope
from genii.errors import GeniiWarning, ShapeUnsupportedOnPath, ZeroRange
from genii.data import ResolvedDatum
from genii.gene import seeded_rng
from genii.marks import (
    MarkSpec,
    donut_segments,
    place_marks,
    scale_height,
    scatter_place,
    stack_offsets,
)
from genii.path import Point, make_path
from tests.conftest import mark_area


def straight(n=6, y=0.5):
    return make_path([Point(k / (n - 1), y) for k in range(n)])


def env(path, top=0.4, bottom=0.4, **kw):
    return build_envelope(path, EnvelopeSpec(top_extent=top, bottom_extent=bottom, **kw))


def rd(i, value, range_=100.0, height=None, explicit=True, position=0.0,
       colour=None, width=None, text=None, angle=None):
    if height is None:
        height = value / range_
    return ResolvedDatum(i, value, range_, height, explicit, position,
                         colour, width, text, angle)


def bbox(outline):
    xs = [p.x for p in outline]
    ys = [p.y for p in outline]
    return min(xs), min(ys), max(xs), max(ys)


class TestScalars:
    def test_scale_height_proportional(self):
        assert scale_height(50, 100, 0.8) == pytest.approx(0.4)
        assert scale_height(0, 100, 0.8) == 0.0
        assert scale_height(100, 100, 0.8) == pytest.approx(0.8)

    def test_scale_height_clamps_with_warning(self):
        with pytest.warns(GeniiWarning):
            assert scale_height(150, 100, 0.8) == pytest.approx(0.8)
        with pytest.warns(GeniiWarning):
            assert scale_height(-1, 100, 0.8) == 0.0

    def test_scale_height_zero_range(self):
        with pytest.raises(ZeroRange):
            scale_height(1, 0, 0.5)

    @given(st.floats(0, 50), st.floats(0, 50))
    def test_scale_height_additive(self, a, b):
        r, e = 100.0, 0.7
        assert scale_height(a, r, e) + scale_height(b, r, e) == pytest.approx(
            scale_height(a + b, r, e), abs=1e-12
        )

    def test_stack_offsets_cumulative(self):
        assert stack_offsets([2, 3, 5], 10) == [(0, 0.2), (0.2, 0.5), (0.5, 1.0)]
        assert stack_offsets([10], 10) == [(0, 1.0)]

    def test_stack_offsets_clamp_warns(self):
        with pytest.warns(GeniiWarning):
            spans = stack_offsets([4, 4, 4], 10)
        assert spans == [(0, 0.4), (0.4, 0.8), (0.8, 1.0)]

    def test_stack_offsets_zero_range(self):
        with pytest.raises(ZeroRange):
            stack_offsets([1], 0)

    def test_donut_segments_proportional(self):
        assert donut_segments([25, 25, 50], 100) == [(0, 90), (90, 180), (180, 360)]
        assert donut_segments([100], 100) == [(0, 360.0)]

    def test_donut_segments_radial_bar(self):
        (a0, a1), = donut_segments([75], 100)
        assert a1 - a0 == pytest.approx(270.0, abs=1e-9)

    def test_donut_segments_clamp_warns(self):
        with pytest.warns(GeniiWarning):
            spans = donut_segments([60, 60], 100)
        assert spans[-1][1] == 360.0

    def test_donut_segments_sum_matches_total(self):
        spans = donut_segments([35, 25, 25, 15], 100)
        total = sum(b - a for a, b in spans)
        assert total == pytest.approx(360.0, abs=1e-9)


class TestRectPlacement:
    def test_one_mark_per_edge_heights_proportional(self):
        path = straight(6)
        e = env(path, top=0.4, bottom=0.4)
        spec = MarkSpec(shape="rect", anchor="on_path_above", gap_fraction=0.1)
        data = [rd(i, v, 5) for i, v in enumerate([1, 2, 3, 4, 5])]
        marks = place_marks(path, e, spec, data, clip=False)
        assert len(marks) == 5
        heights = [bbox(m.outline)[3] - bbox(m.outline)[1] for m in marks]
        for k, h in enumerate(heights, start=1):
            assert h == pytest.approx(0.4 * k / 5, rel=1e-9)

    def test_above_anchor_sits_on_path(self):
        path = straight(3)
        e = env(path)
        spec = MarkSpec(shape="rect", anchor="on_path_above")
        marks = place_marks(path, e, spec, [rd(0, 50)], clip=False)
        x0, y0, x1, y1 = bbox(marks[0].outline)
        assert y0 == pytest.approx(0.5, abs=1e-12)
        assert y1 == pytest.approx(0.5 + 0.5 * 0.4, abs=1e-12)

    def test_below_anchor_hangs_under_path(self):
        path = straight(3)
        e = env(path)
        spec = MarkSpec(shape="rect", anchor="on_path_below")
        marks = place_marks(path, e, spec, [rd(0, 50)], clip=False)
        _, y0, _, y1 = bbox(marks[0].outline)
        assert y1 == pytest.approx(0.5, abs=1e-12)
        assert y0 == pytest.approx(0.5 - 0.5 * 0.4, abs=1e-12)

    def test_centered_anchor_symmetric_about_path(self):
        path = straight(3)
        e = env(path, top=0.3, bottom=0.3)
        spec = MarkSpec(shape="rect", anchor="centered")
        marks = place_marks(path, e, spec, [rd(0, 50)], clip=False)
        _, y0, _, y1 = bbox(marks[0].outline)
        assert 0.5 - y0 == pytest.approx(y1 - 0.5, abs=1e-12)

    def test_gap_fraction_splits_both_ends(self):
        path = straight(2)  # single edge of length 1
        e = env(path)
        spec = MarkSpec(shape="rect", anchor="on_path_above", gap_fraction=0.2)
        marks = place_marks(path, e, spec, [rd(0, 50)], clip=False)
        x0, _, x1, _ = bbox(marks[0].outline)
        assert x0 == pytest.approx(0.1, abs=1e-12)
        assert x1 == pytest.approx(0.9, abs=1e-12)

    def test_width_override_centred_on_edge(self):
        path = straight(2)
        e = env(path)
        spec = MarkSpec(shape="rect", anchor="on_path_above", gap_fraction=0.2)
        marks = place_marks(path, e, spec, [rd(0, 50, width=0.5)], clip=False)
        x0, _, x1, _ = bbox(marks[0].outline)
        assert x0 == pytest.approx(0.25, abs=1e-12)
        assert x1 == pytest.approx(0.75, abs=1e-12)

    def test_position_offsets_baseline(self):
        path = straight(2)
        e = env(path)
        spec = MarkSpec(shape="rect", anchor="on_path_above")
        marks = place_marks(path, e, spec, [rd(0, 30, position=0.2)], clip=False)
        _, y0, _, y1 = bbox(marks[0].outline)
        assert y0 == pytest.approx(0.5 + 0.2 * 0.4, abs=1e-12)
        assert y1 == pytest.approx(0.5 + 0.5 * 0.4, abs=1e-12)

    def test_overreach_clamped_with_warning(self):
        path = straight(2)
        e = env(path)
        spec = MarkSpec(shape="rect", anchor="on_path_above")
        with pytest.warns(GeniiWarning, match="clamped"):
            marks = place_marks(path, e, spec,
                                [rd(0, 90, position=0.5, height=0.9)], clip=False)
        _, _, _, y1 = bbox(marks[0].outline)
        assert y1 == pytest.approx(0.5 + 0.4, abs=1e-12)

    def test_z_order_strictly_increasing(self):
        path = straight(6)
        marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                            [rd(i, 40 + i) for i in range(5)], clip=False)
        assert [m.z_order for m in marks] == sorted(m.z_order for m in marks)
        assert len({m.z_order for m in marks}) == len(marks)

    def test_datum_colour_becomes_fill(self):
        path = straight(3)
        marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                            [rd(0, 50, colour="#56B4E9")], clip=False)
        assert marks[0].style.fill == "#56B4E9"


class TestDataEdgePairing:
    def test_jump_edges_host_nothing_and_take_nothing(self):
        path = make_path([Point(x / 3, 0.5) for x in range(4)], jumps=[1])
        marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                            [rd(0, 30), rd(1, 60)], clip=False)
        assert [m.edge_index for m in marks] == [0, 2]
        heights = [bbox(m.outline)[3] - bbox(m.outline)[1] for m in marks]
        assert heights[1] == pytest.approx(2 * heights[0], rel=1e-9)

    def test_degenerate_edge_swallows_its_datum(self):
        pts = [Point(0, 0.5), Point(0.4, 0.5), Point(0.4, 0.5), Point(1, 0.5)]
        path = make_path(pts)
        marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                            [rd(0, 20), rd(1, 40), rd(2, 80)], clip=False)
        assert [m.edge_index for m in marks] == [0, 2]
        heights = [bbox(m.outline)[3] - bbox(m.outline)[1] for m in marks]
        # edge 2 must carry the THIRD datum (80), not the swallowed 40
        assert heights[1] == pytest.approx(4 * heights[0], rel=1e-9)

    def test_excess_data_warns(self):
        path = straight(3)  # 2 edges
        with pytest.warns(GeniiWarning, match="ignored"):
            marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                                [rd(i, 50) for i in range(5)], clip=False)
        assert len(marks) == 2

    def test_short_data_leaves_edges_bare(self):
        path = straight(6)  # 5 edges
        marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                            [rd(0, 50), rd(1, 50)], clip=False)
        assert len(marks) == 2

    def test_empty_data_no_marks(self):
        path = straight(4)
        assert place_marks(path, env(path), MarkSpec(), []) == []

    @settings(max_examples=60)
    @given(
        n_points=st.integers(2, 12),
        n_data=st.integers(0, 14),
        jump_seed=st.integers(0, 2**16),
    )
    def test_mark_count_invariant(self, n_points, n_data, jump_seed):
        import random

        rng = random.Random(jump_seed)
        jumps = [i for i in range(n_points - 1) if rng.random() < 0.25]
        pts = [Point(k / (n_points - 1), 0.3 + 0.4 * rng.random())
               for k in range(n_points)]
        path = make_path(pts, jumps=jumps)
        draws = path.draw_edge_indices()
        if not draws:
            return
        data = [rd(i, 10 + i, 100) for i in range(n_data)]
        with pywarnings.catch_warnings():
            pywarnings.simplefilter("ignore")
            marks = place_marks(path, env(path), MarkSpec(anchor="on_path_above"),
                                data, clip=False)
        non_jump = [i for i, e in enumerate(path.edges) if e.kind == "draw"]
        expected = sum(
            1 for i in non_jump[:n_data] if not path.edges[i].degenerate
        )
        assert len(marks) == expected
        assert all(m.edge_index in draws for m in marks)


class TestCircles:
    def test_default_radius_half_edge_touching(self):
        path = straight(5)  # 4 edges, length 0.25 each
        e = env(path)
        spec = MarkSpec(shape="circle", anchor="centered")
        data = [rd(i, 50, explicit=False, height=0.0) for i in range(4)]
        marks = place_marks(path, e, spec, data, clip=False)
        assert len(marks) == 4
        for m in marks:
            assert m.ball is not None
            assert m.ball[1] == pytest.approx(0.125, abs=1e-12)
        for m0, m1 in zip(marks, marks[1:]):
            gap = math.dist(m0.ball[0], m1.ball[0]) - (m0.ball[1] + m1.ball[1])
            assert gap == pytest.approx(0.0, abs=1e-12)

    def test_constant_radius_beats_edge_default(self):
        path = straight(5)
        spec = MarkSpec(shape="circle", anchor="centered", radius=0.05)
        data = [rd(0, 50, explicit=False, height=0.0)]
        marks = place_marks(path, env(path), spec, data, clip=False)
        assert marks[0].ball[1] == pytest.approx(0.05)

    def test_explicit_size_channel_beats_constant(self):
        path = straight(5)
        spec = MarkSpec(shape="circle", anchor="centered", radius=0.05)
        data = [rd(0, 50, explicit=True, height=0.5)]
        marks = place_marks(path, env(path), spec, data, clip=False)
        # height fraction x mean reach (0.8) / 2
        assert marks[0].ball[1] == pytest.approx(0.5 * 0.8 / 2, abs=1e-12)

    def test_above_anchor_rim_touches_path(self):
        path = straight(3)
        spec = MarkSpec(shape="circle", anchor="on_path_above", radius=0.07)
        data = [rd(0, 50, explicit=False, height=0.0)]
        marks = place_marks(path, env(path), spec, data, clip=False)
        centre, r = marks[0].ball
        assert centre.y - r == pytest.approx(0.5, abs=1e-12)

    def test_zero_radius_produces_no_mark(self):
        path = straight(3)
        spec = MarkSpec(shape="circle", anchor="centered")
        data = [rd(0, 0, explicit=True, height=0.0)]
        assert place_marks(path, env(path), spec, data, clip=False) == []


class TestOtherShapes:
    def test_triangle_apex_at_height(self):
        path = straight(2)
        spec = MarkSpec(shape="triangle", anchor="on_path_above", gap_fraction=0.0)
        marks = place_marks(path, env(path), spec, [rd(0, 100)], clip=False)
        outline = marks[0].outline
        assert len(outline) == 3
        apex = max(outline, key=lambda p: p.y)
        assert apex.y == pytest.approx(0.9, abs=1e-12)
        assert apex.x == pytest.approx(0.5, abs=1e-12)

    def test_line_is_open_stroke_at_height(self):
        path = straight(2)
        spec = MarkSpec(shape="line", anchor="on_path_above")
        marks = place_marks(path, env(path), spec, [rd(0, 50)], clip=False)
        m = marks[0]
        assert not m.closed
        assert m.style.fill is None and m.style.stroke is not None
        assert all(p.y == pytest.approx(0.5 + 0.2) for p in m.outline)

    def test_arc_is_quadratic_through_control(self):
        path = straight(2)
        spec = MarkSpec(shape="arc", anchor="on_path_above", gap_fraction=0.0)
        marks = place_marks(path, env(path), spec, [rd(0, 100)], clip=False)
        m = marks[0]
        assert not m.closed
        top = max(p.y for p in m.outline)
        # quadratic peaks halfway to the control point
        assert top == pytest.approx(0.5 + 0.4 / 2, abs=1e-9)
        assert m.outline[0].y == pytest.approx(0.5, abs=1e-12)

    def test_text_mark_carries_string(self):
        path = straight(2)
        spec = MarkSpec(shape="text", anchor="on_path_above")
        marks = place_marks(path, env(path), spec,
                            [rd(0, 42, text="answer")], clip=False)
        m = marks[0]
        assert m.text == "answer"
        assert m.font_size == pytest.approx(0.8 * 0.4)

    def test_text_defaults_to_value(self):
        path = straight(2)
        spec = MarkSpec(shape="text", anchor="on_path_above")
        marks = place_marks(path, env(path), spec, [rd(0, 42)], clip=False)
        assert marks[0].text == "42"

    def test_ellipse_angle_rotates_outline(self):
        path = straight(2)
        spec = MarkSpec(shape="ellipse", anchor="centered", gap_fraction=0.5)
        flat = place_marks(path, env(path), spec,
                           [rd(0, 25, explicit=True, height=0.25)], clip=False)
        tilted = place_marks(path, env(path), spec,
                             [rd(0, 25, explicit=True, height=0.25, angle=90.0)],
                             clip=False)
        fx0, fy0, fx1, fy1 = bbox(flat[0].outline)
        tx0, ty0, tx1, ty1 = bbox(tilted[0].outline)
        assert (fx1 - fx0) == pytest.approx(ty1 - ty0, abs=1e-9)
        assert (fy1 - fy0) == pytest.approx(tx1 - tx0, abs=1e-9)


class TestStacking:
    def test_segments_share_boundaries(self):
        path = straight(2)
        spec = MarkSpec(shape="rect", anchor="on_path_above", stacking=True,
                        gap_fraction=0.0)
        data = [rd(i, v, 10) for i, v in enumerate([2, 3, 5])]
        marks = place_marks(path, env(path), spec, data, clip=False)
        assert len(marks) == 3
        assert all(m.edge_index == 0 for m in marks)
        tops = [bbox(m.outline)[3] for m in marks]
        bottoms = [bbox(m.outline)[1] for m in marks]
        assert bottoms[0] == pytest.approx(0.5)
        assert tops[0] == pytest.approx(bottoms[1], abs=1e-12)
        assert tops[1] == pytest.approx(bottoms[2], abs=1e-12)
        assert tops[2] == pytest.approx(0.5 + 0.4, abs=1e-12)

    def test_stack_heights_proportional_to_values(self):
        path = straight(2)
        spec = MarkSpec(shape="rect", anchor="on_path_above", stacking=True)
        data = [rd(i, v, 10) for i, v in enumerate([2, 3, 5])]
        marks = place_marks(path, env(path), spec, data, clip=False)
        heights = [bbox(m.outline)[3] - bbox(m.outline)[1] for m in marks]
        assert heights[0] / heights[1] == pytest.approx(2 / 3, rel=1e-9)
        assert heights[2] / heights[0] == pytest.approx(5 / 2, rel=1e-9)


class TestDonut:
    @staticmethod
    def ring_setup(anchor="on_path_above", radius=0.3, ring_width=0.1,
                   values=(25, 25, 50), range_=100):
        from genii.generators import PathSpec, generate

        path = generate(PathSpec(mode="ring", point_count=len(values) + 1))
        e = build_envelope(path, EnvelopeSpec(top_extent=0.05, bottom_extent=0.05))
        spec = MarkSpec(shape="donut_segment", anchor=anchor, radius=radius,
                        ring_width=ring_width)
        data = [rd(i, v, range_) for i, v in enumerate(values)]
        return path, e, spec, data

    def radii(self, mark):
        centre = Point(0.5, 0.5)
        return [math.dist(p, centre) for p in mark.outline]

    def test_above_band_grows_inward(self):
        path, e, spec, data = self.ring_setup("on_path_above")
        marks = place_marks(path, e, spec, data, clip=False)
        assert len(marks) == 3
        for m in marks:
            rr = self.radii(m)
            assert max(rr) == pytest.approx(0.3, abs=1e-9)
            assert min(rr) == pytest.approx(0.2, abs=1e-9)

    def test_below_band_grows_outward(self):
        path, e, spec, data = self.ring_setup("on_path_below")
        marks = place_marks(path, e, spec, data, clip=False)
        for m in marks:
            rr = self.radii(m)
            assert min(rr) == pytest.approx(0.3, abs=1e-9)
            assert max(rr) == pytest.approx(0.4, abs=1e-9)

    def test_centered_band_splits(self):
        path, e, spec, data = self.ring_setup("centered")
        marks = place_marks(path, e, spec, data, clip=False)
        for m in marks:
            rr = self.radii(m)
            assert min(rr) == pytest.approx(0.25, abs=1e-9)
            assert max(rr) == pytest.approx(0.35, abs=1e-9)

    def test_angular_spans_match_data(self):
        path, e, spec, data = self.ring_setup()
        marks = place_marks(path, e, spec, data, clip=False)
        centre = Point(0.5, 0.5)

        def angle_of(p):
            # clockwise from 12 o'clock
            return math.degrees(math.atan2(p.x - centre.x, p.y - centre.y)) % 360

        # first segment starts at noon (modulo wraparound noise)
        a = angle_of(marks[0].outline[0])
        assert min(a, 360.0 - a) == pytest.approx(0.0, abs=1e-6)
        # sector areas proportional to values: 25:25:50
        areas = [mark_area(m) for m in marks]
        assert areas[0] == pytest.approx(areas[1], rel=1e-6)
        assert areas[2] == pytest.approx(2 * areas[0], rel=1e-4)

    def test_straight_path_without_anchor_rejected(self):
        path = straight(4)
        e = env(path)
        spec = MarkSpec(shape="donut_segment", anchor="on_path_above")
        with pytest.raises(ShapeUnsupportedOnPath):
            place_marks(path, e, spec, [rd(0, 75)], clip=False)

    def test_star_anchor_enables_straight_path(self):
        path = straight(4)
        e = env(path)
        spec = MarkSpec(shape="donut_segment", anchor="on_path_above",
                        star_anchor=Point(0.5, 0.5), radius=0.3, ring_width=0.1)
        marks = place_marks(path, e, spec, [rd(0, 75)], clip=False)
        assert len(marks) == 1
        rr = [math.dist(p, Point(0.5, 0.5)) for p in marks[0].outline]
        assert max(rr) == pytest.approx(0.3, abs=1e-9)

    def test_empty_data_no_marks(self):
        path, e, spec, _ = self.ring_setup()
        assert place_marks(path, e, spec, [], clip=False) == []


class TestScatter:
    POINTS = [Point(0.1, 0.2), Point(0.5, 0.9), Point(0.8, 0.4)]

    def test_strategies_share_mark_centres(self):
        _, marks_a = scatter_place(self.POINTS, "vertical_from_axis")
        _, marks_b = scatter_place(self.POINTS, "path_through_data")
        centres_a = [m.ball[0] for m in marks_a]
        centres_b = [m.ball[0] for m in marks_b]
        assert centres_a == centres_b == self.POINTS

    def test_axis_strategy_flattens_path(self):
        path, _ = scatter_place(self.POINTS, "vertical_from_axis")
        assert all(v.y == 0.0 for v in path.vertices)
        assert [v.x for v in path.vertices] == [p.x for p in self.POINTS]

    def test_data_strategy_threads_points(self):
        path, _ = scatter_place(self.POINTS, "path_through_data")
        assert list(path.vertices) == self.POINTS

    def test_single_point(self):
        path, marks = scatter_place([Point(0.3, 0.7)], "path_through_data")
        assert len(path.vertices) == 1
        assert len(marks) == 1
        assert marks[0].edge_index == 0

    def test_unknown_strategy(self):
        with pytest.raises(ShapeUnsupportedOnPath):
            scatter_place(self.POINTS, "sprinkle")


class TestJitter:
    def test_same_seed_same_geometry(self):
        path = straight(5)
        spec = MarkSpec(shape="rect", anchor="on_path_above", jitter=0.05)
        data = [rd(i, 50) for i in range(4)]
        a = place_marks(path, env(path), spec, data, rng=seeded_rng(42), clip=False)
        b = place_marks(path, env(path), spec, data, rng=seeded_rng(42), clip=False)
        assert [m.outline for m in a] == [m.outline for m in b]

    def test_different_seed_moves_marks(self):
        path = straight(5)
        spec = MarkSpec(shape="rect", anchor="on_path_above", jitter=0.05)
        data = [rd(i, 50) for i in range(4)]
        a = place_marks(path, env(path), spec, data, rng=seeded_rng(1), clip=False)
        b = place_marks(path, env(path), spec, data, rng=seeded_rng(2), clip=False)
        assert [m.outline for m in a] != [m.outline for m in b]

    def test_jitter_moves_along_edge_only(self):
        path = straight(5)  # horizontal: edge direction is pure x
        spec = MarkSpec(shape="rect", anchor="on_path_above", jitter=0.08)
        plain = place_marks(path, env(path), MarkSpec(shape="rect", anchor="on_path_above"),
                            [rd(0, 50)], clip=False)
        moved = place_marks(path, env(path), spec, [rd(0, 50)],
                            rng=seeded_rng(9), clip=False)
        ys_plain = sorted(round(p.y, 12) for p in plain[0].outline)
        ys_moved = sorted(round(p.y, 12) for p in moved[0].outline)
        assert ys_plain == ys_moved

    def test_zero_jitter_ignores_rng(self):
        path = straight(5)
        spec = MarkSpec(shape="rect", anchor="on_path_above", jitter=0.0)
        data = [rd(i, 50) for i in range(4)]
        a = place_marks(path, env(path), spec, data, rng=seeded_rng(1), clip=False)
        b = place_marks(path, env(path), spec, data, rng=seeded_rng(2), clip=False)
        assert [m.outline for m in a] == [m.outline for m in b]


class TestClipping:
    def test_marks_clipped_into_envelope(self):
        from shapely.geometry import Point as ShPoint

        from genii.envelope import envelope_region

        path = straight(4)
        e = env(path, top=0.1, bottom=0.1)
        spec = MarkSpec(shape="circle", anchor="centered", radius=0.3)
        data = [rd(i, 50, explicit=False, height=0.0) for i in range(3)]
        marks = place_marks(path, e, spec, data, clip=True)
        region = envelope_region(e).buffer(1e-9)
        for m in marks:
            for p in m.outline:
                assert region.contains(ShPoint(p.x, p.y)) or region.boundary.distance(
                    ShPoint(p.x, p.y)
                ) < 1e-9

    def test_clip_false_leaves_overhang(self):
        path = straight(4)
        e = env(path, top=0.1, bottom=0.1)
        spec = MarkSpec(shape="circle", anchor="centered", radius=0.3)
        data = [rd(0, 50, explicit=False, height=0.0)]
        raw = place_marks(path, e, spec, data, clip=False)
        _, y0, _, y1 = bbox(raw[0].outline)
        assert y1 - y0 > 0.2  # overhangs the 0.2-tall envelope band
