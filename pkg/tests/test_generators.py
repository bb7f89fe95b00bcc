"""Path generators: layout modes, grid curves, rotation.

The grid-curve tests use independent construction oracles: the recursive
quadrant assembly for the first curve family and the recursive 3x3 mirror
assembly for the second, plus bit-string de-interleaving for the index-
derived walks. These are different mechanisms from the iterative index
decoders in the implementation, so agreement is evidence, not tautology.
"""

import math
import warnings

import pytest

from genii.errors import BadOrder, MissingPoints, UnknownMode
from genii.generators import (
    GOLDEN_RATIO,
    PATH_CATALOGUE,
    PATH_MODES,
    PathSpec,
    generate,
    gray_d2xy,
    hilbert_d2xy,
    peano_d2xy,
    z_mirror_d2xy,
)
from genii.path import Point


# --------------------------------------------------------------------------
# independent curve oracles
# --------------------------------------------------------------------------

def hilbert_oracle(order):
    """Recursive quadrant assembly: transpose, shift-up, shift-up-right,
    anti-transpose-right."""
    pts = [(0, 0)]
    for n in range(1, order + 1):
        s = 2 ** (n - 1)
        q1 = [(y, x) for x, y in pts]
        q2 = [(x, y + s) for x, y in pts]
        q3 = [(x + s, y + s) for x, y in pts]
        q4 = [(2 * s - 1 - y, s - 1 - x) for x, y in pts]
        pts = q1 + q2 + q3 + q4
    return pts


def peano_oracle(order):
    """Recursive 3x3 block assembly, serpentine columns, mirror rule:
    x-mirror for odd block rows, y-mirror for odd block columns."""
    pts = [(0, 0)]
    for n in range(1, order + 1):
        s = 3 ** (n - 1)
        blocks = []
        for t in range(9):
            c = t // 3
            r = t % 3 if c % 2 == 0 else 2 - t % 3
            blocks.append((c, r))
        nxt = []
        for c, r in blocks:
            for x, y in pts:
                xx = s - 1 - x if r % 2 == 1 else x
                yy = s - 1 - y if c % 2 == 1 else y
                nxt.append((c * s + xx, r * s + yy))
        pts = nxt
    return pts


def deinterleave(bits_int, order):
    """x from even bit positions, y from odd, via string slicing."""
    text = format(bits_int, f"0{2 * order}b")
    x_bits = text[-1::-2][::-1] or "0"  # even positions counted from LSB
    y_bits = text[-2::-2][::-1] or "0"
    return int(x_bits, 2), int(y_bits, 2)


def z_mirror_oracle(k, order):
    side = 2 ** order
    x, y = deinterleave(k, order)
    if y % 2 == 1:
        x = side - 1 - x
    return x, y


def is_bijection(cells, side):
    return len(cells) == side * side and len(set(cells)) == side * side


def is_unit_adjacent(cells):
    return all(
        abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
        for a, b in zip(cells, cells[1:])
    )


def quadrant_partition_holds(cells, order):
    """Every contiguous quarter of the sequence fills exactly one quadrant,
    recursively. Convention-independent structural property."""
    if order == 0 or len(cells) <= 1:
        return True
    side = 2 ** order
    half = side // 2
    quarter = len(cells) // 4
    for q in range(4):
        chunk = cells[q * quarter:(q + 1) * quarter]
        quads = {(x >= half, y >= half) for x, y in chunk}
        if len(quads) != 1:
            return False
        qx, qy = next(iter(quads))
        local = [(x - half * qx, y - half * qy) for x, y in chunk]
        if not quadrant_partition_holds(local, order - 1):
            return False
    return True


# --------------------------------------------------------------------------
# curve decoders
# --------------------------------------------------------------------------

class TestHilbert:
    def test_order_1_is_u_opening_toward_plus_x(self):
        side = 2
        cells = [hilbert_d2xy(side, d) for d in range(4)]
        assert cells == [(0, 0), (0, 1), (1, 1), (1, 0)]

    def test_order_2_exact(self):
        side = 4
        cells = [hilbert_d2xy(side, d) for d in range(16)]
        assert cells == [
            (0, 0), (1, 0), (1, 1), (0, 1),
            (0, 2), (0, 3), (1, 3), (1, 2),
            (2, 2), (2, 3), (3, 3), (3, 2),
            (3, 1), (2, 1), (2, 0), (3, 0),
        ]

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_matches_recursive_oracle(self, order):
        side = 2 ** order
        cells = [hilbert_d2xy(side, d) for d in range(side * side)]
        assert cells == hilbert_oracle(order)

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_bijection_adjacency_endpoints(self, order):
        side = 2 ** order
        cells = [hilbert_d2xy(side, d) for d in range(side * side)]
        assert is_bijection(cells, side)
        assert is_unit_adjacent(cells)
        assert cells[0] == (0, 0)
        assert cells[-1] == (side - 1, 0)
        assert quadrant_partition_holds(cells, order)


class TestPeano:
    def test_order_1_serpentine_columns(self):
        cells = [peano_d2xy(3, d) for d in range(9)]
        assert cells == [
            (0, 0), (0, 1), (0, 2),
            (1, 2), (1, 1), (1, 0),
            (2, 0), (2, 1), (2, 2),
        ]

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_matches_recursive_oracle(self, order):
        side = 3 ** order
        cells = [peano_d2xy(side, d) for d in range(side * side)]
        assert cells == peano_oracle(order)

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_bijection_adjacency_endpoints(self, order):
        side = 3 ** order
        cells = [peano_d2xy(side, d) for d in range(side * side)]
        assert is_bijection(cells, side)
        assert is_unit_adjacent(cells)
        assert cells[0] == (0, 0)
        assert cells[-1] == (side - 1, side - 1)


class TestZMirrorAndGray:
    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_z_mirror_matches_bitstring_oracle(self, order):
        side = 2 ** order
        for k in range(side * side):
            assert z_mirror_d2xy(side, k) == z_mirror_oracle(k, order)

    def test_z_mirror_order_2_prefix(self):
        cells = [z_mirror_d2xy(4, k) for k in range(8)]
        assert cells == [
            (0, 0), (1, 0), (3, 1), (2, 1),
            (2, 0), (3, 0), (1, 1), (0, 1),
        ]

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_z_mirror_bijection(self, order):
        side = 2 ** order
        cells = [z_mirror_d2xy(side, k) for k in range(side * side)]
        assert is_bijection(cells, side)

    def test_gray_order_1(self):
        cells = [gray_d2xy(2, k) for k in range(4)]
        assert cells == [(0, 0), (1, 0), (1, 1), (0, 1)]

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_gray_bijection_and_one_bit_steps(self, order):
        side = 2 ** order
        cells = [gray_d2xy(side, k) for k in range(side * side)]
        assert is_bijection(cells, side)
        for k in range(side * side - 1):
            g0 = k ^ (k >> 1)
            g1 = (k + 1) ^ ((k + 1) >> 1)
            diff = g0 ^ g1
            assert diff != 0 and (diff & (diff - 1)) == 0  # exactly one bit


# --------------------------------------------------------------------------
# layout modes
# --------------------------------------------------------------------------

class TestInline:
    def test_three_points(self):
        path = generate(PathSpec(mode="inline_linear", point_count=3))
        assert [(v.x, v.y) for v in path.vertices] == [
            (0.0, 0.5), (0.5, 0.5), (1.0, 0.5)
        ]

    def test_point_distance_overrides_spread(self):
        path = generate(
            PathSpec(mode="inline_linear", point_count=3, point_distance=0.25)
        )
        assert [v.x for v in path.vertices] == [0.0, 0.25, 0.5]

    def test_point_distance_clamped_at_border(self):
        path = generate(
            PathSpec(mode="inline_linear", point_count=4, point_distance=0.5)
        )
        assert [v.x for v in path.vertices] == [0.0, 0.5, 1.0, 1.0]
        assert path.edges[2].degenerate

    def test_single_point(self):
        path = generate(PathSpec(mode="inline_linear", point_count=1))
        assert len(path.vertices) == 1 and len(path.edges) == 0


class TestRing:
    def test_four_segments_five_vertices(self):
        path = generate(PathSpec(mode="ring", point_count=5))
        assert len(path.vertices) == 5
        assert path.vertices[0] == Point(1.0, 0.5)
        assert path.vertices[-1] == path.vertices[0]
        for v in path.vertices:
            assert math.hypot(v.x - 0.5, v.y - 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_counter_clockwise_from_three_oclock(self):
        path = generate(PathSpec(mode="ring", point_count=5))
        assert path.vertices[1].x == pytest.approx(0.5, abs=1e-12)
        assert path.vertices[1].y == pytest.approx(1.0, abs=1e-12)


class TestOtherModes:
    def test_zigzag_alternates_lanes(self):
        path = generate(PathSpec(mode="zigzag", point_count=4))
        assert [v.y for v in path.vertices] == [0.75, 0.25, 0.75, 0.25]

    def test_disjoint_inline_default_jump_in_middle(self):
        path = generate(PathSpec(mode="disjoint_inline", point_count=4))
        kinds = [e.kind for e in path.edges]
        assert kinds.count("jump") == 1
        # two rows: the first row sits above the second (y decreases)
        ys = sorted({v.y for v in path.vertices}, reverse=True)
        assert len(ys) == 2
        assert path.vertices[0].y == ys[0]

    def test_disjoint_inline_explicit_jumps(self):
        path = generate(
            PathSpec(mode="disjoint_inline", point_count=12, jumps=(3, 7))
        )
        assert [i for i, e in enumerate(path.edges) if e.kind == "jump"] == [3, 7]
        assert len({v.y for v in path.vertices}) == 3

    def test_parametric_spiral_turns_square(self):
        path = generate(PathSpec(mode="parametric_spiral", point_count=7))
        assert len(path.vertices) == 7
        for v in path.vertices:
            assert 0.0 <= v.x <= 1.0 and 0.0 <= v.y <= 1.0

    def test_golden_spiral_radius_grows_by_phi_per_quarter_turn(self):
        path = generate(PathSpec(mode="golden_spiral", point_count=11))
        # vertices are evenly spaced in angle over 2.5 turns = 10 quarters
        radii = [math.hypot(v.x - 0.5, v.y - 0.5) for v in path.vertices]
        ratios = [radii[i + 1] / radii[i] for i in range(len(radii) - 1)]
        expected = GOLDEN_RATIO ** (2.5 * 2 * math.pi / 10 / (math.pi / 2))
        for r in ratios:
            assert r == pytest.approx(expected, rel=1e-9)

    def test_sweep_is_row_major_bottom_up(self):
        path = generate(PathSpec(mode="sweep", point_count=9))
        cells = [(round(v.x * 3 - 0.5), round(v.y * 3 - 0.5)) for v in path.vertices]
        assert cells == [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1),
                         (0, 2), (1, 2), (2, 2)]

    def test_scan_serpentines(self):
        path = generate(PathSpec(mode="scan", point_count=9))
        cells = [(round(v.x * 3 - 0.5), round(v.y * 3 - 0.5)) for v in path.vertices]
        assert cells == [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1),
                         (0, 2), (1, 2), (2, 2)]

    def test_diagonal_walks_antidiagonals(self):
        path = generate(PathSpec(mode="diagonal", point_count=9))
        cells = [(round(v.x * 3 - 0.5), round(v.y * 3 - 0.5)) for v in path.vertices]
        for a, b in zip(cells, cells[1:]):
            assert abs((a[0] + a[1]) - (b[0] + b[1])) <= 1
        assert sorted(cells) == [(x, y) for x in range(3) for y in range(3)]

    def test_user_points_with_jumps(self):
        path = generate(
            PathSpec(
                mode="user_points",
                user_points=((0, 0), (0.5, 1), (1, 0)),
                jumps=(1,),
            )
        )
        assert len(path.vertices) == 3
        assert path.edges[1].kind == "jump"

    def test_user_points_drop_null_entries(self):
        path = generate(
            PathSpec(mode="user_points", user_points=((0, 0), None, (1, 1)))
        )
        assert len(path.vertices) == 2

    def test_out_of_range_jump_warns_and_skips(self):
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            path = generate(
                PathSpec(mode="inline_linear", point_count=3, jumps=(99,))
            )
        assert len(w) == 1
        assert all(e.kind == "draw" for e in path.edges)


class TestGridSizing:
    def test_order_beats_point_count(self):
        path = generate(PathSpec(mode="hilbert", order=2, point_count=9999))
        assert len(path.vertices) == 16

    def test_point_count_must_be_square_for_grids(self):
        with pytest.raises(BadOrder):
            generate(PathSpec(mode="sweep", point_count=10))

    def test_point_count_must_be_power_of_base(self):
        with pytest.raises(BadOrder):
            generate(PathSpec(mode="hilbert", point_count=36))  # 6x6, not 2^k

    def test_peano_accepts_power_of_three(self):
        path = generate(PathSpec(mode="peano", point_count=81))
        assert len(path.vertices) == 81

    def test_cells_map_to_cell_centres(self):
        path = generate(PathSpec(mode="hilbert", order=1))
        assert path.vertices[0] == Point(0.25, 0.25)
        assert path.vertices[1] == Point(0.25, 0.75)


class TestRotation:
    def test_zero_degrees_is_identity(self):
        a = generate(PathSpec(mode="zigzag", point_count=5))
        b = generate(PathSpec(mode="zigzag", point_count=5, rotation_deg=0))
        assert a.vertices == b.vertices

    def test_ninety_degrees_turns_inline_vertical(self):
        path = generate(
            PathSpec(mode="inline_linear", point_count=2, rotation_deg=90)
        )
        assert path.vertices[0].x == pytest.approx(0.5, abs=1e-12)
        assert path.vertices[0].y == pytest.approx(0.0, abs=1e-12)
        assert path.vertices[1].x == pytest.approx(0.5, abs=1e-12)
        assert path.vertices[1].y == pytest.approx(1.0, abs=1e-12)

    def test_full_turn_is_identity_within_tolerance(self):
        a = generate(PathSpec(mode="zigzag", point_count=5))
        b = generate(PathSpec(mode="zigzag", point_count=5, rotation_deg=360))
        for va, vb in zip(a.vertices, b.vertices):
            assert va.x == pytest.approx(vb.x, abs=1e-12)
            assert va.y == pytest.approx(vb.y, abs=1e-12)

    def test_rotated_vertices_stay_clamped(self):
        path = generate(PathSpec(mode="sweep", point_count=16, rotation_deg=45))
        for v in path.vertices:
            assert 0.0 <= v.x <= 1.0 and 0.0 <= v.y <= 1.0


class TestSpecValidation:
    def test_unknown_mode_lists_valid_modes(self):
        with pytest.raises(UnknownMode) as exc:
            PathSpec(mode="wiggly").validate()
        assert "inline_linear" in str(exc.value)

    def test_user_points_requires_points(self):
        with pytest.raises(MissingPoints):
            generate(PathSpec(mode="user_points"))

    def test_order_range(self):
        with pytest.raises(BadOrder):
            PathSpec(mode="hilbert", order=13).validate()

    def test_determinism(self):
        spec = PathSpec(mode="hilbert", order=3, rotation_deg=30)
        a, b = generate(spec), generate(spec)
        assert a.vertices == b.vertices
        assert [(e.kind, e.degenerate) for e in a.edges] == [
            (e.kind, e.degenerate) for e in b.edges
        ]

    def test_catalogue_covers_every_mode(self):
        assert set(PATH_CATALOGUE) == set(PATH_MODES)
        for info in PATH_CATALOGUE.values():
            assert info["description"]
