"""Filters: post-placement geometry and style transforms.

Combination modes operate pairwise in z-order within a visual group:
``overlap`` leaves everything as painted, ``cutout`` subtracts every later
mark from each earlier one (same look, disjoint geometry), ``union`` /
``intersect`` / ``subtract`` fold the group into one shape. Results are
polygons with holes carried as opposite-winding rings (even-odd fill).

Metaballs follow the classic inverse-square field: each ball contributes
r^2 / |p - c|^2, the merged outline is the iso-contour of the summed field
at the threshold (1.0 by default), traced by marching squares over a sampled
grid with linear edge interpolation; ambiguous saddle cells are resolved by
sampling the cell centre. The grid covers the bounding box of the balls
padded by the largest radius, so the contour of an isolated ball never hits
the border.

Corner rounding replaces each polygon corner with a sampled quarter-ish arc
tangent to both sides; smoothing is corner cutting (each edge yields its
1/4 and 3/4 points, doubling the vertex count per iteration). Blur and
shadow do not touch geometry — they are carried on the style and emitted as
document filter effects.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Iterable, Sequence

import numpy as np
from shapely.geometry import MultiPolygon, Polygon
from shapely.ops import unary_union

from .colors import parse_colour
from .envelope import shapely_to_rings
from .errors import NonPolygonalInput, RadiusTooLarge
from .marks import MarkGeometry, Style
from .path import Point

__all__ = [
    "combine",
    "metaball_field",
    "metaball_merge",
    "apply_style",
    "round_corners",
    "smooth",
    "COMBINE_MODES",
]

COMBINE_MODES = ("overlap", "cutout", "union", "intersect", "subtract")

ARC_SEGMENTS = 32  # per rounded corner


# --------------------------------------------------------------------------
# boolean combination
# --------------------------------------------------------------------------

def _to_shapely(mark: MarkGeometry) -> Polygon:
    if not mark.closed or len(mark.outline) < 3:
        raise NonPolygonalInput(
            f"mark at z={mark.z_order} is not a closed polygon; "
            "boolean modes need closed outlines"
        )
    poly = Polygon(
        [(p.x, p.y) for p in mark.outline],
        [[(p.x, p.y) for p in h] for h in mark.holes],
    )
    if not poly.is_valid:
        poly = poly.buffer(0)
    return poly


def _from_shapely(geom, template: MarkGeometry) -> list[MarkGeometry]:
    out = []
    for shell, holes in shapely_to_rings(geom):
        out.append(replace(
            template,
            outline=tuple(shell),
            holes=tuple(tuple(h) for h in holes),
            ball=None,
        ))
    return out


def combine(marks: Sequence[MarkGeometry], mode: str) -> list[MarkGeometry]:
    """Combine a group of closed marks. See module docstring for semantics."""
    if mode not in COMBINE_MODES:
        raise NonPolygonalInput(f"unknown combine mode {mode!r}; valid: {', '.join(COMBINE_MODES)}")
    if mode == "overlap" or not marks:
        return list(marks)
    solids = [m for m in marks if m.text is None]
    texts = [m for m in marks if m.text is not None]
    if not solids:
        return list(marks)
    polys = [_to_shapely(m) for m in solids]

    result: list[MarkGeometry] = []
    if mode == "cutout":
        for i, (mark, poly) in enumerate(zip(solids, polys)):
            later = [p for p in polys[i + 1:] if not p.is_empty]
            shape = poly
            if later:
                shape = poly.difference(unary_union(later))
            result.extend(_from_shapely(shape, mark))
    elif mode == "union":
        shape = unary_union(polys)
        result.extend(_from_shapely(shape, solids[0]))
    elif mode == "intersect":
        shape = polys[0]
        for p in polys[1:]:
            shape = shape.intersection(p)
        result.extend(_from_shapely(shape, solids[0]))
    elif mode == "subtract":
        shape = polys[0]
        rest = [p for p in polys[1:] if not p.is_empty]
        if rest:
            shape = shape.difference(unary_union(rest))
        result.extend(_from_shapely(shape, solids[0]))
    result.extend(texts)
    return [replace(m, z_order=i) for i, m in enumerate(result)]


# --------------------------------------------------------------------------
# metaballs
# --------------------------------------------------------------------------

def metaball_field(p: Point, balls: Sequence[tuple[Point, float]]) -> float:
    """Summed inverse-square field at p; infinite exactly on a centre."""
    total = 0.0
    for centre, r in balls:
        dx = p[0] - centre[0]
        dy = p[1] - centre[1]
        d2 = dx * dx + dy * dy
        if d2 == 0.0:
            return math.inf
        total += (r * r) / d2
    return total


def metaball_merge(
    balls: Sequence[tuple[Point, float]],
    threshold: float = 1.0,
    grid_resolution: int = 128,
) -> list[list[Point]]:
    """Iso-contours of the summed ball field, as closed point rings.

    Contours are traced with marching squares over a (grid_resolution + 1)^2
    sample lattice spanning the padded bounding box of the balls; crossing
    positions are linearly interpolated along cell edges, and the two
    ambiguous saddle cases are split according to the field value at the
    cell centre.
    """
    balls = [(Point(float(c[0]), float(c[1])), float(r)) for c, r in balls if r > 0]
    if not balls or threshold <= 0:
        return []
    r_max = max(r for _, r in balls)
    x0 = min(c.x - r for c, r in balls) - r_max
    x1 = max(c.x + r for c, r in balls) + r_max
    y0 = min(c.y - r for c, r in balls) - r_max
    y1 = max(c.y + r for c, r in balls) + r_max

    n = max(8, int(grid_resolution))
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    field = np.zeros_like(gx)
    for centre, r in balls:
        d2 = (gx - centre.x) ** 2 + (gy - centre.y) ** 2
        with np.errstate(divide="ignore"):
            field += np.where(d2 > 0, (r * r) / np.where(d2 > 0, d2, 1.0), np.inf)

    inside = field >= threshold
    segments = _march(xs, ys, field, inside, threshold, balls)
    return _chain_segments(segments)


def _lerp_cross(va: float, vb: float, a: float, b: float, threshold: float) -> float:
    """Coordinate where the field crosses the threshold between two samples."""
    if math.isinf(va):
        return a
    if math.isinf(vb):
        return b
    denom = vb - va
    t = 0.5 if abs(denom) < 1e-300 else (threshold - va) / denom
    t = min(max(t, 0.0), 1.0)
    return a + (b - a) * t


def _march(xs, ys, field, inside, threshold, balls):
    """Emit oriented segments per cell; contour keeps the inside on its left."""
    n_x, n_y = field.shape
    segments = []
    for i in range(n_x - 1):
        for j in range(n_y - 1):
            # corner order: a=(i,j) bottom-left, b=(i+1,j), c=(i+1,j+1), d=(i,j+1)
            a = inside[i, j]
            b = inside[i + 1, j]
            c = inside[i + 1, j + 1]
            d = inside[i, j + 1]
            case = (a << 0) | (b << 1) | (c << 2) | (d << 3)
            if case == 0 or case == 15:
                continue
            fa, fb = field[i, j], field[i + 1, j]
            fc, fd = field[i + 1, j + 1], field[i, j + 1]
            x_a, x_b = xs[i], xs[i + 1]
            y_a, y_b = ys[j], ys[j + 1]

            def south():
                return Point(_lerp_cross(fa, fb, x_a, x_b, threshold), y_a)

            def north():
                return Point(_lerp_cross(fd, fc, x_a, x_b, threshold), y_b)

            def west():
                return Point(x_a, _lerp_cross(fa, fd, y_a, y_b, threshold))

            def east():
                return Point(x_b, _lerp_cross(fb, fc, y_a, y_b, threshold))

            # Oriented so that walking start->end keeps the inside region on
            # the left; contours therefore come out CCW around solids and CW
            # around holes, which is what the shell/hole classifier expects.
            if case == 1:
                segments.append((south(), west()))
            elif case == 2:
                segments.append((east(), south()))
            elif case == 3:
                segments.append((east(), west()))
            elif case == 4:
                segments.append((north(), east()))
            elif case == 5:  # saddle: a and c inside
                cx = (x_a + x_b) / 2.0
                cy = (y_a + y_b) / 2.0
                centre_in = metaball_field(Point(cx, cy), balls) >= threshold
                if centre_in:
                    segments.append((north(), west()))
                    segments.append((south(), east()))
                else:
                    segments.append((south(), west()))
                    segments.append((north(), east()))
            elif case == 6:
                segments.append((north(), south()))
            elif case == 7:
                segments.append((north(), west()))
            elif case == 8:
                segments.append((west(), north()))
            elif case == 9:
                segments.append((south(), north()))
            elif case == 10:  # saddle: b and d inside
                cx = (x_a + x_b) / 2.0
                cy = (y_a + y_b) / 2.0
                centre_in = metaball_field(Point(cx, cy), balls) >= threshold
                if centre_in:
                    segments.append((east(), north()))
                    segments.append((west(), south()))
                else:
                    segments.append((west(), north()))
                    segments.append((east(), south()))
            elif case == 11:
                segments.append((east(), north()))
            elif case == 12:
                segments.append((west(), east()))
            elif case == 13:
                segments.append((south(), east()))
            elif case == 14:
                segments.append((west(), south()))
    return segments


def _chain_segments(segments) -> list[list[Point]]:
    """Stitch oriented segments into closed rings (endpoints quantised)."""

    def key(p: Point):
        return (round(p.x, 12), round(p.y, 12))

    by_start: dict[tuple, list[int]] = {}
    for idx, seg in enumerate(segments):
        by_start.setdefault(key(seg[0]), []).append(idx)
    used = [False] * len(segments)
    rings: list[list[Point]] = []
    for idx in range(len(segments)):
        if used[idx]:
            continue
        used[idx] = True
        start_key = key(segments[idx][0])
        ring = [segments[idx][0], segments[idx][1]]
        while True:
            k = key(ring[-1])
            if k == start_key:
                ring.pop()  # the closing point duplicates the start
                break
            candidates = by_start.get(k)
            nxt = None
            while candidates:
                cand = candidates.pop()
                if not used[cand]:
                    nxt = cand
                    break
            if nxt is None:
                break  # open chain: contour left the sampled box
            used[nxt] = True
            ring.append(segments[nxt][1])
        if len(ring) >= 3:
            rings.append(ring)
    return rings


# --------------------------------------------------------------------------
# styling
# --------------------------------------------------------------------------

def apply_style(marks: Iterable[MarkGeometry], kind: str, params: dict) -> list[MarkGeometry]:
    """Broadcast one style filter over marks. Raises BadColour on junk input."""
    out = []
    for m in marks:
        s = m.style
        if kind == "solid_fill":
            colour = params.get("colour", "#000000")
            parse_colour(colour)
            s = replace(s, fill=colour, gradient=None)
        elif kind == "linear_gradient":
            stops = tuple((st["offset"], st["colour"]) for st in params["stops"])
            for _, c in stops:
                parse_colour(c)
            s = replace(s, gradient=("linear", stops, params.get("direction", "vertical")))
        elif kind == "radial_gradient":
            stops = tuple((st["offset"], st["colour"]) for st in params["stops"])
            for _, c in stops:
                parse_colour(c)
            s = replace(s, gradient=("radial", stops))
        elif kind == "stroke":
            colour = params.get("colour", "#000000")
            parse_colour(colour)
            s = replace(s, stroke=colour, stroke_width=float(params.get("width", 1.0)))
        elif kind == "opacity":
            s = replace(s, opacity=float(params.get("value", 1.0)))
        elif kind == "blur":
            s = replace(s, effects=s.effects + (("blur", float(params.get("radius", 2.0))),))
        elif kind == "shadow":
            colour = params.get("colour", "#00000080")
            parse_colour(colour)
            s = replace(s, effects=s.effects + (
                ("shadow", float(params.get("dx", 2.0)), float(params.get("dy", 2.0)),
                 float(params.get("blur", 2.0)), colour),
            ))
        else:
            raise NonPolygonalInput(f"unknown style filter {kind!r}")
        out.append(replace(m, style=s))
    return out


# --------------------------------------------------------------------------
# geometry refinement
# --------------------------------------------------------------------------

def _ring_round_corners(ring: Sequence[Point], radius: float) -> list[Point]:
    n = len(ring)
    if n < 3:
        return list(ring)
    # the radius must fit on every adjacent half-edge
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        side = math.hypot(b.x - a.x, b.y - a.y)
        if side > 1e-12 and radius > side / 2.0 + 1e-12:
            raise RadiusTooLarge(
                f"corner radius {radius:g} exceeds half of a {side:g}-long side"
            )
    out: list[Point] = []
    for i in range(n):
        prev = ring[(i - 1) % n]
        cur = ring[i]
        nxt = ring[(i + 1) % n]
        v_in = Point(cur.x - prev.x, cur.y - prev.y)
        v_out = Point(nxt.x - cur.x, nxt.y - cur.y)
        len_in = math.hypot(*v_in)
        len_out = math.hypot(*v_out)
        if len_in < 1e-12 or len_out < 1e-12:
            out.append(cur)
            continue
        u_in = Point(v_in.x / len_in, v_in.y / len_in)
        u_out = Point(v_out.x / len_out, v_out.y / len_out)
        cross = u_in.x * u_out.y - u_in.y * u_out.x
        dot = u_in.x * u_out.x + u_in.y * u_out.y
        turn = math.atan2(cross, dot)
        if abs(turn) < 1e-9:
            out.append(cur)  # straight-through vertex, nothing to round
            continue
        # tangent points where the arc meets both sides
        t = radius * math.tan(abs(turn) / 2.0)
        t = min(t, len_in / 2.0, len_out / 2.0)
        p_in = Point(cur.x - u_in.x * t, cur.y - u_in.y * t)
        p_out = Point(cur.x + u_out.x * t, cur.y + u_out.y * t)
        # arc centre sits perpendicular to the incoming side at distance radius
        sign = 1.0 if turn > 0 else -1.0
        normal_in = Point(-u_in.y * sign, u_in.x * sign)
        centre = Point(p_in.x + normal_in.x * radius, p_in.y + normal_in.y * radius)
        a_start = math.atan2(p_in.y - centre.y, p_in.x - centre.x)
        a_end = math.atan2(p_out.y - centre.y, p_out.x - centre.x)
        sweep = a_end - a_start
        while sweep > math.pi:
            sweep -= 2 * math.pi
        while sweep < -math.pi:
            sweep += 2 * math.pi
        for k in range(ARC_SEGMENTS + 1):
            ang = a_start + sweep * k / ARC_SEGMENTS
            out.append(Point(centre.x + radius * math.cos(ang),
                             centre.y + radius * math.sin(ang)))
    return out


def round_corners(marks: Iterable[MarkGeometry], radius: float) -> list[MarkGeometry]:
    """Round every polygon corner with an arc tangent to both sides.

    Raises RadiusTooLarge when the radius cannot fit the shortest side.
    Open polylines and text pass through unchanged; radius 0 is the identity.
    """
    if radius <= 0.0:
        return list(marks)
    out = []
    for m in marks:
        if not m.closed or m.text is not None or len(m.outline) < 3:
            out.append(m)
            continue
        shell = _ring_round_corners(m.outline, radius)
        holes = tuple(tuple(_ring_round_corners(h, radius)) for h in m.holes)
        out.append(replace(m, outline=tuple(shell), holes=holes, ball=None))
    return out


def _chaikin(ring: Sequence[Point], closed: bool) -> list[Point]:
    n = len(ring)
    out: list[Point] = []
    if closed:
        for i in range(n):
            a = ring[i]
            b = ring[(i + 1) % n]
            out.append(Point(a.x * 0.75 + b.x * 0.25, a.y * 0.75 + b.y * 0.25))
            out.append(Point(a.x * 0.25 + b.x * 0.75, a.y * 0.25 + b.y * 0.75))
    else:
        out.append(ring[0])
        for i in range(n - 1):
            a = ring[i]
            b = ring[i + 1]
            out.append(Point(a.x * 0.75 + b.x * 0.25, a.y * 0.75 + b.y * 0.25))
            out.append(Point(a.x * 0.25 + b.x * 0.75, a.y * 0.25 + b.y * 0.75))
        out.append(ring[-1])
    return out


def smooth(marks: Iterable[MarkGeometry], iterations: int = 3) -> list[MarkGeometry]:
    """Corner-cutting smoothing; closed outlines double their vertex count
    per iteration (each edge contributes its 1/4 and 3/4 points)."""
    out = []
    for m in marks:
        if m.text is not None or len(m.outline) < 3:
            out.append(m)
            continue
        shell = list(m.outline)
        holes = [list(h) for h in m.holes]
        for _ in range(max(0, iterations)):
            shell = _chaikin(shell, m.closed)
            holes = [_chaikin(h, True) for h in holes]
        out.append(replace(m, outline=tuple(shell),
                           holes=tuple(tuple(h) for h in holes), ball=None))
    return out
