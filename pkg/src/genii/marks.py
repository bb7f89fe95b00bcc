"""Mark placement: objects sitting on draw edges, sized by data.

Every drawable edge can host one mark (or several when stacking). A mark's
default width is the edge length minus the gap fraction (5% by default,
split between both ends); its height is the resolved datum fraction times
the envelope reach on the active side. Jump edges host nothing, degenerate
edges are skipped but still consume their datum so data/edge alignment
survives. Placement order along the walk fixes the z-order.

Shape notes: circles pick their radius from the explicit size channel if the
gene declared one, else the gene's constant radius, else half the edge
length (which makes consecutive circles on an even path exactly touch —
the precondition for metaball merging). Donut segments ignore edge geometry
for their angles: the angular spans come from the data alone, starting at
12 o'clock and running clockwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

from shapely.geometry import LineString, MultiLineString, Polygon

from .data import MappingSpec, ResolvedDatum
from .envelope import (
    EdgeFrame,
    Envelope,
    baseline_for_edge,
    clip_polygon_to_region,
    envelope_region,
    shapely_to_rings,
)
from .errors import GeniiWarning, ShapeUnsupportedOnPath, ZeroRange
from .path import FlowPath, Point, lerp, vadd, vlen, vmul, vsub, vunit

__all__ = [
    "MARK_SHAPES",
    "MarkSpec",
    "Style",
    "MarkGeometry",
    "scale_height",
    "stack_offsets",
    "donut_segments",
    "place_marks",
    "scatter_place",
]

MARK_SHAPES = (
    "rect",
    "circle",
    "ellipse",
    "triangle",
    "arc",
    "line",
    "donut_segment",
    "text",
)

CIRCLE_SEGMENTS = 64
CURVE_SEGMENTS = 24
DEFAULT_SCATTER_RADIUS = 0.025


@dataclass(frozen=True)
class MarkSpec:
    shape: str = "rect"
    anchor: str = "centered"
    size_channel: MappingSpec | None = None
    position_channel: MappingSpec | None = None
    stacking: bool = False
    star_anchor: Point | None = None
    gap_fraction: float = 0.05
    radius: float | None = None
    ring_width: float | None = None
    jitter: float = 0.0


@dataclass(frozen=True)
class Style:
    fill: str | None = "#000000"
    stroke: str | None = None
    stroke_width: float = 0.0
    opacity: float = 1.0
    gradient: tuple | None = None  # ("linear", stops, direction) | ("radial", stops)
    effects: tuple = ()            # ("blur", r) / ("shadow", dx, dy, blur, colour)


@dataclass(frozen=True)
class MarkGeometry:
    """One placed object. ``outline`` is a closed ring (polygon) unless
    ``closed`` is False (stroked polyline). ``holes`` carry opposite-wound
    rings for even-odd filling after boolean work."""

    outline: tuple[Point, ...]
    style: Style = field(default_factory=Style)
    edge_index: int = 0
    z_order: int = 0
    group: int = 0
    closed: bool = True
    holes: tuple[tuple[Point, ...], ...] = ()
    text: str | None = None
    font_size: float | None = None  # unit space
    ball: tuple[Point, float] | None = None  # (centre, radius) for circles


# --------------------------------------------------------------------------
# scalar helpers
# --------------------------------------------------------------------------

def scale_height(value: float, range_: float, extent: float) -> float:
    """Height of a mark: extent * value / range, clamped into [0, extent]."""
    if range_ <= 0:
        raise ZeroRange(f"range must be > 0, got {range_:g}")
    h = extent * (value / range_)
    if h < 0.0:
        warnings.warn(f"negative height {h:g} clamped to 0", GeniiWarning)
        return 0.0
    if h > extent:
        warnings.warn(f"height {h:g} exceeds extent {extent:g}; clamped", GeniiWarning)
        return extent
    return h


def stack_offsets(values: Sequence[float], range_: float) -> list[tuple[float, float]]:
    """Cumulative (start, end) fractions for stacked marks.

    Ends are clamped to 1; a clamp emits a warning instead of failing.
    """
    if range_ <= 0:
        raise ZeroRange(f"range must be > 0, got {range_:g}")
    out = []
    acc = 0.0
    clamped = False
    for v in values:
        start = min(acc, 1.0)
        acc += max(v, 0.0) / range_
        end = acc
        if end > 1.0:
            end = 1.0
            clamped = True
        out.append((start, end))
    if clamped:
        warnings.warn("stacked values exceed the range; stack clamped at 1", GeniiWarning)
    return out


def donut_segments(values: Sequence[float], range_: float) -> list[tuple[float, float]]:
    """Consecutive angular spans in degrees, 12 o'clock start, clockwise.

    Each value claims 360 * value / range degrees; the running total is
    clamped at 360 with a warning.
    """
    if range_ <= 0:
        raise ZeroRange(f"range must be > 0, got {range_:g}")
    out = []
    acc = 0.0
    clamped = False
    for v in values:
        start = min(acc, 360.0)
        acc += 360.0 * max(v, 0.0) / range_
        end = acc
        if end > 360.0:
            end = 360.0
            clamped = True
        out.append((start, end))
    if clamped:
        warnings.warn("segment values exceed the range; angles clamped at 360", GeniiWarning)
    return out


def _clock_point(centre: Point, r: float, deg: float) -> Point:
    """Angle measured clockwise from 12 o'clock, y-up space."""
    a = math.radians(deg)
    return Point(centre.x + r * math.sin(a), centre.y + r * math.cos(a))


# --------------------------------------------------------------------------
# shape builders
# --------------------------------------------------------------------------

def _frame_span(frame: EdgeFrame, width: float | None, gap_fraction: float):
    """Gapped (or width-overridden) endpoints with interpolated growth vectors."""
    if width is not None:
        w = max(0.0, min(1.0, width))
        t0, t1 = 0.5 - w / 2.0, 0.5 + w / 2.0
    else:
        t0, t1 = gap_fraction / 2.0, 1.0 - gap_fraction / 2.0
    p0 = lerp(frame.base0, frame.base1, t0)
    p1 = lerp(frame.base0, frame.base1, t1)
    off0 = vmul(frame.dir0, frame.reach0)
    off1 = vmul(frame.dir1, frame.reach1)
    g0 = lerp(Point(*off0), Point(*off1), t0)
    g1 = lerp(Point(*off0), Point(*off1), t1)
    return p0, p1, g0, g1


def _span_fractions(frame: EdgeFrame, height: float, position: float) -> tuple[float, float]:
    lo = position - (height / 2.0 if frame.side == "centered" else 0.0)
    hi = lo + height
    if hi > 1.0:
        warnings.warn("mark exceeds envelope reach; clamped", GeniiWarning)
        hi = 1.0
        lo = min(lo, hi)
    return lo, hi


def _rect(frame: EdgeFrame, datum: ResolvedDatum, gap: float) -> tuple[Point, ...]:
    p0, p1, g0, g1 = _frame_span(frame, datum.width, gap)
    lo, hi = _span_fractions(frame, datum.height, datum.position)
    return (
        vadd(p0, vmul(g0, lo)),
        vadd(p1, vmul(g1, lo)),
        vadd(p1, vmul(g1, hi)),
        vadd(p0, vmul(g0, hi)),
    )


def _triangle(frame: EdgeFrame, datum: ResolvedDatum, gap: float) -> tuple[Point, ...]:
    p0, p1, g0, g1 = _frame_span(frame, datum.width, gap)
    lo, hi = _span_fractions(frame, datum.height, datum.position)
    mid = lerp(p0, p1, 0.5)
    gm = lerp(Point(*g0), Point(*g1), 0.5)
    return (
        vadd(p0, vmul(g0, lo)),
        vadd(p1, vmul(g1, lo)),
        vadd(mid, vmul(gm, hi)),
    )


def _ngon(centre: Point, rx: float, ry: float, segments: int = CIRCLE_SEGMENTS) -> tuple[Point, ...]:
    pts = []
    for k in range(segments):
        a = 2.0 * math.pi * k / segments
        pts.append(Point(centre.x + rx * math.cos(a), centre.y + ry * math.sin(a)))
    return tuple(pts)


def _circle_centre(frame: EdgeFrame, r: float, position: float) -> Point:
    mid = lerp(frame.base0, frame.base1, 0.5)
    gm = lerp(Point(*vmul(frame.dir0, frame.reach0)), Point(*vmul(frame.dir1, frame.reach1)), 0.5)
    if frame.side == "centered":
        return vadd(mid, vmul(gm, position))
    # sitting on the path: lift by the radius so the rim touches the baseline
    reach = vlen(gm)
    lift = position + (r / reach if reach > 1e-12 else 0.0)
    return vadd(mid, vmul(gm, lift))


def _circle_radius(frame: EdgeFrame, spec: MarkSpec, datum: ResolvedDatum) -> float:
    if datum.height_explicit:
        reach = (frame.reach0 + frame.reach1) / 2.0
        return max(datum.height * reach / 2.0, 0.0)
    if spec.radius is not None:
        return spec.radius
    return vlen(vsub(frame.base1, frame.base0)) / 2.0


def _quadratic(p0: Point, control: Point, p1: Point, segments: int = CURVE_SEGMENTS) -> tuple[Point, ...]:
    pts = []
    for k in range(segments + 1):
        t = k / segments
        u = 1.0 - t
        x = u * u * p0.x + 2 * u * t * control.x + t * t * p1.x
        y = u * u * p0.y + 2 * u * t * control.y + t * t * p1.y
        pts.append(Point(x, y))
    return tuple(pts)


def _sector(centre: Point, r_in: float, r_out: float, a0: float, a1: float) -> tuple[Point, ...]:
    """Annular sector between clockwise-from-noon angles a0..a1 (degrees)."""
    span = max(a1 - a0, 0.0)
    steps = max(2, int(math.ceil(span / 5.0)))
    outer = [_clock_point(centre, r_out, a0 + span * k / steps) for k in range(steps + 1)]
    if r_in <= 1e-12:
        return tuple(outer + [centre])
    inner = [_clock_point(centre, r_in, a1 - span * k / steps) for k in range(steps + 1)]
    return tuple(outer + inner)


def _donut_placement(path: FlowPath, envelope: Envelope, spec: MarkSpec) -> Point:
    if spec.star_anchor is not None:
        return spec.star_anchor
    if envelope.spec.mode == "fixed_point" and envelope.spec.fixed_point is not None:
        return envelope.spec.fixed_point
    # circular path: every vertex (roughly) equidistant from the centroid of
    # the distinct vertices (the closing vertex repeats the first, so a raw
    # mean would drift toward it)
    unique: list[Point] = []
    seen: set[tuple[float, float]] = set()
    for v in path.vertices:
        key = (round(v.x, 9), round(v.y, 9))
        if key not in seen:
            seen.add(key)
            unique.append(v)
    if len(unique) >= 3:
        cx = sum(v.x for v in unique) / len(unique)
        cy = sum(v.y for v in unique) / len(unique)
        c = Point(cx, cy)
        dists = [vlen(vsub(v, c)) for v in unique]
        if max(dists) - min(dists) < 1e-6 and min(dists) > 1e-9:
            return c
    raise ShapeUnsupportedOnPath(
        "donut_segment needs circular placement: a ring-like path, a fixed-point "
        "envelope, or an explicit star anchor"
    )


# --------------------------------------------------------------------------
# placement
# --------------------------------------------------------------------------

def place_marks(
    path: FlowPath,
    envelope: Envelope,
    spec: MarkSpec,
    bound_data: Sequence[ResolvedDatum],
    rng=None,
    clip: bool = True,
) -> list[MarkGeometry]:
    """Place one mark per (draw edge, datum) pair in walk order.

    Data beyond the available edges is ignored with a warning; edges beyond
    the data stay unmarked. Degenerate edges consume their datum silently.
    The result is clipped to the envelope region unless ``clip`` is False.
    """
    marks: list[MarkGeometry] = []

    if spec.stacking and bound_data:
        marks = _place_stacked(path, envelope, spec, bound_data)
    elif spec.shape == "donut_segment":
        marks = _place_donut(path, envelope, spec, bound_data)
    else:
        # Pair data with non-jump edges in index order. A degenerate edge
        # swallows its datum without producing a mark, so every later datum
        # stays on its own edge; jump edges are pure pen-up moves and take
        # nothing.
        non_jump = [i for i, e in enumerate(path.edges) if e.kind == "draw"]
        consumed = 0
        for edge_index, datum in zip(non_jump, bound_data):
            consumed += 1
            if path.edges[edge_index].degenerate:
                continue
            frame = baseline_for_edge(envelope, path, edge_index, spec.anchor)
            mark = _build_mark(frame, spec, datum, edge_index)
            if mark is not None:
                marks.append(mark)
        leftover = len(bound_data) - consumed
        if leftover > 0:
            warnings.warn(
                f"{leftover} data beyond the last drawable edge ignored",
                GeniiWarning,
            )

    if rng is not None and spec.jitter > 0.0:
        marks = [_jitter_mark(m, path, spec.jitter, rng) for m in marks]

    marks = [replace(m, z_order=i) for i, m in enumerate(marks)]
    if clip and marks:
        marks = _clip_marks(marks, envelope)
    return marks


def _build_mark(frame: EdgeFrame, spec: MarkSpec, datum: ResolvedDatum,
                edge_index: int) -> MarkGeometry | None:
    style = Style(fill=datum.colour or "#000000")
    angle = datum.angle or 0.0
    if spec.shape == "rect":
        outline = _rect(frame, datum, spec.gap_fraction)
        return _finish(outline, style, edge_index, True, angle=angle)
    if spec.shape == "triangle":
        outline = _triangle(frame, datum, spec.gap_fraction)
        return _finish(outline, style, edge_index, True, angle=angle)
    if spec.shape == "circle":
        r = _circle_radius(frame, spec, datum)
        if r <= 0:
            return None
        centre = _circle_centre(frame, r, datum.position)
        outline = _ngon(centre, r, r)
        return MarkGeometry(outline, style, edge_index, ball=(centre, r))
    if spec.shape == "ellipse":
        p0, p1, g0, g1 = _frame_span(frame, datum.width, spec.gap_fraction)
        rx = vlen(vsub(p1, p0)) / 2.0
        reach = (frame.reach0 + frame.reach1) / 2.0
        ry = datum.height * reach / 2.0 if datum.height_explicit else rx / 2.0
        if rx <= 0 or ry <= 0:
            return None
        centre = _circle_centre(frame, ry, datum.position)
        outline = _ngon(centre, rx, ry)
        return _finish(outline, style, edge_index, True, angle=angle)
    if spec.shape == "arc":
        p0, p1, g0, g1 = _frame_span(frame, datum.width, spec.gap_fraction)
        lo, hi = _span_fractions(frame, datum.height, datum.position)
        a = vadd(p0, vmul(g0, lo))
        b = vadd(p1, vmul(g1, lo))
        mid = lerp(a, b, 0.5)
        gm = lerp(Point(*g0), Point(*g1), 0.5)
        control = vadd(mid, vmul(gm, hi - lo))
        outline = _quadratic(a, control, b)
        stroked = Style(fill=None, stroke=style.fill, stroke_width=1.5)
        return _finish(outline, stroked, edge_index, False, angle=angle)
    if spec.shape == "line":
        p0, p1, g0, g1 = _frame_span(frame, datum.width, spec.gap_fraction)
        lo, hi = _span_fractions(frame, datum.height, datum.position)
        outline = (vadd(p0, vmul(g0, hi)), vadd(p1, vmul(g1, hi)))
        stroked = Style(fill=None, stroke=style.fill, stroke_width=1.5)
        return _finish(outline, stroked, edge_index, False, angle=angle)
    if spec.shape == "text":
        mid = lerp(frame.base0, frame.base1, 0.5)
        gm = lerp(Point(*vmul(frame.dir0, frame.reach0)),
                  Point(*vmul(frame.dir1, frame.reach1)), 0.5)
        anchor = vadd(mid, vmul(gm, datum.position))
        reach = (frame.reach0 + frame.reach1) / 2.0
        return MarkGeometry((anchor,), style, edge_index, closed=False,
                            text=datum.text if datum.text is not None else f"{datum.value:g}",
                            font_size=0.8 * reach)
    raise ShapeUnsupportedOnPath(f"unknown shape {spec.shape!r}")


def _finish(outline: tuple[Point, ...], style: Style, edge_index: int,
            closed: bool, angle: float = 0.0) -> MarkGeometry:
    if angle:
        outline = _rotate_outline(outline, angle)
    return MarkGeometry(outline, style, edge_index, closed=closed)


def _rotate_outline(outline: tuple[Point, ...], degrees: float) -> tuple[Point, ...]:
    cx = sum(p.x for p in outline) / len(outline)
    cy = sum(p.y for p in outline) / len(outline)
    a = math.radians(degrees)
    c, s = math.cos(a), math.sin(a)
    return tuple(
        Point(cx + (p.x - cx) * c - (p.y - cy) * s, cy + (p.x - cx) * s + (p.y - cy) * c)
        for p in outline
    )


def _place_stacked(path: FlowPath, envelope: Envelope, spec: MarkSpec,
                   bound_data: Sequence[ResolvedDatum]) -> list[MarkGeometry]:
    """All data stacked on the first drawable edge."""
    draws = path.draw_edge_indices()
    edge_index = draws[0]
    frame = baseline_for_edge(envelope, path, edge_index, spec.anchor)
    spans = stack_offsets([d.value for d in bound_data], bound_data[0].range_)
    marks = []
    for datum, (start, end) in zip(bound_data, spans):
        stacked = datum._replace(position=start, height=max(end - start, 0.0))
        outline = _rect(frame, stacked, spec.gap_fraction)
        style = Style(fill=datum.colour or "#000000")
        marks.append(MarkGeometry(outline, style, edge_index))
    return marks


def _place_donut(path: FlowPath, envelope: Envelope, spec: MarkSpec,
                 bound_data: Sequence[ResolvedDatum]) -> list[MarkGeometry]:
    if not bound_data:
        return []
    centre = _donut_placement(path, envelope, spec)
    draws = path.draw_edge_indices()
    if len(bound_data) > len(draws):
        warnings.warn(
            f"{len(bound_data) - len(draws)} data beyond the last drawable edge ignored",
            GeniiWarning,
        )
    usable = list(zip(draws, bound_data))
    if not usable:
        return []
    spans = donut_segments([d.value for _, d in usable], usable[0][1].range_)
    marks = []
    for (edge_index, datum), (a0, a1) in zip(usable, spans):
        frame = baseline_for_edge(envelope, path, edge_index, spec.anchor)
        a, b = path.edge_points(edge_index)
        mid = lerp(a, b, 0.5)
        r_base = vlen(vsub(mid, centre))
        if spec.radius is not None:
            r_base = spec.radius
        elif r_base < 1e-9:
            r_base = vlen(vsub(b, a)) / 2.0
        reach = (frame.reach0 + frame.reach1) / 2.0
        band = spec.ring_width if spec.ring_width is not None else reach
        band = min(band, r_base) if frame.side != "below" else band
        if frame.side == "above":
            r_in, r_out = r_base - band, r_base
        elif frame.side == "below":
            r_in, r_out = r_base, r_base + band
        else:
            r_in, r_out = r_base - band / 2.0, r_base + band / 2.0
        r_in = max(r_in, 0.0)
        if a1 - a0 <= 1e-12 or r_out <= 1e-12:
            continue
        outline = _sector(centre, r_in, r_out, a0, a1)
        style = Style(fill=datum.colour or "#000000")
        marks.append(MarkGeometry(outline, style, edge_index))
    return marks


def _jitter_mark(mark: MarkGeometry, path: FlowPath, amplitude: float, rng) -> MarkGeometry:
    a, b = path.edge_points(mark.edge_index)
    d = vsub(b, a)
    if vlen(d) < 1e-12:
        return mark
    u = vunit(d)
    offset = (rng.next_float() * 2.0 - 1.0) * amplitude
    shift = vmul(u, offset)
    moved = tuple(vadd(p, shift) for p in mark.outline)
    ball = None
    if mark.ball is not None:
        ball = (vadd(mark.ball[0], shift), mark.ball[1])
    return replace(mark, outline=moved, ball=ball)


def _clip_marks(marks: list[MarkGeometry], envelope: Envelope) -> list[MarkGeometry]:
    region = envelope_region(envelope)
    out: list[MarkGeometry] = []
    for mark in marks:
        out.extend(clip_mark_to_region(mark, region))
    return [replace(m, z_order=i) for i, m in enumerate(out)]


def clip_mark_to_region(mark: MarkGeometry, region) -> list[MarkGeometry]:
    """Clip one mark against a shapely region, preserving its styling."""
    if mark.text is not None:
        return [mark]
    if region.is_empty:
        return []
    if not mark.closed:
        line = LineString([(p.x, p.y) for p in mark.outline])
        cut = line.intersection(region)
        pieces: list[LineString] = []
        if isinstance(cut, LineString):
            pieces = [cut]
        elif isinstance(cut, MultiLineString):
            pieces = list(cut.geoms)
        out = []
        for piece in pieces:
            coords = [Point(x, y) for x, y in piece.coords]
            if len(coords) >= 2:
                out.append(replace(mark, outline=tuple(coords), holes=()))
        return out
    results = []
    if mark.holes:
        poly = Polygon([(p.x, p.y) for p in mark.outline],
                       [[(p.x, p.y) for p in h] for h in mark.holes])
        if not poly.is_valid:
            poly = poly.buffer(0)
        clipped = poly.intersection(region)
        comps = shapely_to_rings(clipped)
    else:
        comps = clip_polygon_to_region(mark.outline, region)
    for shell, holes in comps:
        results.append(replace(
            mark,
            outline=tuple(shell),
            holes=tuple(tuple(h) for h in holes),
        ))
    return results


def scatter_place(points: Sequence[Point], strategy: str,
                  radius: float = DEFAULT_SCATTER_RADIUS):
    """Scatter layout: returns (path, marks) for a set of unit-space points.

    ``vertical_from_axis``: the path is a straight axis along the bottom,
    one vertex under each point; marks float at the data positions.
    ``path_through_data``: the path runs through the points in data order
    and the marks sit on its vertices. Mark centres are identical between
    the two strategies.
    """
    from .path import make_path

    pts = list(points)
    if strategy == "vertical_from_axis":
        path = make_path([Point(p.x, 0.0) for p in pts])
    elif strategy == "path_through_data":
        path = make_path(pts)
    else:
        raise ShapeUnsupportedOnPath(
            f"unknown scatter strategy {strategy!r}; "
            "valid: vertical_from_axis, path_through_data"
        )
    marks = []
    for i, p in enumerate(pts):
        outline = _ngon(p, radius, radius, segments=48)
        marks.append(MarkGeometry(outline, Style(), edge_index=min(i, max(len(pts) - 2, 0)),
                                  z_order=i, ball=(p, radius)))
    return path, marks
