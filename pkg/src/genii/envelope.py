"""Envelope: the drawable region wrapped around a flowpath.

Two chains of control points run alongside the path, one per side, with one
entry per vertex. In parallel mode each chain point is the vertex displaced
along the local normal direction: the edge normal is the edge direction
rotated 90 degrees CCW, interior vertices average the two adjacent edge
normals (renormalised), and a vertex bordering a jump uses the single
adjacent draw edge's normal. The mitre at a sharp corner is limited to twice
the nominal extent. In fixed_point mode the lower chain is pinned to one
point — that is how circular layouts grow their objects toward a centre.

The envelope region used for clipping is the union of the per-edge
quadrilaterals (top_i, top_{i+1}, bottom_{i+1}, bottom_i) over draw edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from shapely.geometry import MultiPolygon, Polygon
from shapely.ops import unary_union

from .errors import DegeneratePath, JumpEdge
from .path import DEGENERACY_EPS, FlowPath, Point, edge_normal, vadd, vlen, vmul, vsub

__all__ = [
    "EnvelopeSpec",
    "Envelope",
    "EdgeFrame",
    "build_envelope",
    "baseline_for_edge",
    "clip_to_envelope",
    "envelope_region",
]

MITRE_LIMIT = 2.0

SIDE_POLICIES = ("center", "top_only", "bottom_only", "alternate", "per_edge")
ALIGNMENTS = ("centered", "on_path_above", "on_path_below")


@dataclass(frozen=True)
class EnvelopeSpec:
    top_extent: float = 0.45
    bottom_extent: float = 0.45
    mode: str = "parallel"  # "parallel" | "fixed_point"
    fixed_point: Point | None = None
    side_policy: str = "center"
    per_edge_sides: tuple[str, ...] = ()  # used when side_policy == "per_edge"
    switch_on_turn: bool = False


@dataclass(frozen=True)
class Envelope:
    """Built chains plus the per-edge normals and clip quads they imply."""

    top: tuple[Point, ...]
    bottom: tuple[Point, ...]
    normals: tuple[Point, ...]  # one unit normal per edge
    quads: tuple[tuple[Point, Point, Point, Point], ...]  # one per draw edge
    spec: EnvelopeSpec


def _edge_normals(path: FlowPath) -> list[Point | None]:
    """Unit normal per edge; None for jump or degenerate edges."""
    out: list[Point | None] = []
    for i, e in enumerate(path.edges):
        if e.kind != "draw" or e.degenerate:
            out.append(None)
        else:
            a, b = path.edge_points(i)
            out.append(edge_normal(a, b))
    return out


def _fill_missing_normals(normals: list[Point | None]) -> list[Point]:
    """Give jump/degenerate edges the nearest draw normal (forward, then back)."""
    filled: list[Point] = []
    last: Point | None = None
    for n in normals:
        if n is not None:
            last = n
        filled.append(last)  # type: ignore[arg-type]
    # leading gap: borrow from the first real normal
    nxt: Point | None = None
    for i in range(len(filled) - 1, -1, -1):
        if normals[i] is not None:
            nxt = normals[i]
        elif filled[i] is None:
            filled[i] = nxt  # type: ignore[assignment]
    return [n if n is not None else Point(0.0, 1.0) for n in filled]


def build_envelope(path: FlowPath, spec: EnvelopeSpec) -> Envelope:
    raw_normals = _edge_normals(path)
    if all(n is None for n in raw_normals):
        raise DegeneratePath("no drawable edge to hang an envelope on")
    normals = _fill_missing_normals(raw_normals)

    n_verts = len(path.vertices)
    top: list[Point] = []
    bottom: list[Point] = []
    for i, v in enumerate(path.vertices):
        adjacent = []
        if i > 0 and raw_normals[i - 1] is not None:
            adjacent.append(raw_normals[i - 1])
        if i < n_verts - 1 and raw_normals[i] is not None:
            adjacent.append(raw_normals[i])
        if not adjacent:
            # vertex between jumps: reuse the filled normal of the nearer edge
            adjacent.append(normals[min(i, len(normals) - 1)])
        avg = Point(
            sum(n.x for n in adjacent) / len(adjacent),
            sum(n.y for n in adjacent) / len(adjacent),
        )
        mag = vlen(avg)
        if mag < DEGENERACY_EPS:
            # opposing normals (hairpin): fall back to the first adjacent normal
            unit = adjacent[0]
            mitre = MITRE_LIMIT
        else:
            unit = Point(avg.x / mag, avg.y / mag)
            mitre = min(1.0 / mag, MITRE_LIMIT)
        top.append(vadd(v, vmul(unit, spec.top_extent * mitre)))
        bottom.append(vadd(v, vmul(unit, -spec.bottom_extent * mitre)))

    if spec.mode == "fixed_point":
        fp = spec.fixed_point if spec.fixed_point is not None else Point(0.5, 0.5)
        bottom = [fp] * n_verts

    quads = []
    for i in path.draw_edge_indices():
        quads.append((top[i], top[i + 1], bottom[i + 1], bottom[i]))

    return Envelope(tuple(top), tuple(bottom), tuple(normals), tuple(quads), spec)


class EdgeFrame(NamedTuple):
    """Where objects on one edge sit and how far they may grow.

    base0/base1 are the edge endpoints; dir0/dir1 the unit growth direction
    at each endpoint (toward the active chain); reach0/reach1 how far the
    active chain is. side is the resolved placement: "above", "below" or
    "centered" (centered splits growth half and half about the path).
    """

    base0: Point
    base1: Point
    dir0: Point
    dir1: Point
    reach0: float
    reach1: float
    side: str


def _offset(envelope: Envelope, chain: Sequence[Point], path: FlowPath, i: int) -> tuple[Point, float]:
    v = path.vertices[i]
    d = vsub(chain[i], v)
    mag = vlen(d)
    if mag < DEGENERACY_EPS:
        return Point(0.0, 1.0), 0.0
    return Point(d.x / mag, d.y / mag), mag


def _resolve_side(envelope: Envelope, path: FlowPath, edge_index: int, alignment: str) -> str:
    side = {"centered": "centered", "on_path_above": "above", "on_path_below": "below"}[alignment]
    spec = envelope.spec
    policy = spec.side_policy
    if policy == "top_only":
        side = "above"
    elif policy == "bottom_only":
        side = "below"
    elif policy == "per_edge" and spec.per_edge_sides:
        side = spec.per_edge_sides[edge_index % len(spec.per_edge_sides)]
    elif policy == "alternate" and side != "centered":
        if edge_index % 2 == 1:
            side = "below" if side == "above" else "above"
    if spec.switch_on_turn and side != "centered":
        draws = path.draw_edge_indices()
        if draws:
            ref = envelope.normals[draws[0]].y
            cur = envelope.normals[edge_index].y
            ref_sign = 1 if ref >= 0 else -1
            cur_sign = 1 if cur >= 0 else -1
            if ref_sign != cur_sign:
                side = "below" if side == "above" else "above"
    return side


def baseline_for_edge(
    envelope: Envelope, path: FlowPath, edge_index: int, alignment: str = "centered"
) -> EdgeFrame:
    """Frame for placing objects on one draw edge."""
    edge = path.edges[edge_index]
    if edge.kind == "jump":
        raise JumpEdge(f"edge {edge_index} is a jump; nothing sits on it")
    if alignment not in ALIGNMENTS:
        raise ValueError(f"alignment must be one of {ALIGNMENTS}, got {alignment!r}")

    a, b = path.edge_points(edge_index)
    side = _resolve_side(envelope, path, edge_index, alignment)

    up0, upreach0 = _offset(envelope, envelope.top, path, edge.from_index)
    up1, upreach1 = _offset(envelope, envelope.top, path, edge.to_index)
    dn0, dnreach0 = _offset(envelope, envelope.bottom, path, edge.from_index)
    dn1, dnreach1 = _offset(envelope, envelope.bottom, path, edge.to_index)

    if side == "above":
        return EdgeFrame(a, b, up0, up1, upreach0, upreach1, side)
    if side == "below":
        return EdgeFrame(a, b, dn0, dn1, dnreach0, dnreach1, side)
    # centered: grow symmetrically about the path; total reach spans both chains
    return EdgeFrame(a, b, up0, up1, upreach0 + dnreach0, upreach1 + dnreach1, side)


def envelope_region(envelope: Envelope):
    """Shapely region covered by the envelope (union of draw-edge quads)."""
    polys = []
    for quad in envelope.quads:
        poly = Polygon([(p.x, p.y) for p in quad])
        if not poly.is_valid:
            poly = poly.buffer(0)
        if not poly.is_empty and poly.area > 0:
            polys.append(poly)
    if not polys:
        return Polygon()
    region = unary_union(polys)
    if isinstance(region, (Polygon, MultiPolygon)):
        return region
    return region.buffer(0)


def clip_to_envelope(rings: Sequence[Sequence[Point]], envelope: Envelope) -> list[list[Point]]:
    """Clip closed outlines to the envelope region.

    Returns the surviving outer rings (no holes are introduced by an
    intersection with our quad unions in practice; any that do appear are
    returned after the shells, wound opposite).
    """
    region = envelope_region(envelope)
    out: list[list[Point]] = []
    for ring in rings:
        for shell, holes in clip_polygon_to_region(ring, region):
            out.append(shell)
            out.extend(holes)
    return out


def clip_polygon_to_region(ring: Sequence[Point], region) -> list[tuple[list[Point], list[list[Point]]]]:
    """Intersect one closed ring with a shapely region.

    Yields (shell, holes) pairs, one per resulting connected component.
    Shells keep CCW winding, holes CW, so an even-odd fill renders them
    correctly.
    """
    if region.is_empty or len(ring) < 3:
        return []
    poly = Polygon([(p.x, p.y) for p in ring])
    if not poly.is_valid:
        poly = poly.buffer(0)
    if poly.is_empty:
        return []
    clipped = poly.intersection(region)
    return shapely_to_rings(clipped)


def shapely_to_rings(geom) -> list[tuple[list[Point], list[list[Point]]]]:
    """Decompose a shapely (Multi)Polygon into (shell, holes) point lists."""
    polys: list[Polygon]
    if geom.is_empty:
        return []
    if isinstance(geom, Polygon):
        polys = [geom]
    elif isinstance(geom, MultiPolygon):
        polys = list(geom.geoms)
    else:  # GeometryCollection: keep only areal parts
        polys = [g for g in getattr(geom, "geoms", []) if isinstance(g, Polygon)]
    out = []
    for p in polys:
        if p.area <= 0:
            continue
        shell = _ring_points(p.exterior, ccw=True)
        holes = [_ring_points(h, ccw=False) for h in p.interiors]
        out.append((shell, holes))
    return out


def _ring_points(linear_ring, ccw: bool) -> list[Point]:
    coords = list(linear_ring.coords)
    if len(coords) > 1 and coords[0] == coords[-1]:
        coords = coords[:-1]
    area2 = 0.0
    for i in range(len(coords)):
        x0, y0 = coords[i]
        x1, y1 = coords[(i + 1) % len(coords)]
        area2 += x0 * y1 - x1 * y0
    if (area2 > 0) != ccw:
        coords.reverse()
    return [Point(x, y) for x, y in coords]
