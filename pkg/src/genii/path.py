"""Flowpath skeleton: ordered vertices joined by draw/jump edges.

The whole engine works in a unit design space: x and y both live in [0, 1],
with y pointing up. A path is an ordered vertex list; edge i always connects
vertex i to vertex i+1. An edge is either drawn (visible connection, hosts
marks) or a jump (pen-up relocation). Traversal therefore alternates
vertex, edge, vertex, edge, ... from the entrance (index 0) to the exit
(last index). Duplicate vertex positions are allowed — the closing vertex of
a ring repeats the first — and a zero-length edge is kept but flagged
degenerate so later stages can skip it without losing data/edge alignment.

Out-of-range input coordinates are clamped into the unit square rather than
rejected; missing (null) or non-finite entries are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import DegenerateEdge, EmptyPath

__all__ = [
    "Point",
    "Edge",
    "FlowPath",
    "VertexStep",
    "EdgeStep",
    "make_path",
    "normalize_path",
    "edge_normal",
    "walk",
    "clamp01",
]

DEGENERACY_EPS = 1e-12


class Point(NamedTuple):
    x: float
    y: float


def clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


# A few tiny vector helpers; kept here so every module shares one definition.

def vsub(a: Point, b: Point) -> Point:
    return Point(a.x - b.x, a.y - b.y)


def vadd(a: Point, b: Point) -> Point:
    return Point(a.x + b.x, a.y + b.y)


def vmul(a: Point, k: float) -> Point:
    return Point(a.x * k, a.y * k)


def vlen(a: Point) -> float:
    return math.hypot(a.x, a.y)


def vunit(a: Point) -> Point:
    n = math.hypot(a.x, a.y)
    if n < DEGENERACY_EPS:
        raise DegenerateEdge("cannot normalise a zero-length vector")
    return Point(a.x / n, a.y / n)


def lerp(a: Point, b: Point, t: float) -> Point:
    return Point(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


@dataclass(frozen=True)
class Edge:
    """Connection between vertex ``from_index`` and ``from_index + 1``."""

    from_index: int
    to_index: int
    kind: str  # "draw" | "jump"
    degenerate: bool = False


@dataclass(frozen=True)
class FlowPath:
    vertices: tuple[Point, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise EmptyPath("a path needs at least one vertex")
        if len(self.edges) != len(self.vertices) - 1:
            raise EmptyPath(
                f"{len(self.vertices)} vertices require {len(self.vertices) - 1} edges, "
                f"got {len(self.edges)}"
            )

    @property
    def entrance(self) -> int:
        return 0

    @property
    def exit(self) -> int:
        return len(self.vertices) - 1

    def edge_points(self, i: int) -> tuple[Point, Point]:
        e = self.edges[i]
        return self.vertices[e.from_index], self.vertices[e.to_index]

    def draw_edge_indices(self) -> list[int]:
        """Indices of drawable (non-jump, non-degenerate) edges, in order."""
        return [
            i for i, e in enumerate(self.edges)
            if e.kind == "draw" and not e.degenerate
        ]


def make_path(points: Iterable[Point | tuple[float, float]], jumps: Iterable[int] = ()) -> FlowPath:
    """Assemble a FlowPath from already-clean points plus jump edge indices."""
    verts = tuple(Point(float(p[0]), float(p[1])) for p in points)
    jump_set = set(jumps)
    edges = []
    for i in range(len(verts) - 1):
        a, b = verts[i], verts[i + 1]
        degenerate = math.hypot(b.x - a.x, b.y - a.y) < DEGENERACY_EPS
        kind = "jump" if i in jump_set else "draw"
        edges.append(Edge(i, i + 1, kind, degenerate))
    return FlowPath(verts, tuple(edges))


def normalize_path(raw: Iterable[object], jumps: Iterable[int] = ()) -> FlowPath:
    """Clean raw point input into a valid unit-space path.

    Entries that are None or contain non-finite coordinates are dropped;
    surviving coordinates are clamped into [0, 1]. Raises EmptyPath when
    nothing survives. Running the result through again changes nothing.
    """
    pts: list[Point] = []
    for entry in raw:
        if entry is None:
            continue
        try:
            x, y = float(entry[0]), float(entry[1])  # type: ignore[index]
        except (TypeError, ValueError, IndexError):
            continue
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        pts.append(Point(clamp01(x), clamp01(y)))
    if not pts:
        raise EmptyPath("no usable vertices after normalisation")
    return make_path(pts, jumps)


def edge_normal(a: Point, b: Point) -> Point:
    """Unit normal of the directed edge a→b: its direction rotated 90° CCW.

    For a left-to-right edge the normal is (0, 1), i.e. the edge's "top"
    is toward positive y.
    """
    d = vsub(b, a)
    n = vlen(d)
    if n < DEGENERACY_EPS:
        raise DegenerateEdge(f"edge endpoints coincide at ({a.x}, {a.y})")
    return Point(-d.y / n, d.x / n)


class VertexStep(NamedTuple):
    index: int
    point: Point


class EdgeStep(NamedTuple):
    index: int
    edge: Edge


def walk(path: FlowPath) -> Iterator[VertexStep | EdgeStep]:
    """Traverse entrance → exit, alternating vertex, edge, vertex, ..."""
    for i, v in enumerate(path.vertices):
        yield VertexStep(i, v)
        if i < len(path.edges):
            yield EdgeStep(i, path.edges[i])
