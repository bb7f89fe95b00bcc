"""Path generators: turn a small layout recipe into a flowpath skeleton.

Each mode produces vertices in the unit square; the rotation (degrees CCW
about the centre (0.5, 0.5)) is applied after generation and the result is
re-clamped, so a rotated layout can flatten against the canvas border instead
of erroring. Jump edges are flagged last.

Grid-walk modes (sweep/scan/diagonal/hilbert/peano/z_mirror/gray) visit every
cell of an s×s grid exactly once; cell (gx, gy) maps to the unit square at the
cell centre ((gx + 0.5)/s, (gy + 0.5)/s) with the origin cell bottom-left.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import BadOrder, GeniiWarning, MissingPoints, UnknownMode
from .path import FlowPath, Point, clamp01, make_path

__all__ = [
    "PathSpec",
    "PATH_MODES",
    "PATH_CATALOGUE",
    "generate",
    "rotate_path",
    "hilbert_d2xy",
    "peano_d2xy",
    "morton_d2xy",
    "z_mirror_d2xy",
    "gray_d2xy",
]

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

PATH_MODES = (
    "inline_linear",
    "disjoint_inline",
    "ring",
    "zigzag",
    "parametric_spiral",
    "golden_spiral",
    "sweep",
    "scan",
    "diagonal",
    "hilbert",
    "peano",
    "z_mirror",
    "gray",
    "user_points",
)

_POWER2_MODES = ("hilbert", "z_mirror", "gray")
_POWER3_MODES = ("peano",)
_GRID_MODES = ("sweep", "scan", "diagonal") + _POWER2_MODES + _POWER3_MODES


@dataclass(frozen=True)
class PathSpec:
    """Layout recipe for one path.

    point_count is the vertex count (for ring it includes the repeated
    closing vertex, so a 5-point ring has 4 segments). point_distance, when
    given, takes precedence over uniform spacing for the inline modes. Grid
    modes take either an order (side = 2^order or 3^order) or a point_count
    that is a perfect square of a valid side.
    """

    mode: str = "inline_linear"
    point_count: int = 6
    rotation_deg: float = 0.0
    point_distance: float | None = None
    jumps: tuple[int, ...] = ()
    user_points: tuple[tuple[float, float] | None, ...] | None = None
    order: int | None = None

    def validate(self) -> None:
        if self.mode not in PATH_MODES:
            raise UnknownMode(
                f"unknown path mode {self.mode!r}; valid modes: {', '.join(PATH_MODES)}"
            )
        if self.mode == "user_points":
            if not self.user_points:
                raise MissingPoints("user_points mode needs a non-empty points list")
        elif self.point_count < 1 and self.order is None:
            raise MissingPoints("point_count must be >= 1")
        if self.mode in _GRID_MODES:
            self.grid_side()  # raises BadOrder on impossible sizes

    def grid_side(self) -> int:
        """Resolve the grid side length for grid-walk modes."""
        base = 3 if self.mode in _POWER3_MODES else 2
        if self.order is not None:
            if self.order < 1 or self.order > 12:
                raise BadOrder(f"order must be in 1..12, got {self.order}")
            return base ** self.order
        side = math.isqrt(self.point_count)
        if side * side != self.point_count:
            raise BadOrder(
                f"{self.mode} needs a square point_count, got {self.point_count}"
            )
        if self.mode in _POWER2_MODES or self.mode in _POWER3_MODES:
            # side must itself be a power of the base
            s = side
            while s > 1 and s % base == 0:
                s //= base
            if s != 1 or side < base:
                raise BadOrder(
                    f"{self.mode} needs a grid side that is a power of {base}, got {side}"
                )
        elif side < 1:
            raise BadOrder(f"{self.mode} needs at least one cell")
        return side


# =========================================================================
# grid-walk index -> cell functions
# =========================================================================

def hilbert_d2xy(side: int, d: int) -> tuple[int, int]:
    """Cell of walk index ``d`` on the Hilbert curve over a side×side grid.

    ``side`` must be a power of two. Orientation is fixed so that the 2×2
    curve traces a "U" opening toward +x: indices 0..3 land on
    (0,0), (0,1), (1,1), (1,0).
    """
    x = y = 0
    t = d
    s = 1
    while s < side:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        if ry == 0:
            if rx == 1:
                x = s - 1 - x
                y = s - 1 - y
            x, y = y, x
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return x, y


def peano_d2xy(side: int, d: int) -> tuple[int, int]:
    """Cell of walk index ``d`` on the Peano curve over a side×side grid.

    ``side`` must be a power of three. The base 3×3 unit serpentines column
    by column: up the first column, down the second, up the third. Computed
    from the ternary digits of the index; a coordinate digit is complemented
    (t -> 2-t) once per odd digit among the other coordinate's
    more-significant digits.
    """
    order = 0
    s = side
    while s > 1:
        s //= 3
        order += 1
    digits = []
    t = d
    for _ in range(2 * order):
        digits.append(t % 3)
        t //= 3
    digits.reverse()  # most significant first: t1 t2 ... t_2n
    x = y = 0
    x_flip = 0  # parity of t2 + t4 + ... seen so far
    y_flip = 0  # parity of t1 + t3 + ... seen so far
    for i in range(order):
        tx = digits[2 * i]
        ty = digits[2 * i + 1]
        ax = 2 - tx if x_flip % 2 else tx
        y_flip += tx
        ay = 2 - ty if y_flip % 2 else ty
        x_flip += ty
        x = x * 3 + ax
        y = y * 3 + ay
    return x, y


def morton_d2xy(side: int, d: int) -> tuple[int, int]:
    """Z-order: even interleave bits give x, odd give y."""
    x = y = 0
    bit = 0
    t = d
    while t:
        x |= (t & 1) << bit
        t >>= 1
        y |= (t & 1) << bit
        t >>= 1
        bit += 1
    return x, y


def z_mirror_d2xy(side: int, d: int) -> tuple[int, int]:
    """Z-order with odd rows mirrored, shortening the row-return jumps."""
    x, y = morton_d2xy(side, d)
    if y % 2 == 1:
        x = side - 1 - x
    return x, y


def gray_d2xy(side: int, d: int) -> tuple[int, int]:
    """Reflected-binary walk: de-interleave the Gray code of the index."""
    g = d ^ (d >> 1)
    return morton_d2xy(side, g)


def _sweep_cell(side: int, k: int) -> tuple[int, int]:
    return k % side, k // side


def _scan_cell(side: int, k: int) -> tuple[int, int]:
    gy, r = divmod(k, side)
    gx = r if gy % 2 == 0 else side - 1 - r
    return gx, gy


def _diagonal_cells(side: int) -> list[tuple[int, int]]:
    cells = []
    for d in range(2 * side - 1):
        lo = max(0, d - side + 1)
        hi = min(d, side - 1)
        run = [(gx, d - gx) for gx in range(lo, hi + 1)]
        if d % 2 == 1:
            run.reverse()
        cells.extend(run)
    return cells


# =========================================================================
# mode constructions
# =========================================================================

def _inline_points(n: int, distance: float | None) -> list[Point]:
    if n == 1:
        return [Point(0.5, 0.5)]
    step = distance if distance is not None else 1.0 / (n - 1)
    return [Point(clamp01(k * step), 0.5) for k in range(n)]


def _disjoint_inline(spec: PathSpec) -> tuple[list[Point], list[int]]:
    n = spec.point_count
    jumps = list(spec.jumps) if spec.jumps else [max(0, (n - 1) // 2)]
    jumps = sorted({j for j in jumps if 0 <= j < n - 1})
    if not jumps:
        jumps = [max(0, (n - 1) // 2)]
    rows = len(jumps) + 1
    # split vertex indices into rows at each jump edge
    row_of = []
    row = 0
    cut = set(jumps)
    for i in range(n):
        row_of.append(row)
        if i in cut:
            row += 1
    counts = [row_of.count(r) for r in range(rows)]
    pts: list[Point] = []
    for i in range(n):
        r = row_of[i]
        k = i - sum(counts[:r])
        m = counts[r]
        x = 0.5 if m == 1 else k / (m - 1)
        if spec.point_distance is not None:
            x = clamp01(k * spec.point_distance)
        y = (rows - r - 0.5) / rows  # first row on top, later rows below
        pts.append(Point(x, y))
    return pts, jumps


def _ring_points(n: int) -> list[Point]:
    segments = max(1, n - 1)
    pts = []
    for k in range(n):
        a = 2.0 * math.pi * k / segments
        pts.append(Point(0.5 + 0.5 * math.cos(a), 0.5 + 0.5 * math.sin(a)))
    if n > 1:
        pts[-1] = pts[0]  # the closing vertex coincides with the first exactly
    return pts


def _zigzag_points(n: int) -> list[Point]:
    if n == 1:
        return [Point(0.5, 0.75)]
    return [Point(k / (n - 1), 0.75 if k % 2 == 0 else 0.25) for k in range(n)]


def _parametric_spiral_points(n: int) -> list[Point]:
    # straight runs with 90° CCW turns; run lengths grow 1,1,2,2,3,3,...
    dirs = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
    pts = [(0.0, 0.0)]
    run = 0
    while len(pts) < n:
        length = run // 2 + 1
        dx, dy = dirs[run % 4]
        x, y = pts[-1]
        pts.append((x + dx * length, y + dy * length))
        run += 1
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = 0.9 / span
    cx = (max(xs) + min(xs)) / 2.0
    cy = (max(ys) + min(ys)) / 2.0
    return [Point(0.5 + (x - cx) * scale, 0.5 + (y - cy) * scale) for x, y in pts]


def _golden_spiral_points(n: int) -> list[Point]:
    # logarithmic spiral, radius growing by the golden ratio every quarter turn
    turns = 2.5
    theta_max = turns * 2.0 * math.pi
    pts = []
    for k in range(n):
        t = theta_max if n == 1 else theta_max * k / (n - 1)
        r = 0.5 * GOLDEN_RATIO ** ((t - theta_max) / (math.pi / 2.0))
        pts.append(Point(0.5 + r * math.cos(t), 0.5 + r * math.sin(t)))
    return pts


def _grid_points(spec: PathSpec) -> list[Point]:
    side = spec.grid_side()
    total = side * side
    if spec.mode == "hilbert":
        cells = [hilbert_d2xy(side, d) for d in range(total)]
    elif spec.mode == "peano":
        cells = [peano_d2xy(side, d) for d in range(total)]
    elif spec.mode == "z_mirror":
        cells = [z_mirror_d2xy(side, d) for d in range(total)]
    elif spec.mode == "gray":
        cells = [gray_d2xy(side, d) for d in range(total)]
    elif spec.mode == "sweep":
        cells = [_sweep_cell(side, k) for k in range(total)]
    elif spec.mode == "scan":
        cells = [_scan_cell(side, k) for k in range(total)]
    else:  # diagonal
        cells = _diagonal_cells(side)
    return [Point((gx + 0.5) / side, (gy + 0.5) / side) for gx, gy in cells]


# =========================================================================
# public entry points
# =========================================================================

def generate(spec: PathSpec) -> FlowPath:
    """Build the flowpath described by ``spec`` (validated first)."""
    spec.validate()
    implied_jumps: list[int] = []
    if spec.mode == "inline_linear":
        pts = _inline_points(spec.point_count, spec.point_distance)
    elif spec.mode == "disjoint_inline":
        pts, implied_jumps = _disjoint_inline(spec)
    elif spec.mode == "ring":
        pts = _ring_points(spec.point_count)
    elif spec.mode == "zigzag":
        pts = _zigzag_points(spec.point_count)
    elif spec.mode == "parametric_spiral":
        pts = _parametric_spiral_points(spec.point_count)
    elif spec.mode == "golden_spiral":
        pts = _golden_spiral_points(spec.point_count)
    elif spec.mode in _GRID_MODES:
        pts = _grid_points(spec)
    elif spec.mode == "user_points":
        assert spec.user_points is not None
        cleaned = []
        for entry in spec.user_points:
            if entry is None:
                continue
            x, y = float(entry[0]), float(entry[1])
            if math.isfinite(x) and math.isfinite(y):
                cleaned.append(Point(clamp01(x), clamp01(y)))
        if not cleaned:
            raise MissingPoints("user_points contained no usable vertices")
        pts = cleaned
    else:  # pragma: no cover - guarded by validate()
        raise UnknownMode(spec.mode)

    if spec.rotation_deg:
        pts = _rotate_points(pts, spec.rotation_deg)

    edge_count = len(pts) - 1
    jumps = set(implied_jumps)
    for j in spec.jumps:
        if 0 <= j < edge_count:
            jumps.add(j)
        else:
            warnings.warn(
                f"jump index {j} outside 0..{edge_count - 1}; ignored", GeniiWarning
            )
    return make_path(pts, jumps)


def _rotate_points(pts: list[Point], degrees: float) -> list[Point]:
    a = math.radians(degrees)
    c, s = math.cos(a), math.sin(a)
    out = []
    for p in pts:
        dx, dy = p.x - 0.5, p.y - 0.5
        out.append(Point(clamp01(0.5 + dx * c - dy * s), clamp01(0.5 + dx * s + dy * c)))
    return out


def rotate_path(path: FlowPath, degrees: float) -> FlowPath:
    """Rotate a finished path about the canvas centre, re-clamping."""
    pts = _rotate_points(list(path.vertices), degrees)
    jumps = [i for i, e in enumerate(path.edges) if e.kind == "jump"]
    return make_path(pts, jumps)


# Mode descriptions surfaced by the CLI and the HTTP service.
PATH_CATALOGUE: dict[str, dict[str, object]] = {
    "inline_linear": {
        "description": "Horizontal line of evenly spaced vertices at mid height.",
        "params": ["pointCount", "pointDistance", "rotation"],
    },
    "disjoint_inline": {
        "description": "Horizontal rows separated by jump edges; one row per jump+1.",
        "params": ["pointCount", "jumps", "pointDistance", "rotation"],
    },
    "ring": {
        "description": "Closed circle of radius 0.5 about the centre; first and last vertex coincide.",
        "params": ["pointCount", "rotation"],
    },
    "zigzag": {
        "description": "Vertices alternating between an upper and a lower lane.",
        "params": ["pointCount", "rotation"],
    },
    "parametric_spiral": {
        "description": "Rectangular spiral: straight runs with 90-degree turns and growing lengths.",
        "params": ["pointCount", "rotation"],
    },
    "golden_spiral": {
        "description": "Logarithmic spiral whose radius grows by the golden ratio each quarter turn.",
        "params": ["pointCount", "rotation"],
    },
    "sweep": {
        "description": "Grid rows scanned left to right, every row in the same direction.",
        "params": ["pointCount", "order", "rotation"],
    },
    "scan": {
        "description": "Grid rows scanned boustrophedon: alternate rows reverse direction.",
        "params": ["pointCount", "order", "rotation"],
    },
    "diagonal": {
        "description": "Grid cells visited along anti-diagonals, alternating direction.",
        "params": ["pointCount", "order", "rotation"],
    },
    "hilbert": {
        "description": "Hilbert curve over a 2^order grid; neighbouring indices stay adjacent.",
        "params": ["order", "pointCount", "rotation"],
    },
    "peano": {
        "description": "Peano curve over a 3^order grid; serpentine 3x3 recursion.",
        "params": ["order", "pointCount", "rotation"],
    },
    "z_mirror": {
        "description": "Z-order walk with odd rows mirrored to shorten the return hops.",
        "params": ["order", "pointCount", "rotation"],
    },
    "gray": {
        "description": "Reflected-binary walk: Gray-coded index bits de-interleaved into cells.",
        "params": ["order", "pointCount", "rotation"],
    },
    "user_points": {
        "description": "Vertices supplied verbatim (clamped), with explicit jump edges.",
        "params": ["points", "jumps", "rotation"],
    },
}
