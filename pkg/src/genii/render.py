"""Pipeline renderer: gene + dataset -> deterministic SVG bytes.

Stages always run in the same order — generate path, build envelope, place
marks with resolved data, apply filters, clip, emit — and the emitted
document carries a stage comment trail so the order is observable. Geometry
lives in the unit square until the very last moment; the single y-flip
happens inside the unit→pixel affine transform and nowhere else. Pixel
coordinates are written with at most four decimals, which together with the
canonical gene serialisation makes re-renders byte-identical.

The canonical gene bytes ride along in a metadata comment
(``genii:gene:v1:base64:...``) so any consumer can recover the exact design
from the artwork alone; ``extract_gene`` does exactly that.
"""

from __future__ import annotations

import base64
import hashlib
import os
import re
import warnings
from dataclasses import dataclass, replace

from shapely.geometry import box

from . import filters as filt
from .colors import OKABE_ITO, gradient_colour
from .data import Dataset, bind_gene_data, dataset_pairs
from .envelope import Envelope, build_envelope, envelope_region
from .errors import GeniiError, GeniiWarning
from .gene import Gene, gene_rng, parse_gene, serialize_gene
from .generators import generate
from .marks import MarkGeometry, clip_mark_to_region, place_marks, scatter_place
from .path import FlowPath, Point, clamp01, walk, VertexStep

__all__ = [
    "STAGES",
    "RenderOptions",
    "Viewport",
    "Scene",
    "to_pixels",
    "resolve_dpi",
    "build_scene",
    "render",
    "render_hash",
    "subpixel_audit",
    "extract_gene",
]

STAGES = ("path", "envelope", "marks", "filters", "clip", "emit")

DEFAULT_DPI = 96.0
CM_PER_INCH = 2.54

_GENE_COMMENT_RE = re.compile(rb"genii:gene:v1:base64:([A-Za-z0-9+/=]+)")


def to_pixels(cm: float, dpi: float = DEFAULT_DPI) -> float:
    """Centimetres to pixels at the given dots-per-inch."""
    return cm * dpi / CM_PER_INCH


def resolve_dpi(explicit: float | None = None) -> float:
    """Precedence: explicit argument, then GENII_DPI, then 96."""
    if explicit is not None:
        return float(explicit)
    env = os.environ.get("GENII_DPI")
    if env:
        try:
            value = float(env)
            if value > 0:
                return value
        except ValueError:
            warnings.warn(f"GENII_DPI={env!r} is not a number; using default", GeniiWarning)
    return DEFAULT_DPI


@dataclass(frozen=True)
class RenderOptions:
    dpi: float | None = None
    background: str | None = None
    emit_debug_path: bool = False


@dataclass(frozen=True)
class Viewport:
    width_px: float
    height_px: float
    padding_px: float

    @classmethod
    def from_dataset(cls, dataset: Dataset, dpi: float) -> "Viewport":
        return cls(
            to_pixels(dataset.width_cm, dpi),
            to_pixels(dataset.height_cm, dpi),
            to_pixels(dataset.padding_cm, dpi),
        )

    def to_device(self, p: Point) -> Point:
        """The one affine transform: pad, scale, flip y."""
        inner_w = self.width_px - 2 * self.padding_px
        inner_h = self.height_px - 2 * self.padding_px
        return Point(
            self.padding_px + p.x * inner_w,
            self.padding_px + (1.0 - p.y) * inner_h,
        )

    def scale(self) -> tuple[float, float]:
        return (self.width_px - 2 * self.padding_px, self.height_px - 2 * self.padding_px)


@dataclass(frozen=True)
class Scene:
    gene: Gene
    dataset: Dataset
    path: FlowPath
    envelope: Envelope | None
    marks: tuple[MarkGeometry, ...]
    viewport: Viewport
    options: RenderOptions
    warnings: tuple[str, ...] = ()
    stage_notes: tuple[str, ...] = ()


# --------------------------------------------------------------------------
# pipeline
# --------------------------------------------------------------------------

def _scatter_strategy(gene: Gene) -> str | None:
    for m in gene.mappings:
        if m.channel == "vertex_position":
            return "path_through_data" if m.source == "value" else "vertical_from_axis"
    return None


def _scatter_colours(gene: Gene, dataset: Dataset, count: int) -> list[str | None]:
    """Per-point fills for scatter marks, honouring the colour mapping."""
    mapping = next((m for m in gene.mappings if m.channel == "colour"), None)
    colours: list[str | None] = []
    for k in range(count):
        if mapping is None:
            colours.append(None)
        elif mapping.source == "constant":
            colours.append(mapping.constant)
        elif mapping.palette:
            colours.append(mapping.palette[(k // max(1, gene.grouping)) % len(mapping.palette)])
        elif mapping.gradient:
            t = (k / (count - 1)) if count > 1 else 0.0
            colours.append(gradient_colour(mapping.gradient, t))
        else:
            colours.append(OKABE_ITO[(k // max(1, gene.grouping)) % len(OKABE_ITO)])
    return colours


def _group_marks(marks: list[MarkGeometry], path: FlowPath, grouping: int) -> list[MarkGeometry]:
    ordinal = {edge: i for i, edge in enumerate(path.draw_edge_indices())}
    out = []
    for m in marks:
        o = ordinal.get(m.edge_index, 0)
        out.append(replace(m, group=o // max(1, grouping)))
    return out


def _run_filters(marks: list[MarkGeometry], gene: Gene) -> tuple[list[MarkGeometry], list[str]]:
    notes = []
    for f in gene.filters:
        if f.kind in filt.COMBINE_MODES:
            marks = _per_group(marks, lambda group: filt.combine(group, f.kind))
        elif f.kind == "metaball":
            marks = _per_group(
                marks,
                lambda group: _metaball_group(
                    group, f.params.get("threshold", 1.0), f.params.get("gridResolution", 128)
                ),
            )
        elif f.kind == "round_corners":
            marks = filt.round_corners(marks, f.params["radius"])
        elif f.kind == "smooth":
            marks = filt.smooth(marks, f.params.get("iterations", 3))
        else:
            marks = filt.apply_style(marks, f.kind, f.params)
        notes.append(f.kind)
    return marks, notes


def _per_group(marks: list[MarkGeometry], op) -> list[MarkGeometry]:
    groups: dict[int, list[MarkGeometry]] = {}
    for m in marks:
        groups.setdefault(m.group, []).append(m)
    out: list[MarkGeometry] = []
    for g in sorted(groups):
        transformed = op(groups[g])
        out.extend(replace(m, group=g) for m in transformed)
    return [replace(m, z_order=i) for i, m in enumerate(out)]


def _metaball_group(group: list[MarkGeometry], threshold: float, grid: int) -> list[MarkGeometry]:
    balls = [(m.ball[0], m.ball[1]) for m in group if m.ball is not None]
    passthrough = [m for m in group if m.ball is None]
    if not balls:
        return group
    rings = filt.metaball_merge(balls, threshold, grid)
    template = next(m for m in group if m.ball is not None)
    merged = _rings_to_marks(rings, template)
    return merged + passthrough


def _rings_to_marks(rings: list[list[Point]], template: MarkGeometry) -> list[MarkGeometry]:
    """Pair CCW shells with the CW holes they contain."""
    shells = []
    holes = []
    for ring in rings:
        area2 = 0.0
        for i in range(len(ring)):
            a = ring[i]
            b = ring[(i + 1) % len(ring)]
            area2 += a.x * b.y - b.x * a.y
        if area2 >= 0:
            shells.append((abs(area2) / 2.0, ring))
        else:
            holes.append(ring)
    shells.sort(key=lambda s: s[0])  # smallest first: innermost shell wins containment
    assigned: dict[int, list[list[Point]]] = {i: [] for i in range(len(shells))}
    for hole in holes:
        probe = hole[0]
        for i, (_, shell) in enumerate(shells):
            if _point_in_ring(probe, shell):
                assigned[i].append(hole)
                break
    out = []
    for i, (_, shell) in enumerate(shells):
        out.append(replace(
            template,
            outline=tuple(shell),
            holes=tuple(tuple(h) for h in assigned[i]),
            ball=None,
        ))
    return out


def _point_in_ring(p: Point, ring: list[Point]) -> bool:
    inside = False
    n = len(ring)
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x)
            if p.x < x_cross:
                inside = not inside
    return inside


def build_scene(gene: Gene, dataset: Dataset | None = None,
                options: RenderOptions | None = None) -> Scene:
    """Run every pipeline stage up to (but excluding) serialisation."""
    dataset = dataset if dataset is not None else Dataset()
    options = options if options is not None else RenderOptions()
    dpi = resolve_dpi(options.dpi)
    viewport = Viewport.from_dataset(dataset, dpi)
    notes = []
    captured: list[str] = []

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")

        # stage: path
        strategy = _scatter_strategy(gene)
        if strategy is not None:
            pairs = dataset_pairs(dataset)
            radius = gene.mark.radius if gene.mark.radius is not None else 0.025
            path, marks = scatter_place(pairs, strategy, radius)
        else:
            path = generate(gene.path)
            marks = []
        notes.append(f"path:{len(path.vertices)}v/{len(path.edges)}e")

        # stage: envelope
        envelope: Envelope | None = None
        drawable = bool(path.draw_edge_indices())
        if drawable:
            envelope = build_envelope(path, gene.envelope)
            notes.append(f"envelope:{len(envelope.top)}+{len(envelope.bottom)}")
        else:
            notes.append("envelope:none")

        # stage: marks
        if strategy is None:
            if envelope is not None and dataset.categories:
                bound = bind_gene_data(gene, dataset)
                rng = gene_rng(gene) if gene.mark.jitter > 0 else None
                marks = place_marks(path, envelope, gene.mark, bound, rng=rng)
            else:
                marks = []
        else:
            # scatter marks take the gene's colour mapping, group by point order
            bound_colours = _scatter_colours(gene, dataset, len(marks))
            marks = [
                replace(m, style=replace(m.style, fill=c or m.style.fill))
                for m, c in zip(marks, bound_colours)
            ]
        marks = _group_marks(marks, path, gene.grouping)
        notes.append(f"marks:{len(marks)}")

        # stage: filters
        marks, applied = _run_filters(marks, gene)
        notes.append("filters:" + (",".join(applied) if applied else "none"))

        # audit before clipping: zero-size marks vanish under the clip, but the
        # author still deserves to hear that they were invisibly small
        for w in subpixel_audit(marks, viewport):
            warnings.warn(w, GeniiWarning)

        # stage: clip
        if envelope is not None:
            region = envelope_region(envelope).intersection(box(0.0, 0.0, 1.0, 1.0))
        else:
            region = box(0.0, 0.0, 1.0, 1.0)
        clipped: list[MarkGeometry] = []
        for m in marks:
            clipped.extend(clip_mark_to_region(m, region))
        marks = [replace(m, z_order=i) for i, m in enumerate(clipped)]
        notes.append(f"clip:{len(marks)}")

        captured = [str(w.message) for w in caught if issubclass(w.category, Warning)]

    for message in captured:
        warnings.warn(message, GeniiWarning)

    return Scene(gene, dataset, path, envelope, tuple(marks), viewport, options,
                 tuple(captured), tuple(notes))


def subpixel_audit(marks, viewport: Viewport) -> list[str]:
    """Warn (never drop) for marks whose device-space box dips under 1px."""
    sx, sy = viewport.scale()
    out = []
    for m in marks:
        if m.text is not None or not m.outline:
            continue
        xs = [p.x for p in m.outline]
        ys = [p.y for p in m.outline]
        w = (max(xs) - min(xs)) * sx
        h = (max(ys) - min(ys)) * sy
        if (w < 1.0 or h < 1.0) and not (m.closed is False and len(m.outline) == 2 and w + h > 2.0):
            out.append(
                f"mark on edge {m.edge_index} spans {w:.3f}x{h:.3f} px (sub-pixel)"
            )
    return out


# --------------------------------------------------------------------------
# SVG emission
# --------------------------------------------------------------------------

def fmt_num(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    if s in ("-0", ""):
        s = "0"
    return s


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _ring_d(points, viewport: Viewport, close: bool) -> str:
    cmds = []
    for i, p in enumerate(points):
        d = viewport.to_device(p)
        cmds.append(f"{'M' if i == 0 else 'L'} {fmt_num(d.x)} {fmt_num(d.y)}")
    if close:
        cmds.append("Z")
    return " ".join(cmds)


def _skeleton_d(path: FlowPath, viewport: Viewport) -> str:
    cmds = []
    pen_up = True
    for step in walk(path):
        if isinstance(step, VertexStep):
            d = viewport.to_device(step.point)
            cmds.append(f"{'M' if pen_up else 'L'} {fmt_num(d.x)} {fmt_num(d.y)}")
        else:
            pen_up = step.edge.kind == "jump"
    return " ".join(cmds)


def _gradient_defs(scene: Scene) -> tuple[list[str], dict[tuple, str]]:
    defs = []
    ids: dict[tuple, str] = {}
    vp = scene.viewport
    pad = vp.padding_px
    for m in scene.marks:
        g = m.style.gradient
        if g is None or g in ids:
            continue
        gid = f"grad{len(ids)}"
        ids[g] = gid
        stops = "".join(
            f'<stop offset="{fmt_num(o)}" stop-color="{c}"/>' for o, c in g[1]
        )
        if g[0] == "linear":
            direction = g[2] if len(g) > 2 else "vertical"
            if direction == "horizontal":
                coords = (pad, pad, vp.width_px - pad, pad)
            else:  # vertical: offset 0 at the bottom of the drawable area
                coords = (pad, vp.height_px - pad, pad, pad)
            defs.append(
                f'<linearGradient id="{gid}" gradientUnits="userSpaceOnUse" '
                f'x1="{fmt_num(coords[0])}" y1="{fmt_num(coords[1])}" '
                f'x2="{fmt_num(coords[2])}" y2="{fmt_num(coords[3])}">{stops}</linearGradient>'
            )
        else:
            cx = vp.width_px / 2.0
            cy = vp.height_px / 2.0
            r = max(vp.width_px, vp.height_px) / 2.0
            defs.append(
                f'<radialGradient id="{gid}" gradientUnits="userSpaceOnUse" '
                f'cx="{fmt_num(cx)}" cy="{fmt_num(cy)}" r="{fmt_num(r)}">{stops}</radialGradient>'
            )
    return defs, ids


def _effect_defs(scene: Scene) -> tuple[list[str], dict[tuple, str]]:
    defs = []
    ids: dict[tuple, str] = {}
    for m in scene.marks:
        fx = m.style.effects
        if not fx or fx in ids:
            continue
        fid = f"fx{len(ids)}"
        ids[fx] = fid
        parts = []
        for e in fx:
            if e[0] == "blur":
                parts.append(f'<feGaussianBlur stdDeviation="{fmt_num(e[1])}"/>')
            elif e[0] == "shadow":
                parts.append(
                    f'<feDropShadow dx="{fmt_num(e[1])}" dy="{fmt_num(e[2])}" '
                    f'stdDeviation="{fmt_num(e[3])}" flood-color="{e[4]}"/>'
                )
        defs.append(
            f'<filter id="{fid}" x="-50%" y="-50%" width="200%" height="200%">'
            + "".join(parts) + "</filter>"
        )
    return defs, ids


def _mark_element(m: MarkGeometry, viewport: Viewport,
                  grad_ids: dict, fx_ids: dict) -> str:
    style = m.style
    attrs = []
    if style.effects and style.effects in fx_ids:
        attrs.append(f'filter="url(#{fx_ids[style.effects]})"')
    if style.opacity < 1.0:
        attrs.append(f'opacity="{fmt_num(style.opacity)}"')

    if m.text is not None:
        d = viewport.to_device(Point(clamp01(m.outline[0].x), clamp01(m.outline[0].y)))
        size_px = (m.font_size or 0.1) * viewport.scale()[1]
        fill = style.fill or "#000000"
        return (
            f'<text x="{fmt_num(d.x)}" y="{fmt_num(d.y)}" font-size="{fmt_num(size_px)}" '
            f'font-family="sans-serif" text-anchor="middle" fill="{fill}" '
            + " ".join(attrs) + f'>{_escape(m.text)}</text>'
        )

    if not m.closed:
        dstr = _ring_d(m.outline, viewport, close=False)
        stroke = style.stroke or style.fill or "#000000"
        sw = style.stroke_width if style.stroke_width > 0 else 1.0
        return (
            f'<path d="{dstr}" fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt_num(sw)}" stroke-linecap="round" ' + " ".join(attrs) + "/>"
        )

    rings = [_ring_d(m.outline, viewport, close=True)]
    rings.extend(_ring_d(h, viewport, close=True) for h in m.holes)
    dstr = " ".join(rings)
    if style.gradient is not None and style.gradient in grad_ids:
        fill = f"url(#{grad_ids[style.gradient]})"
    else:
        fill = style.fill or "none"
    parts = [f'<path d="{dstr}" fill="{fill}"']
    if m.holes:
        parts.append(' fill-rule="evenodd"')
    if style.stroke:
        parts.append(f' stroke="{style.stroke}" stroke-width="{fmt_num(style.stroke_width)}"')
    if attrs:
        parts.append(" " + " ".join(attrs))
    parts.append("/>")
    return "".join(parts)


def emit_svg(scene: Scene) -> bytes:
    """Serialise a scene to a standalone SVG 1.1 document (UTF-8 bytes)."""
    vp = scene.viewport
    w = fmt_num(vp.width_px)
    h = fmt_num(vp.height_px)
    gene_b64 = base64.b64encode(serialize_gene(scene.gene)).decode("ascii")

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f"<!-- genii:stages {','.join(STAGES)} -->",
        f"<!-- genii:gene:v1:base64:{gene_b64} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" '
        f'height="{h}" viewBox="0 0 {w} {h}">',
    ]

    grad_defs, grad_ids = _gradient_defs(scene)
    fx_defs, fx_ids = _effect_defs(scene)
    if grad_defs or fx_defs:
        lines.append("<defs>")
        lines.extend(grad_defs)
        lines.extend(fx_defs)
        lines.append("</defs>")

    if scene.options.background:
        lines.append(f'<rect x="0" y="0" width="{w}" height="{h}" '
                     f'fill="{scene.options.background}"/>')

    for note in scene.stage_notes:
        lines.append(f"<!-- stage:{note} -->")

    if scene.options.emit_debug_path:
        lines.append(
            f'<path class="genii-skeleton" d="{_skeleton_d(scene.path, vp)}" '
            'fill="none" stroke="#888888" stroke-width="1" stroke-dasharray="4 3"/>'
        )

    current_group: int | None = None
    for m in scene.marks:
        if m.group != current_group:
            if current_group is not None:
                lines.append("</g>")
            lines.append(f'<g class="genii-group" data-group="{m.group}">')
            current_group = m.group
        lines.append(_mark_element(m, vp, grad_ids, fx_ids))
    if current_group is not None:
        lines.append("</g>")

    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def render(gene: Gene, dataset: Dataset | None = None,
           options: RenderOptions | None = None) -> bytes:
    """Full pipeline: returns the SVG document bytes."""
    scene = build_scene(gene, dataset, options)
    return emit_svg(scene)


def render_hash(svg: bytes) -> str:
    """Content digest used in the X-Genii-Hash response header (sha256 hex)."""
    return hashlib.sha256(svg).hexdigest()


def extract_gene(svg: bytes) -> Gene:
    """Recover the gene embedded in a rendered document."""
    match = _GENE_COMMENT_RE.search(svg)
    if not match:
        raise GeniiError("no embedded gene found in document")
    return parse_gene(base64.b64decode(match.group(1)))
