"""The gene: one compact, deterministic description of a whole design.

A gene bundles a path recipe, an envelope, a mark description, channel
mappings and a filter chain. Parsing validates exhaustively — every
violation is collected with its dotted field path — and serialisation is
canonical: keys sorted, numbers in shortest round-trip form, two-space
indentation, trailing newline. ``parse ∘ serialize`` is the identity on gene
objects and ``serialize ∘ parse`` is a fixpoint on canonical bytes, which is
what makes byte-identical re-rendering possible.

The gene name doubles as the random seed: it is hashed with a 31-multiplier
polynomial rolled up modulo 2**32 (``h = h*31 + code`` per Unicode scalar),
and the seed drives a small xorshift generator used for jitter. The
generator is fully specified here: state is the 32-bit seed, except that a
zero seed is replaced by the constant 0x9E3779B9 (a zero state would lock
the shift register); each draw applies ``x ^= x<<13; x ^= x>>17; x ^= x<<5``
(all modulo 2**32) and returns the new state. Floats divide by 2**32.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .colors import parse_colour
from .data import CHANNELS, SOURCES, MappingSpec
from .envelope import ALIGNMENTS, SIDE_POLICIES, EnvelopeSpec
from .errors import BadColour, SchemaError
from .generators import PATH_MODES, PathSpec
from .marks import MARK_SHAPES, MarkSpec
from .path import Point

__all__ = [
    "GENE_VERSION",
    "Gene",
    "FilterSpec",
    "MARK_SHAPES",
    "FILTER_KINDS",
    "hash_name",
    "Rng",
    "seeded_rng",
    "gene_rng",
    "parse_gene",
    "serialize_gene",
]

GENE_VERSION = 1

COMBINE_KINDS = ("overlap", "cutout", "union", "intersect", "subtract")
STYLE_KINDS = ("solid_fill", "linear_gradient", "radial_gradient", "stroke", "opacity")
GEOMETRY_KINDS = ("round_corners", "smooth", "metaball")
EFFECT_KINDS = ("blur", "shadow")
FILTER_KINDS = COMBINE_KINDS + STYLE_KINDS + GEOMETRY_KINDS + EFFECT_KINDS


# --------------------------------------------------------------------------
# seeding
# --------------------------------------------------------------------------

def hash_name(name: str) -> int:
    """Polynomial rolling hash of the gene name, wrapped to 32 bits.

    Empty string hashes to 0, "a" to 97, "abc" to 96354.
    """
    h = 0
    for ch in name:
        h = (h * 31 + ord(ch)) & 0xFFFFFFFF
    return h


class Rng:
    """xorshift32 with a documented zero-seed escape (see module docstring)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        s = seed & 0xFFFFFFFF
        if s == 0:
            s = 0x9E3779B9
        self.state = s

    def next_u32(self) -> int:
        x = self.state
        x ^= (x << 13) & 0xFFFFFFFF
        x ^= x >> 17
        x ^= (x << 5) & 0xFFFFFFFF
        self.state = x
        return x

    def next_float(self) -> float:
        """Uniform in [0, 1): next_u32 / 2**32."""
        return self.next_u32() / 4294967296.0


def seeded_rng(seed: int) -> Rng:
    return Rng(seed)


def gene_rng(gene: "Gene") -> Rng:
    return Rng(hash_name(gene.name))


# --------------------------------------------------------------------------
# model
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FilterSpec:
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Gene:
    name: str = ""
    path: PathSpec = field(default_factory=PathSpec)
    envelope: EnvelopeSpec = field(default_factory=EnvelopeSpec)
    mark: MarkSpec = field(default_factory=MarkSpec)
    mappings: tuple[MappingSpec, ...] = ()
    filters: tuple[FilterSpec, ...] = ()
    grouping: int = 1
    version: int = GENE_VERSION


# --------------------------------------------------------------------------
# validation plumbing
# --------------------------------------------------------------------------

class _Check:
    """Typed field extraction that records every violation with its path."""

    def __init__(self) -> None:
        self.errors: list[tuple[str, str]] = []

    def fail(self, path: str, message: str) -> None:
        self.errors.append((path, message))

    def number(self, obj: dict, key: str, path: str, default, minimum=None,
               maximum=None, required=False):
        if key not in obj or obj[key] is None:
            if required:
                self.fail(path, "required field missing")
            return default
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.fail(path, "must be a finite number")
            return default
        if minimum is not None and v < minimum:
            self.fail(path, f"must be >= {minimum:g}")
            return default
        if maximum is not None and v > maximum:
            self.fail(path, f"must be <= {maximum:g}")
            return default
        return float(v)

    def integer(self, obj: dict, key: str, path: str, default, minimum=None,
                maximum=None, required=False):
        if key not in obj or obj[key] is None:
            if required:
                self.fail(path, "required field missing")
            return default
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(path, "must be an integer")
            return default
        if minimum is not None and v < minimum:
            self.fail(path, f"must be >= {minimum}")
            return default
        if maximum is not None and v > maximum:
            self.fail(path, f"must be <= {maximum}")
            return default
        return v

    def string(self, obj: dict, key: str, path: str, default="", required=False):
        if key not in obj or obj[key] is None:
            if required:
                self.fail(path, "required field missing")
            return default
        v = obj[key]
        if not isinstance(v, str):
            self.fail(path, "must be a string")
            return default
        return v

    def enum(self, obj: dict, key: str, path: str, valid: tuple, default: str):
        v = self.string(obj, key, path, default)
        if v not in valid:
            self.fail(path, f"unknown value {v!r}; valid values: {', '.join(valid)}")
            return default
        return v

    def boolean(self, obj: dict, key: str, path: str, default=False):
        if key not in obj or obj[key] is None:
            return default
        v = obj[key]
        if not isinstance(v, bool):
            self.fail(path, "must be a boolean")
            return default
        return v

    def obj(self, parent: dict, key: str, path: str) -> dict | None:
        v = parent.get(key)
        if v is None:
            return None
        if not isinstance(v, dict):
            self.fail(path, "must be an object")
            return None
        return v

    def colour(self, obj: dict, key: str, path: str, default=None, required=False):
        v = self.string(obj, key, path, default="" if default is None else default,
                        required=required)
        if not v:
            return default
        try:
            parse_colour(v)
        except BadColour as exc:
            self.fail(path, str(exc))
            return default
        return v


def _point(ck: _Check, value, path: str) -> Point | None:
    if value is None:
        return None
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in value)
            or any(not math.isfinite(c) for c in value)):
        ck.fail(path, "must be a [x, y] pair of finite numbers")
        return None
    return Point(float(value[0]), float(value[1]))


def _mapping(ck: _Check, obj: dict, path: str, channel: str | None = None) -> MappingSpec:
    if channel is None:
        channel = ck.enum(obj, "channel", f"{path}.channel", CHANNELS, CHANNELS[0])
    source = ck.enum(obj, "source", f"{path}.source", SOURCES, "value_over_range")
    constant = obj.get("constant")
    if constant is not None:
        if isinstance(constant, str):
            if channel == "colour":
                try:
                    parse_colour(constant)
                except BadColour as exc:
                    ck.fail(f"{path}.constant", str(exc))
            elif channel != "text":
                ck.fail(f"{path}.constant", "string constants only fit colour/text channels")
        elif isinstance(constant, bool) or not isinstance(constant, (int, float)):
            ck.fail(f"{path}.constant", "must be a number or string")
            constant = None
        elif not math.isfinite(constant):
            ck.fail(f"{path}.constant", "must be finite")
            constant = None
        else:
            constant = float(constant)
    if source == "constant" and constant is None:
        ck.fail(f"{path}.constant", "constant source needs a constant value")

    palette = None
    if obj.get("palette") is not None:
        raw = obj["palette"]
        if not isinstance(raw, list) or not raw:
            ck.fail(f"{path}.palette", "must be a non-empty list of colours")
        else:
            pal = []
            for i, c in enumerate(raw):
                if not isinstance(c, str):
                    ck.fail(f"{path}.palette[{i}]", "must be a colour string")
                    continue
                try:
                    parse_colour(c)
                    pal.append(c)
                except BadColour as exc:
                    ck.fail(f"{path}.palette[{i}]", str(exc))
            palette = tuple(pal) if pal else None

    gradient = None
    if obj.get("gradient") is not None:
        gradient = _stops(ck, obj["gradient"], f"{path}.gradient")

    for key in obj:
        if key not in {"channel", "source", "constant", "palette", "gradient"}:
            ck.fail(f"{path}.{key}", "unknown mapping field")
    return MappingSpec(channel, source, constant, palette, gradient)


def _stops(ck: _Check, raw, path: str) -> tuple[tuple[float, str], ...] | None:
    if not isinstance(raw, list) or len(raw) < 2:
        ck.fail(path, "must be a list of at least two {offset, colour} stops")
        return None
    stops = []
    for i, s in enumerate(raw):
        if not isinstance(s, dict):
            ck.fail(f"{path}[{i}]", "stop must be an object")
            continue
        off = ck.number(s, "offset", f"{path}[{i}].offset", None, minimum=0.0,
                        maximum=1.0, required=True)
        col = ck.colour(s, "colour", f"{path}[{i}].colour", required=True)
        if off is not None and col:
            stops.append((off, col))
    return tuple(stops) if len(stops) >= 2 else None


def _path_spec(ck: _Check, obj: dict | None) -> PathSpec:
    if obj is None:
        return PathSpec()
    mode = ck.enum(obj, "mode", "path.mode", PATH_MODES, "inline_linear")
    order = ck.integer(obj, "order", "path.order", None, minimum=1, maximum=12)
    default_count = 6
    if order is not None:
        base = 3 if mode == "peano" else 2
        default_count = (base ** order) ** 2
    point_count = ck.integer(obj, "pointCount", "path.pointCount", default_count, minimum=1)
    if order is not None and point_count != default_count:
        ck.fail("path.pointCount", f"inconsistent with order {order} (expected {default_count})")
        point_count = default_count
    rotation = ck.number(obj, "rotation", "path.rotation", 0.0)
    distance = ck.number(obj, "pointDistance", "path.pointDistance", None, minimum=0.0)
    if distance is not None and distance == 0.0:
        ck.fail("path.pointDistance", "must be > 0")
        distance = None

    jumps: list[int] = []
    if obj.get("jumps") is not None:
        raw = obj["jumps"]
        if not isinstance(raw, list):
            ck.fail("path.jumps", "must be a list of edge indices")
        else:
            for i, j in enumerate(raw):
                if isinstance(j, bool) or not isinstance(j, int) or j < 0:
                    ck.fail(f"path.jumps[{i}]", "must be a non-negative integer")
                else:
                    jumps.append(j)

    points = None
    if obj.get("points") is not None:
        raw = obj["points"]
        if not isinstance(raw, list):
            ck.fail("path.points", "must be a list of [x, y] pairs (null entries allowed)")
        else:
            pts: list[tuple[float, float] | None] = []
            for i, entry in enumerate(raw):
                if entry is None:
                    pts.append(None)
                    continue
                p = _point(ck, entry, f"path.points[{i}]")
                pts.append((p.x, p.y) if p is not None else None)
            points = tuple(pts)
    if mode == "user_points" and (points is None or not any(p is not None for p in points)):
        ck.fail("path.points", "user_points mode needs at least one usable point")

    for key in obj:
        if key not in {"mode", "order", "pointCount", "rotation", "pointDistance", "jumps", "points"}:
            ck.fail(f"path.{key}", "unknown path field")

    spec = PathSpec(mode, point_count, rotation, distance, tuple(sorted(set(jumps))), points, order)
    try:
        spec.validate()
    except Exception as exc:
        ck.fail("path", str(exc))
    return spec


def _envelope_spec(ck: _Check, obj: dict | None, path_mode: str, scatter: bool) -> EnvelopeSpec:
    if obj is None:
        if scatter:
            return EnvelopeSpec(1.0, 1.0)
        if path_mode == "ring":
            return EnvelopeSpec(0.1, 0.1)  # 0.2 x the ring radius
        return EnvelopeSpec()
    default = 0.1 if path_mode == "ring" else 0.45
    top = ck.number(obj, "topExtent", "envelope.topExtent", default, minimum=0.0)
    bottom = ck.number(obj, "bottomExtent", "envelope.bottomExtent", default, minimum=0.0)
    if top == 0.0 and bottom == 0.0:
        ck.fail("envelope.topExtent", "top and bottom extents cannot both be zero")
        top = default
    mode = ck.enum(obj, "mode", "envelope.mode", ("parallel", "fixed_point"), "parallel")
    fp = None
    if obj.get("fixedPoint") is not None:
        fp = _point(ck, obj["fixedPoint"], "envelope.fixedPoint")
    if mode == "fixed_point" and fp is None:
        fp = Point(0.5, 0.5)

    per_edge: tuple[str, ...] = ()
    policy_raw = obj.get("sidePolicy")
    if isinstance(policy_raw, list):
        sides = []
        for i, s in enumerate(policy_raw):
            if s not in ("above", "below", "centered"):
                ck.fail(f"envelope.sidePolicy[{i}]",
                        f"unknown value {s!r}; valid values: above, below, centered")
            else:
                sides.append(s)
        per_edge = tuple(sides)
        policy = "per_edge" if per_edge else "center"
    else:
        policy = ck.enum(obj, "sidePolicy", "envelope.sidePolicy", SIDE_POLICIES, "center")
        if policy == "per_edge":
            ck.fail("envelope.sidePolicy", "per_edge takes a list of sides")
            policy = "center"
    switch = ck.boolean(obj, "switchOnTurn", "envelope.switchOnTurn", False)

    for key in obj:
        if key not in {"topExtent", "bottomExtent", "mode", "fixedPoint", "sidePolicy", "switchOnTurn"}:
            ck.fail(f"envelope.{key}", "unknown envelope field")
    return EnvelopeSpec(top, bottom, mode, fp, policy, per_edge, switch)


def _mark_spec(ck: _Check, obj: dict | None) -> MarkSpec:
    if obj is None:
        return MarkSpec()
    shape = ck.enum(obj, "shape", "mark.shape", MARK_SHAPES, "rect")
    anchor = ck.enum(obj, "anchor", "mark.anchor", ALIGNMENTS, "centered")
    stacking = ck.boolean(obj, "stacking", "mark.stacking", False)
    gap = ck.number(obj, "gapFraction", "mark.gapFraction", 0.05, minimum=0.0, maximum=0.9)
    radius = ck.number(obj, "radius", "mark.radius", None, minimum=0.0)
    ring_width = ck.number(obj, "ringWidth", "mark.ringWidth", None, minimum=0.0)
    jitter = ck.number(obj, "jitter", "mark.jitter", 0.0, minimum=0.0, maximum=1.0)
    star = None
    if obj.get("starAnchor") is not None:
        star = _point(ck, obj["starAnchor"], "mark.starAnchor")

    size_channel = None
    sub = ck.obj(obj, "sizeChannel", "mark.sizeChannel")
    if sub is not None:
        size_channel = _mapping(ck, sub, "mark.sizeChannel", channel="mark_height")
    position_channel = None
    sub = ck.obj(obj, "positionChannel", "mark.positionChannel")
    if sub is not None:
        position_channel = _mapping(ck, sub, "mark.positionChannel", channel="mark_position")

    for key in obj:
        if key not in {"shape", "anchor", "stacking", "gapFraction", "radius", "ringWidth",
                       "jitter", "starAnchor", "sizeChannel", "positionChannel"}:
            ck.fail(f"mark.{key}", "unknown mark field")
    return MarkSpec(shape, anchor, size_channel, position_channel, stacking,
                    star, gap, radius, ring_width, jitter)


_FILTER_PARAM_KEYS = {
    "overlap": set(),
    "cutout": set(),
    "union": set(),
    "intersect": set(),
    "subtract": set(),
    "metaball": {"threshold", "gridResolution"},
    "solid_fill": {"colour"},
    "linear_gradient": {"stops", "direction"},
    "radial_gradient": {"stops"},
    "stroke": {"colour", "width"},
    "opacity": {"value"},
    "round_corners": {"radius"},
    "smooth": {"iterations"},
    "blur": {"radius"},
    "shadow": {"dx", "dy", "blur", "colour"},
}


def _filter_spec(ck: _Check, obj: dict, path: str) -> FilterSpec:
    kind = ck.enum(obj, "kind", f"{path}.kind", FILTER_KINDS, "overlap")
    params: dict = {}
    if kind == "metaball":
        params["threshold"] = ck.number(obj, "threshold", f"{path}.threshold", 1.0, minimum=1e-6)
        params["gridResolution"] = ck.integer(obj, "gridResolution", f"{path}.gridResolution",
                                              128, minimum=8, maximum=1024)
    elif kind == "solid_fill":
        params["colour"] = ck.colour(obj, "colour", f"{path}.colour", default="#000000")
    elif kind in ("linear_gradient", "radial_gradient"):
        stops = _stops(ck, obj.get("stops"), f"{path}.stops")
        params["stops"] = [
            {"offset": o, "colour": c} for o, c in (stops or ())
        ]
        if not params["stops"]:
            ck.fail(f"{path}.stops", "gradient needs at least two stops")
        if kind == "linear_gradient":
            params["direction"] = ck.enum(obj, "direction", f"{path}.direction",
                                          ("vertical", "horizontal"), "vertical")
    elif kind == "stroke":
        params["colour"] = ck.colour(obj, "colour", f"{path}.colour", default="#000000")
        params["width"] = ck.number(obj, "width", f"{path}.width", 1.0, minimum=0.0)
    elif kind == "opacity":
        params["value"] = ck.number(obj, "value", f"{path}.value", 1.0, minimum=0.0, maximum=1.0)
    elif kind == "round_corners":
        params["radius"] = ck.number(obj, "radius", f"{path}.radius", None,
                                     minimum=1e-9, required=True)
    elif kind == "smooth":
        params["iterations"] = ck.integer(obj, "iterations", f"{path}.iterations",
                                          3, minimum=1, maximum=8)
    elif kind == "blur":
        params["radius"] = ck.number(obj, "radius", f"{path}.radius", 2.0, minimum=0.0)
    elif kind == "shadow":
        params["dx"] = ck.number(obj, "dx", f"{path}.dx", 2.0)
        params["dy"] = ck.number(obj, "dy", f"{path}.dy", 2.0)
        params["blur"] = ck.number(obj, "blur", f"{path}.blur", 2.0, minimum=0.0)
        params["colour"] = ck.colour(obj, "colour", f"{path}.colour", default="#00000080")

    allowed = _FILTER_PARAM_KEYS[kind] | {"kind"}
    for key in obj:
        if key not in allowed:
            ck.fail(f"{path}.{key}", f"unknown field for {kind} filter")
    return FilterSpec(kind, params)


# --------------------------------------------------------------------------
# parse / serialize
# --------------------------------------------------------------------------

def parse_gene(raw: bytes | str | dict) -> Gene:
    """Parse and validate a gene document.

    Raises SchemaError carrying every violation (path, message). Never lets
    malformed input escape as anything other than SchemaError.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("", f"not valid UTF-8: {exc}") from exc
    if isinstance(raw, str):
        try:
            obj = json.loads(raw)
        except (json.JSONDecodeError, RecursionError, ValueError) as exc:
            raise SchemaError("", f"not valid JSON: {exc}") from exc
    else:
        obj = raw
    if not isinstance(obj, dict):
        raise SchemaError("", "gene document must be a JSON object")

    ck = _Check()
    version = ck.integer(obj, "geneVersion", "geneVersion", GENE_VERSION)
    if version != GENE_VERSION:
        ck.fail("geneVersion", f"unsupported version {version}; this build reads {GENE_VERSION}")
        version = GENE_VERSION
    name = ck.string(obj, "name", "name", "")

    path_spec = _path_spec(ck, ck.obj(obj, "path", "path"))

    mappings: list[MappingSpec] = []
    if obj.get("mappings") is not None:
        raw_maps = obj["mappings"]
        if not isinstance(raw_maps, list):
            ck.fail("mappings", "must be a list")
        else:
            for i, m in enumerate(raw_maps):
                if not isinstance(m, dict):
                    ck.fail(f"mappings[{i}]", "must be an object")
                    continue
                mappings.append(_mapping(ck, m, f"mappings[{i}]"))

    scatter = any(m.channel == "vertex_position" for m in mappings)
    env_spec = _envelope_spec(ck, ck.obj(obj, "envelope", "envelope"), path_spec.mode, scatter)
    mark_spec = _mark_spec(ck, ck.obj(obj, "mark", "mark"))

    filters: list[FilterSpec] = []
    if obj.get("filters") is not None:
        raw_filters = obj["filters"]
        if not isinstance(raw_filters, list):
            ck.fail("filters", "must be a list")
        else:
            for i, f in enumerate(raw_filters):
                if not isinstance(f, dict):
                    ck.fail(f"filters[{i}]", "must be an object")
                    continue
                filters.append(_filter_spec(ck, f, f"filters[{i}]"))

    grouping = ck.integer(obj, "grouping", "grouping", 1, minimum=1)

    for key in obj:
        if key not in {"geneVersion", "name", "path", "envelope", "mark",
                       "mappings", "filters", "grouping"}:
            ck.fail(key, "unknown gene field")

    if ck.errors:
        first = ck.errors[0]
        raise SchemaError(first[0], first[1], ck.errors)
    return Gene(name, path_spec, env_spec, mark_spec, tuple(mappings),
                tuple(filters), grouping, version)


def _mapping_obj(m: MappingSpec, with_channel: bool = True) -> dict:
    obj: dict = {"source": m.source, "constant": m.constant}
    if with_channel:
        obj["channel"] = m.channel
    obj["palette"] = list(m.palette) if m.palette is not None else None
    obj["gradient"] = (
        [{"offset": o, "colour": c} for o, c in m.gradient]
        if m.gradient is not None else None
    )
    return obj


def gene_to_obj(g: Gene) -> dict:
    p = g.path
    e = g.envelope
    m = g.mark
    side_policy: object = e.side_policy
    if e.side_policy == "per_edge":
        side_policy = list(e.per_edge_sides)
    return {
        "geneVersion": g.version,
        "name": g.name,
        "path": {
            "mode": p.mode,
            "pointCount": p.point_count,
            "rotation": p.rotation_deg,
            "pointDistance": p.point_distance,
            "jumps": list(p.jumps),
            "points": (
                [list(pt) if pt is not None else None for pt in p.user_points]
                if p.user_points is not None else None
            ),
            "order": p.order,
        },
        "envelope": {
            "topExtent": e.top_extent,
            "bottomExtent": e.bottom_extent,
            "mode": e.mode,
            "fixedPoint": list(e.fixed_point) if e.fixed_point is not None else None,
            "sidePolicy": side_policy,
            "switchOnTurn": e.switch_on_turn,
        },
        "mark": {
            "shape": m.shape,
            "anchor": m.anchor,
            "stacking": m.stacking,
            "gapFraction": m.gap_fraction,
            "radius": m.radius,
            "ringWidth": m.ring_width,
            "jitter": m.jitter,
            "starAnchor": list(m.star_anchor) if m.star_anchor is not None else None,
            "sizeChannel": (
                _mapping_obj(m.size_channel, with_channel=False)
                if m.size_channel is not None else None
            ),
            "positionChannel": (
                _mapping_obj(m.position_channel, with_channel=False)
                if m.position_channel is not None else None
            ),
        },
        "mappings": [_mapping_obj(mp) for mp in g.mappings],
        "filters": [{"kind": f.kind, **f.params} for f in g.filters],
        "grouping": g.grouping,
    }


def serialize_gene(g: Gene) -> bytes:
    """Canonical bytes: sorted keys, 2-space indent, shortest round-trip
    numbers, newline-terminated."""
    return (json.dumps(gene_to_obj(g), sort_keys=True, indent=2,
                       ensure_ascii=False) + "\n").encode("utf-8")
