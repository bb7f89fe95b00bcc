"""Dataset parsing and the channel bindings that feed marks.

A dataset is a JSON document::

    {
      "categories": [{"name": "mon", "value": 3.0, "range": 10.0}, ...],
      "width": 4.4,          # centimetres
      "height": 4.4,
      "padding": 0.2,        # applied to every side
      "series": [ ... ]      # optional named category groups
    }

Channels describe what a datum drives (mark height, position, colour, ...)
and sources describe where the number comes from (the raw value, the value
normalised by its range, the category name, the index, or a constant).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .colors import OKABE_ITO, gradient_colour
from .errors import (
    EmptyPath,
    GeniiWarning,
    MissingDatum,
    OddPairCount,
    SchemaError,
    ZeroRange,
)
from .path import FlowPath, Point, clamp01, make_path

__all__ = [
    "Category",
    "Series",
    "Dataset",
    "MappingSpec",
    "ResolvedDatum",
    "CHANNELS",
    "SOURCES",
    "parse_dataset",
    "serialize_dataset",
    "resolve",
    "bind_gene_data",
    "data_driven_path",
    "dataset_pairs",
]

CHANNELS = (
    "mark_height",
    "mark_width",
    "mark_position",
    "vertex_position",
    "colour",
    "angle",
    "text",
    "filter_param",
)

SOURCES = ("value", "value_over_range", "name", "index", "constant")


@dataclass(frozen=True)
class Category:
    name: str
    value: float
    range_: float


@dataclass(frozen=True)
class Series:
    name: str
    categories: tuple[Category, ...]


@dataclass(frozen=True)
class Dataset:
    categories: tuple[Category, ...] = ()
    width_cm: float = 4.4
    height_cm: float = 4.4
    padding_cm: float = 0.2
    series: tuple[Series, ...] = ()


@dataclass(frozen=True)
class MappingSpec:
    """One channel binding. ``constant`` only applies to the constant source;
    ``palette`` colours cycle by index; ``gradient`` stops are (offset, colour)
    pairs sampled at the normalised value."""

    channel: str
    source: str = "value_over_range"
    constant: float | str | None = None
    palette: tuple[str, ...] | None = None
    gradient: tuple[tuple[float, str], ...] | None = None


class ResolvedDatum(NamedTuple):
    """Per-mark attributes handed to the placement stage."""

    index: int
    value: float
    range_: float
    height: float          # fraction of the envelope reach, already clamped
    height_explicit: bool  # True when the gene declared the size channel
    position: float        # baseline offset fraction (range charts)
    colour: str | None
    width: float | None    # fraction of the edge length, None = default
    text: str | None
    angle: float | None


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_KNOWN_KEYS = {"categories", "width", "height", "padding", "series"}


def _category(obj: object, where: str, errors: list[tuple[str, str]]) -> Category | None:
    if not isinstance(obj, dict):
        errors.append((where, "category must be an object"))
        return None
    name = obj.get("name")
    if not isinstance(name, str):
        errors.append((f"{where}.name", "name must be a string"))
        name = ""
    value = obj.get("value")
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        errors.append((f"{where}.value", "value must be a finite number"))
        value = 0.0
    rng = obj.get("range")
    if not isinstance(rng, (int, float)) or isinstance(rng, bool) or not math.isfinite(rng):
        errors.append((f"{where}.range", "range must be a finite number"))
        rng = 1.0
    elif rng <= 0:
        errors.append((f"{where}.range", "range must be > 0"))
    for key in obj:
        if key not in {"name", "value", "range"}:
            warnings.warn(f"{where}.{key}: unknown category field ignored", GeniiWarning)
    return Category(name, float(value), float(rng))


def parse_dataset(raw: bytes | str | dict) -> Dataset:
    """Parse and validate a dataset document. Raises SchemaError with the
    offending field path(s); unknown fields only warn."""
    if isinstance(raw, (bytes, str)):
        try:
            obj = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SchemaError("", f"not valid JSON: {exc}") from exc
    else:
        obj = raw
    if not isinstance(obj, dict):
        raise SchemaError("", "dataset document must be a JSON object")

    errors: list[tuple[str, str]] = []
    cats_raw = obj.get("categories", [])
    categories: list[Category] = []
    if not isinstance(cats_raw, list):
        errors.append(("categories", "must be a list"))
    else:
        for i, c in enumerate(cats_raw):
            cat = _category(c, f"categories[{i}]", errors)
            if cat is not None:
                categories.append(cat)

    def _positive(key: str, default: float, minimum: float = 0.0) -> float:
        v = obj.get(key, default)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            errors.append((key, "must be a finite number"))
            return default
        if v < minimum or (minimum > 0 and v <= 0):
            errors.append((key, f"must be > {minimum:g}"))
            return default
        return float(v)

    width = _positive("width", 4.4, minimum=1e-9)
    height = _positive("height", 4.4, minimum=1e-9)
    padding = _positive("padding", 0.2)
    if padding * 2 >= min(width, height):
        errors.append(("padding", "padding leaves no drawable area"))

    series: list[Series] = []
    series_raw = obj.get("series", [])
    if series_raw and not isinstance(series_raw, list):
        errors.append(("series", "must be a list"))
    elif isinstance(series_raw, list):
        for si, s in enumerate(series_raw):
            if not isinstance(s, dict):
                errors.append((f"series[{si}]", "series entry must be an object"))
                continue
            sname = s.get("name")
            if not isinstance(sname, str):
                sname = f"series-{si}"
            scats = []
            for ci, c in enumerate(s.get("categories", [])):
                cat = _category(c, f"series[{si}].categories[{ci}]", errors)
                if cat is not None:
                    scats.append(cat)
            series.append(Series(sname, tuple(scats)))

    for key in obj:
        if key not in _KNOWN_KEYS:
            warnings.warn(f"unknown dataset field {key!r} ignored", GeniiWarning)

    if errors:
        raise SchemaError(errors[0][0], errors[0][1], errors)
    return Dataset(tuple(categories), width, height, padding, tuple(series))


def serialize_dataset(ds: Dataset) -> bytes:
    obj: dict = {
        "categories": [
            {"name": c.name, "value": c.value, "range": c.range_} for c in ds.categories
        ],
        "width": ds.width_cm,
        "height": ds.height_cm,
        "padding": ds.padding_cm,
    }
    if ds.series:
        obj["series"] = [
            {
                "name": s.name,
                "categories": [
                    {"name": c.name, "value": c.value, "range": c.range_}
                    for c in s.categories
                ],
            }
            for s in ds.series
        ]
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# channel resolution
# --------------------------------------------------------------------------

def resolve(spec: MappingSpec, dataset: Dataset, index: int):
    """Resolve one channel for the datum at ``index``.

    value_over_range always lands in [0, 1] after clamping. Colour channels
    pick from the palette (cycling by index) or sample the gradient at the
    normalised value. Raises MissingDatum / ZeroRange / IndexOutOfRange-style
    SchemaError consistent with the source.
    """
    if spec.source == "constant":
        if spec.channel == "colour" and isinstance(spec.constant, str):
            return spec.constant
        return spec.constant

    if index < 0 or index >= len(dataset.categories):
        raise MissingDatum(f"no category at index {index}")
    cat = dataset.categories[index]

    if spec.source == "name":
        return cat.name
    if spec.source == "index":
        if spec.channel == "colour":
            palette = spec.palette or OKABE_ITO
            return palette[index % len(palette)]
        return float(index)

    # value-based sources
    if cat.range_ <= 0:
        raise ZeroRange(f"category {cat.name!r} has non-positive range")
    if spec.source == "value":
        v = cat.value
    elif spec.source == "value_over_range":
        v = clamp01(cat.value / cat.range_)
    else:
        raise SchemaError("source", f"unknown source {spec.source!r}; valid: {', '.join(SOURCES)}")

    if spec.channel == "colour":
        t = clamp01(cat.value / cat.range_)
        if spec.gradient:
            return gradient_colour(spec.gradient, t)
        palette = spec.palette or OKABE_ITO
        return palette[index % len(palette)]
    if spec.channel == "angle":
        return 360.0 * clamp01(cat.value / cat.range_)
    if spec.channel == "text":
        return f"{cat.value:g}"
    return v


# --------------------------------------------------------------------------
# data-driven paths (scatter support)
# --------------------------------------------------------------------------

def dataset_pairs(dataset: Dataset) -> list[Point]:
    """Interpret consecutive categories as (x, y) pairs, each normalised by
    its own range. Raises OddPairCount when the categories don't pair up."""
    cats = dataset.categories
    if len(cats) % 2 != 0:
        raise OddPairCount(f"{len(cats)} categories cannot form (x, y) pairs")
    pts = []
    for i in range(0, len(cats), 2):
        cx, cy = cats[i], cats[i + 1]
        if cx.range_ <= 0 or cy.range_ <= 0:
            raise ZeroRange(f"pair {i // 2} has a non-positive range")
        pts.append(Point(clamp01(cx.value / cx.range_), clamp01(cy.value / cy.range_)))
    return pts


def bind_gene_data(gene, dataset: Dataset) -> list[ResolvedDatum]:
    """Resolve every channel a gene maps into per-datum attributes.

    Range-pair rule: when the gene maps BOTH mark_position and mark_height
    from value-based sources, consecutive categories pair up — the first of
    the pair sets the baseline position, the difference sets the height
    (start/end range data). A trailing unpaired category is dropped with a
    warning. Grouped genes (grouping > 1) share one colour per group.
    """
    by_channel: dict[str, MappingSpec] = {}
    for m in gene.mappings:
        by_channel.setdefault(m.channel, m)
    height_map = gene.mark.size_channel or by_channel.get("mark_height")
    position_map = gene.mark.position_channel or by_channel.get("mark_position")
    colour_map = by_channel.get("colour")
    width_map = by_channel.get("mark_width")
    text_map = by_channel.get("text")
    angle_map = by_channel.get("angle")

    height_explicit = height_map is not None
    if height_map is None:
        height_map = MappingSpec("mark_height", "value_over_range")

    value_sources = ("value", "value_over_range")
    paired = (
        position_map is not None
        and height_map.source in value_sources
        and position_map.source in value_sources
    )

    cats = dataset.categories
    grouping = max(1, getattr(gene, "grouping", 1))

    def colour_for(k: int, cat: Category | None) -> str | None:
        if colour_map is None:
            return None
        g = k // grouping
        lead = g * grouping  # first datum of the visual group
        if colour_map.source == "constant":
            return colour_map.constant if isinstance(colour_map.constant, str) else None
        if colour_map.gradient is not None and cat is not None:
            lead_cat = cats[min(lead if not paired else lead * 2, len(cats) - 1)]
            t = clamp01(lead_cat.value / lead_cat.range_) if lead_cat.range_ > 0 else 0.0
            return gradient_colour(colour_map.gradient, t)
        palette = colour_map.palette or OKABE_ITO
        return palette[g % len(palette)]

    out: list[ResolvedDatum] = []
    if paired:
        if len(cats) % 2 != 0:
            warnings.warn("odd category left over after pairing; dropped", GeniiWarning)
        for k in range(len(cats) // 2):
            start_cat, end_cat = cats[2 * k], cats[2 * k + 1]
            rng_ = start_cat.range_
            if rng_ <= 0:
                raise ZeroRange(f"category {start_cat.name!r} has non-positive range")
            position = clamp01(start_cat.value / rng_)
            span = (end_cat.value - start_cat.value) / rng_
            if span < 0:
                warnings.warn(f"pair {k} ends before it starts; height clamped to 0",
                              GeniiWarning)
                span = 0.0
            height = min(span, 1.0 - position)
            out.append(ResolvedDatum(
                index=k, value=end_cat.value - start_cat.value, range_=rng_,
                height=height, height_explicit=True, position=position,
                colour=colour_for(k, start_cat),
                width=_fraction(width_map, dataset, 2 * k),
                text=_text(text_map, dataset, 2 * k),
                angle=_angle(angle_map, dataset, 2 * k),
            ))
        return out

    for k, cat in enumerate(cats):
        height = _fraction(height_map, dataset, k)
        if height is None:
            height = 0.0
        position = _fraction(position_map, dataset, k) or 0.0
        out.append(ResolvedDatum(
            index=k, value=cat.value, range_=cat.range_,
            height=height, height_explicit=height_explicit, position=position,
            colour=colour_for(k, cat),
            width=_fraction(width_map, dataset, k),
            text=_text(text_map, dataset, k),
            angle=_angle(angle_map, dataset, k),
        ))
    return out


def _fraction(spec: MappingSpec | None, dataset: Dataset, index: int) -> float | None:
    if spec is None:
        return None
    v = resolve(spec, dataset, index)
    if v is None or isinstance(v, str):
        return None
    if spec.source == "value" and index < len(dataset.categories):
        cat = dataset.categories[index]
        if cat.range_ > 0:
            return clamp01(v / cat.range_)
    if spec.source == "index":
        n = max(len(dataset.categories) - 1, 1)
        return clamp01(v / n)
    return clamp01(float(v))


def _text(spec: MappingSpec | None, dataset: Dataset, index: int) -> str | None:
    if spec is None:
        return None
    v = resolve(spec, dataset, index)
    return v if isinstance(v, str) else (f"{v:g}" if v is not None else None)


def _angle(spec: MappingSpec | None, dataset: Dataset, index: int) -> float | None:
    if spec is None:
        return None
    v = resolve(spec, dataset, index)
    if isinstance(v, str) or v is None:
        return None
    return float(v)


def data_driven_path(dataset: Dataset, mode: str) -> FlowPath:
    """Build a path from the data itself.

    ``vertical_from_axis``: a straight axis along the bottom with one vertex
    under each point. ``path_through_data``: the path runs through the data
    points in order.
    """
    pts = dataset_pairs(dataset)
    if not pts:
        raise EmptyPath("dataset holds no point pairs")
    if mode == "vertical_from_axis":
        return make_path([Point(p.x, 0.0) for p in pts])
    if mode == "path_through_data":
        return make_path(pts)
    raise SchemaError("mode", f"unknown data-driven path mode {mode!r}")
