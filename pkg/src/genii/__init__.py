"""Genii: a deterministic generative-visualisation engine.

A design is a *gene*: a small JSON document naming a flowpath layout, an
envelope around it, a mark shape, data-channel mappings, and a filter chain.
Feeding the same gene and the same dataset through :func:`render` always
produces byte-identical SVG.

Typical use::

    from genii import parse_gene, parse_dataset, render

    gene = parse_gene(open("bar.gene", "rb").read())
    data = parse_dataset(open("bar.data", "rb").read())
    svg = render(gene, data)
"""

from .errors import (
    GeniiError,
    GeniiWarning,
    SchemaError,
)
from .path import FlowPath, Point, edge_normal, make_path, normalize_path, walk
from .generators import PATH_CATALOGUE, PATH_MODES, PathSpec, generate
from .envelope import EnvelopeSpec, build_envelope, envelope_region
from .colors import OKABE_ITO, blend, gradient_colour, parse_colour, to_hex
from .data import (
    Category,
    Dataset,
    MappingSpec,
    bind_gene_data,
    data_driven_path,
    parse_dataset,
    serialize_dataset,
)
from .gene import (
    FilterSpec,
    Gene,
    Rng,
    gene_rng,
    hash_name,
    parse_gene,
    seeded_rng,
    serialize_gene,
)
from .marks import MarkSpec, Style, place_marks, scatter_place
from .filters import apply_style, combine, metaball_merge, round_corners, smooth
from .render import (
    RenderOptions,
    Scene,
    Viewport,
    build_scene,
    extract_gene,
    render,
    render_hash,
    to_pixels,
)

__version__ = "0.1.0"

__all__ = [
    "GeniiError", "GeniiWarning", "SchemaError",
    "FlowPath", "Point", "edge_normal", "make_path", "normalize_path", "walk",
    "PATH_CATALOGUE", "PATH_MODES", "PathSpec", "generate",
    "EnvelopeSpec", "build_envelope", "envelope_region",
    "OKABE_ITO", "blend", "gradient_colour", "parse_colour", "to_hex",
    "Category", "Dataset", "MappingSpec", "bind_gene_data", "data_driven_path",
    "parse_dataset", "serialize_dataset",
    "FilterSpec", "Gene", "Rng", "gene_rng", "hash_name", "parse_gene",
    "seeded_rng", "serialize_gene",
    "MarkSpec", "Style", "place_marks", "scatter_place",
    "apply_style", "combine", "metaball_merge", "round_corners", "smooth",
    "RenderOptions", "Scene", "Viewport", "build_scene", "extract_gene",
    "render", "render_hash", "to_pixels",
    "__version__",
]
