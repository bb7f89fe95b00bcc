"""Exception and warning types shared across the engine.

Every error raised on a user-facing input path derives from :class:`GeniiError`
so callers (CLI, service) can map failures to exit codes / HTTP statuses with a
single except clause. Schema problems carry the offending field path.
"""

from __future__ import annotations

__all__ = [
    "GeniiError",
    "SchemaError",
    "MissingField",
    "UnknownEnumValue",
    "EmptyPath",
    "DegenerateEdge",
    "DegeneratePath",
    "JumpEdge",
    "UnknownMode",
    "BadOrder",
    "MissingPoints",
    "IndexOutOfRange",
    "ZeroRange",
    "MissingDatum",
    "OddPairCount",
    "ShapeUnsupportedOnPath",
    "NonPolygonalInput",
    "BadColour",
    "RadiusTooLarge",
    "GeniiWarning",
]


class GeniiError(Exception):
    """Base class for all engine errors."""


class SchemaError(GeniiError):
    """A document failed validation.

    ``path`` is a dotted location inside the offending document
    (e.g. ``"path.mode"`` or ``"categories[2].range"``).  ``errors`` holds
    every violation found, as (path, message) pairs; validation never stops
    at the first problem so tooling can report all of them at once.
    """

    def __init__(self, path: str, message: str, errors: list[tuple[str, str]] | None = None):
        self.path = path
        self.message = message
        self.errors = errors if errors is not None else [(path, message)]
        super().__init__(f"{path}: {message}" if path else message)


class MissingField(SchemaError):
    pass


class UnknownEnumValue(SchemaError):
    pass


# --- geometry / path -------------------------------------------------------

class EmptyPath(GeniiError):
    pass


class DegenerateEdge(GeniiError):
    pass


class DegeneratePath(GeniiError):
    pass


class JumpEdge(GeniiError):
    pass


class UnknownMode(GeniiError):
    pass


class BadOrder(GeniiError):
    pass


class MissingPoints(GeniiError):
    pass


class IndexOutOfRange(GeniiError):
    pass


# --- data ------------------------------------------------------------------

class ZeroRange(GeniiError):
    pass


class MissingDatum(GeniiError):
    pass


class OddPairCount(GeniiError):
    pass


# --- marks / filters -------------------------------------------------------

class ShapeUnsupportedOnPath(GeniiError):
    pass


class NonPolygonalInput(GeniiError):
    pass


class BadColour(GeniiError):
    pass


class RadiusTooLarge(GeniiError):
    pass


class GeniiWarning(UserWarning):
    """Non-fatal condition (clamped value, ignored datum, sub-pixel mark)."""
