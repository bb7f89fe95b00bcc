"""Colour parsing, blending and the default colour-blind friendly palette."""

from __future__ import annotations

from .errors import BadColour

__all__ = ["OKABE_ITO", "parse_colour", "to_hex", "blend", "gradient_colour"]

# Okabe & Ito's eight-colour palette, safe for the common colour vision
# deficiencies. Black first so an unstyled gene stays readable.
OKABE_ITO = (
    "#000000",
    "#E69F00",
    "#56B4E9",
    "#009E73",
    "#F0E442",
    "#0072B2",
    "#D55E00",
    "#CC79A7",
)

_NAMED = {
    "black": "#000000",
    "white": "#FFFFFF",
    "red": "#FF0000",
    "green": "#008000",
    "blue": "#0000FF",
    "yellow": "#FFFF00",
    "orange": "#FFA500",
    "purple": "#800080",
    "cyan": "#00FFFF",
    "magenta": "#FF00FF",
    "grey": "#808080",
    "gray": "#808080",
    "lightgrey": "#D3D3D3",
    "lightgray": "#D3D3D3",
    "darkgrey": "#404040",
    "darkgray": "#404040",
    "none": "none",
}


def parse_colour(value: str) -> tuple[int, int, int, int]:
    """Parse ``#rgb``, ``#rrggbb``, ``#rrggbbaa`` or a small named set to RGBA."""
    if not isinstance(value, str) or not value:
        raise BadColour(f"not a colour: {value!r}")
    s = value.strip()
    lowered = s.lower()
    if lowered in _NAMED:
        if lowered == "none":
            return (0, 0, 0, 0)
        s = _NAMED[lowered]
    if not s.startswith("#"):
        raise BadColour(f"unrecognised colour {value!r}")
    hexpart = s[1:]
    if len(hexpart) == 3:
        hexpart = "".join(ch * 2 for ch in hexpart)
    if len(hexpart) == 6:
        hexpart += "FF"
    if len(hexpart) != 8:
        raise BadColour(f"unrecognised colour {value!r}")
    try:
        r = int(hexpart[0:2], 16)
        g = int(hexpart[2:4], 16)
        b = int(hexpart[4:6], 16)
        a = int(hexpart[6:8], 16)
    except ValueError as exc:
        raise BadColour(f"unrecognised colour {value!r}") from exc
    return (r, g, b, a)


def to_hex(rgba: tuple[int, int, int, int]) -> str:
    r, g, b, a = rgba
    if a >= 255:
        return f"#{r:02X}{g:02X}{b:02X}"
    return f"#{r:02X}{g:02X}{b:02X}{a:02X}"


def blend(c0: str, c1: str, t: float) -> str:
    """Linear RGB interpolation between two colours at t in [0, 1]."""
    a = parse_colour(c0)
    b = parse_colour(c1)
    t = 0.0 if t < 0 else 1.0 if t > 1 else t
    mixed = tuple(round(a[i] + (b[i] - a[i]) * t) for i in range(4))
    return to_hex(mixed)  # type: ignore[arg-type]


def gradient_colour(stops: tuple[tuple[float, str], ...], t: float) -> str:
    """Sample a piecewise-linear gradient (offset, colour) at position t."""
    if not stops:
        raise BadColour("gradient has no stops")
    pts = sorted(stops, key=lambda s: s[0])
    if t <= pts[0][0]:
        return to_hex(parse_colour(pts[0][1]))
    if t >= pts[-1][0]:
        return to_hex(parse_colour(pts[-1][1]))
    for (o0, c0), (o1, c1) in zip(pts, pts[1:]):
        if o0 <= t <= o1:
            span = o1 - o0
            local = 0.0 if span <= 0 else (t - o0) / span
            return blend(c0, c1, local)
    return to_hex(parse_colour(pts[-1][1]))
