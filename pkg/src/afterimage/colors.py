"""Arithmetic on normalized RGB colors.

Every color is a triple of components in [0, 1], stored as exact
rationals. Exactness is load-bearing: it makes opposite() a true
involution, keeps every convex combination exactly inside the cube, and
lets the model reproduce published decimal values with zero error,
none of which hold in bare double precision (1 - (1 - 0.1) != 0.1 as
floats). Components quantize to 8-bit channels only when an image is
rasterized (see `render`).

Construction accepts ints, floats, decimal strings, and Fractions. A
float means its exact binary value; a string like "0.76" means the
exact decimal 19/25.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

WHITENESS_TOLERANCE = 1e-6

ComponentLike = Fraction | float | int | str


def _as_component(name: str, value: ComponentLike) -> Fraction:
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"component {name} must be a finite number, got {value!r}")
        return Fraction(value)
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"component {name}={value!r} is not a number") from None
    raise ValueError(f"component {name} must be a number, got {value!r}")


@dataclass(frozen=True)
class Rgb:
    """A normalized RGB color with components in [0, 1]."""

    r: Fraction
    g: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        for name in ("r", "g", "b"):
            value = _as_component(name, getattr(self, name))
            if not 0 <= value <= 1:
                raise ValueError(f"component {name}={value} outside [0, 1]")
            object.__setattr__(self, name, value)

    def components(self) -> tuple[float, float, float]:
        """The triple as floats, for rendering and wire formats."""
        return (float(self.r), float(self.g), float(self.b))

    def exact_components(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.r, self.g, self.b)

    def __iter__(self):
        return iter(self.components())

    def __repr__(self) -> str:
        return f"Rgb({float(self.r):g}, {float(self.g):g}, {float(self.b):g})"


class NamedColor(Enum):
    """The eight distinctive colors used throughout the model."""

    RED = (1, 0, 0)
    GREEN = (0, 1, 0)
    BLUE = (0, 0, 1)
    CYAN = (0, 1, 1)
    MAGENTA = (1, 0, 1)
    YELLOW = (1, 1, 0)
    WHITE = (1, 1, 1)
    BLACK = (0, 0, 0)

    @property
    def rgb(self) -> Rgb:
        return Rgb(*self.value)


class InducingClass(Enum):
    """Classification of an inducing-field color as white or chromatic."""

    WHITE = "white"
    CHROMATIC = "chromatic"


def opposite(c: Rgb) -> Rgb:
    """Componentwise opposite color 1 - c. Exactly involutive."""
    return Rgb(1 - c.r, 1 - c.g, 1 - c.b)


def scale(c: Rgb, k: ComponentLike) -> Rgb:
    """Multiply each component by k >= 0, clamping the result to [0, 1]."""
    factor = _as_component("k", k)
    if factor < 0:
        raise ValueError(f"scale factor must be >= 0, got {k!r}")
    return clamp(factor * c.r, factor * c.g, factor * c.b)


def mix(c1: Rgb, c2: Rgb, w: ComponentLike) -> Rgb:
    """Convex combination w*c1 + (1-w)*c2 with weight w in [0, 1]."""
    weight = _as_component("w", w)
    if not 0 <= weight <= 1:
        raise ValueError(f"mixing weight must be in [0, 1], got {w!r}")
    u = 1 - weight
    return Rgb(
        weight * c1.r + u * c2.r,
        weight * c1.g + u * c2.g,
        weight * c1.b + u * c2.b,
    )


def clamp(r: ComponentLike, g: ComponentLike, b: ComponentLike) -> Rgb:
    """Build an Rgb from raw components, clamping each to [0, 1]."""
    one = Fraction(1)
    zero = Fraction(0)
    return Rgb(
        min(one, max(zero, _as_component("r", r))),
        min(one, max(zero, _as_component("g", g))),
        min(one, max(zero, _as_component("b", b))),
    )


def classify_inducing(c: Rgb, tol: float = WHITENESS_TOLERANCE) -> InducingClass:
    """Classify an inducing-field color.

    White iff every component is >= 1 - tol, evaluated in double
    precision (whiteness is a perceptual tolerance, not algebra);
    anything else, including black and grays, counts as chromatic (the
    model defines only the white/chromatic dichotomy).
    """
    if tol < 0:
        raise ValueError(f"tolerance must be >= 0, got {tol!r}")
    threshold = 1.0 - tol
    return (
        InducingClass.WHITE
        if all(component >= threshold for component in c.components())
        else InducingClass.CHROMATIC
    )


def parse_color(text: str) -> Rgb:
    """Parse a color literal: one of the eight names or an 'r,g,b' triple.

    Names are case-insensitive. Triple components must each lie in
    [0, 1]; decimal components are carried exactly ("0.76" means 19/25).
    """
    token = text.strip()
    try:
        return NamedColor[token.upper()].rgb
    except KeyError:
        pass
    parts = token.split(",")
    if len(parts) != 3:
        raise ValueError(
            f"cannot parse color {text!r}: expected a name "
            f"({', '.join(n.name.lower() for n in NamedColor)}) or 'r,g,b'"
        )
    try:
        return Rgb(*(part.strip() for part in parts))
    except ValueError as exc:
        raise ValueError(f"cannot parse color {text!r}: {exc}") from None


def color_name(c: Rgb) -> str | None:
    """Name of c if it is exactly one of the eight named colors, else None."""
    for named in NamedColor:
        if named.rgb == c:
            return named.name.lower()
    return None


def format_color(c: Rgb) -> str:
    """Human-readable form: the name when exact, otherwise the triple."""
    name = color_name(c)
    triple = "({:g}, {:g}, {:g})".format(*c.components())
    return f"{name} {triple}" if name else triple
