"""Rasterization of stimuli and afterimage panels.

Images are built as real-valued fields in [0, 1], blurred while still
real-valued, and quantized to 8-bit channels as the very last step
(round(255 * c) per channel). No gamma or sRGB transfer is applied:
model arithmetic is in raw normalized RGB, so a pixel's stored value is
the model value scaled to 255. Display gamma therefore affects how the
emitted colors are perceived on screen.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .colors import Rgb
from .model import BaselineScheme, StimulusSpec, complementary_baseline, predict

SUPERSAMPLES = 4  # per axis; 4x4 coverage samples per edge pixel


@dataclass(frozen=True)
class Geometry:
    """Circular test field inside a rectangular inducing field.

    The circle must sit fully inside the rectangle with a margin of at
    least half its radius on every side (small test field, large
    surround).
    """

    width: int = 512
    height: int = 512
    circle_center: tuple[float, float] | None = None
    circle_radius: float = 100.0

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if self.circle_radius <= 0:
            raise ValueError(f"circle radius must be positive, got {self.circle_radius!r}")
        if self.circle_center is None:
            object.__setattr__(self, "circle_center", (self.width / 2.0, self.height / 2.0))
        cx, cy = self.circle_center
        clearance = 1.5 * self.circle_radius  # radius + margin of radius/2
        if min(cx, cy, self.width - cx, self.height - cy) < clearance:
            raise ValueError(
                "circle must lie inside the rectangle with margin >= radius/2: "
                f"center=({cx:g}, {cy:g}) radius={self.circle_radius:g} "
                f"in {self.width}x{self.height}"
            )

    def center_pixel(self) -> tuple[int, int]:
        """(x, y) of the pixel containing the circle center."""
        cx, cy = self.circle_center
        return (min(int(cx), self.width - 1), min(int(cy), self.height - 1))


class RasterImage:
    """8-bit RGB image; rows top to bottom, pixels[y, x] = (r, g, b)."""

    def __init__(self, pixels: np.ndarray):
        pixels = np.asarray(pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.dtype != np.uint8:
            raise ValueError(f"expected (H, W, 3) uint8 array, got {pixels.shape} {pixels.dtype}")
        self.pixels = pixels

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        r, g, b = self.pixels[y, x]
        return (int(r), int(g), int(b))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"RasterImage({self.width}x{self.height})"


@dataclass(frozen=True)
class BlurSettings:
    """Gaussian blur: sigma in pixels, kernel truncated at +-radius pixels."""

    sigma: float = 4.0
    radius: int | None = None

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if self.radius is None:
            object.__setattr__(self, "radius", int(math.ceil(3.0 * self.sigma)))
        if self.radius < 1:
            raise ValueError(f"kernel radius must be >= 1, got {self.radius!r}")

    def kernel(self) -> np.ndarray:
        """1-D kernel with weights summing to 1 (within float rounding)."""
        offsets = np.arange(-self.radius, self.radius + 1, dtype=np.float64)
        weights = np.exp(-(offsets**2) / (2.0 * self.sigma**2))
        return weights / weights.sum()


def quantize(value) -> int:
    """8-bit channel value for a normalized component (float or Fraction)."""
    return int(round(255 * value))


def quantize_color(c: Rgb) -> tuple[int, int, int]:
    return (quantize(c.r), quantize(c.g), quantize(c.b))


def _quantize_field(fld: np.ndarray) -> RasterImage:
    return RasterImage(np.round(255.0 * fld).astype(np.uint8))


def _coverage(g: Geometry) -> np.ndarray:
    """Per-pixel fraction of SUPERSAMPLES^2 sample points inside the circle."""
    cx, cy = g.circle_center
    n = SUPERSAMPLES
    sub = (np.arange(n) + 0.5) / n
    xs = (np.arange(g.width)[:, None] + sub[None, :]).ravel() - cx
    ys = (np.arange(g.height)[:, None] + sub[None, :]).ravel() - cy
    inside = (ys[:, None] ** 2 + xs[None, :] ** 2) <= g.circle_radius**2
    return inside.reshape(g.height, n, g.width, n).mean(axis=(1, 3))


def _stimulus_field(g: Geometry, test: Rgb, inducing: Rgb) -> np.ndarray:
    cov = _coverage(g)[:, :, None]
    test_arr = np.array(test.components(), dtype=np.float64)
    inducing_arr = np.array(inducing.components(), dtype=np.float64)
    return cov * test_arr + (1.0 - cov) * inducing_arr


def _uniform_field(g: Geometry, c: Rgb) -> np.ndarray:
    return np.broadcast_to(
        np.array(c.components(), dtype=np.float64), (g.height, g.width, 3)
    ).copy()


def _blur_field(fld: np.ndarray, settings: BlurSettings) -> np.ndarray:
    """Separable Gaussian convolution with edge-clamp boundary handling."""
    kernel = settings.kernel()
    out = fld
    for axis in (0, 1):
        out = _convolve_axis(out, kernel, axis)
    return out


def _convolve_axis(fld: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    pad = [(0, 0)] * fld.ndim
    pad[axis] = (radius, radius)
    padded = np.pad(fld, pad, mode="edge")
    n = fld.shape[axis]
    out = np.zeros_like(fld)
    index: list[slice] = [slice(None)] * fld.ndim
    for tap, weight in enumerate(kernel):
        index[axis] = slice(tap, tap + n)
        out += weight * padded[tuple(index)]
    return out


def render_stimulus(g: Geometry, test: Rgb, inducing: Rgb) -> RasterImage:
    """Circular test field over a rectangular surround, anti-aliased edge.

    Pixels fully inside the circle carry exactly the quantized test
    color, pixels fully outside exactly the quantized inducing color;
    edge pixels blend by sample coverage.
    """
    return _quantize_field(_stimulus_field(g, test, inducing))


def render_uniform(g: Geometry, c: Rgb) -> RasterImage:
    """Whole rectangle filled with one color."""
    return _quantize_field(_uniform_field(g, c))


def gaussian_blur(img: RasterImage, settings: BlurSettings) -> RasterImage:
    """Blur an already-quantized image (dequantize, convolve, requantize)."""
    fld = img.pixels.astype(np.float64) / 255.0
    return _quantize_field(_blur_field(fld, settings))


def render_afterimage_panel(
    g: Geometry, pred_test: Rgb, pred_inducing: Rgb, settings: BlurSettings
) -> RasterImage:
    """Stimulus-shaped panel in predicted colors, blurred for fuzzy edges.

    The blur runs on the real-valued field, before quantization.
    """
    return _quantize_field(_blur_field(_stimulus_field(g, pred_test, pred_inducing), settings))


@dataclass(frozen=True)
class FigurePanels:
    """The four comparison panels for one stimulus.

    a: original stimulus; b: uniform new color; c: dimmed complementary
    baseline, blurred; d: model prediction, blurred.
    """

    a: RasterImage
    b: RasterImage
    c: RasterImage
    d: RasterImage

    def as_dict(self) -> dict[str, RasterImage]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def render_figure(
    spec: StimulusSpec,
    scheme: BaselineScheme = BaselineScheme.GROUP2,
    g: Geometry = Geometry(),
    settings: BlurSettings = BlurSettings(),
) -> FigurePanels:
    """Render the 4-panel comparison set for one stimulus."""
    c_ct, c_ci = complementary_baseline(spec, scheme)
    prediction = predict(spec)
    return FigurePanels(
        a=render_stimulus(g, spec.c_ot, spec.c_oi),
        b=render_uniform(g, spec.c_n),
        c=render_afterimage_panel(g, c_ct, c_ci, settings),
        d=render_afterimage_panel(g, prediction.c_at, prediction.c_ai, settings),
    )


def encode_png(img: RasterImage) -> bytes:
    """Lossless 8-bit RGB PNG bytes; decodes back to identical pixels."""
    buffer = io.BytesIO()
    Image.fromarray(img.pixels, mode="RGB").save(buffer, format="PNG")
    return buffer.getvalue()


def decode_png(data: bytes) -> RasterImage:
    """Inverse of encode_png."""
    with Image.open(io.BytesIO(data)) as im:
        return RasterImage(np.asarray(im.convert("RGB"), dtype=np.uint8))
