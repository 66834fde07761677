"""Raster decoding and the image preprocessing chain.

Input images arrive as binary netpbm (P5 grayscale / P6 RGB, maxval 255).
Color frames are skin-segmented in HSV space, the largest connected blob is
cropped out, and the result is grayscaled, resized to 32x32 and normalized
into [0, 1] -- the shape the network consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

GRAY_SIZE = 32


class NetpbmError(ValueError):
    """Base class for netpbm decode failures."""


class MalformedHeaderError(NetpbmError):
    pass


class TruncatedDataError(NetpbmError):
    pass


class UnsupportedMaxvalError(NetpbmError):
    pass


class ChannelCountError(ValueError):
    pass


class EmptyMaskError(ValueError):
    pass


class BoxOutOfBoundsError(ValueError):
    pass


@dataclass(frozen=True)
class RasterImage:
    """8-bit raster, row-major interleaved samples (1 or 3 channels)."""

    width: int
    height: int
    channels: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"bad dimensions {self.width}x{self.height}")
        if self.channels not in (1, 3):
            raise ChannelCountError(f"channels must be 1 or 3, got {self.channels}")
        expect = self.width * self.height * self.channels
        if len(self.pixels) != expect:
            raise ValueError(f"pixel buffer has {len(self.pixels)} bytes, expected {expect}")

    def to_array(self) -> np.ndarray:
        """(height, width, channels) uint8 view of the pixel data."""
        a = np.frombuffer(self.pixels, dtype=np.uint8)
        return a.reshape(self.height, self.width, self.channels)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "RasterImage":
        if a.ndim == 2:
            a = a[:, :, None]
        h, w, c = a.shape
        return cls(w, h, c, np.ascontiguousarray(a, dtype=np.uint8).tobytes())


@dataclass(frozen=True)
class HsvThreshold:
    """Inclusive HSV intervals; the hue interval wraps when h_min > h_max."""

    h_min: float
    h_max: float
    s_min: float
    s_max: float
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (0 <= self.h_min < 360 and 0 <= self.h_max < 360):
            raise ValueError("hue bounds must lie in [0, 360)")
        if self.s_min > self.s_max or self.v_min > self.v_max:
            raise ValueError("saturation/value intervals must be ordered")


# Hue in degrees, saturation/value as fractions.  Covers common skin tones
# under indoor lighting; callers can pass their own threshold everywhere.
DEFAULT_SKIN_THRESHOLD = HsvThreshold(0.0, 50.0, 0.20, 1.0, 0.20, 1.0)


@dataclass
class BinaryMask:
    width: int
    height: int
    bits: np.ndarray  # (height, width) bool

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool).reshape(self.height, self.width)


@dataclass(frozen=True)
class BoundingBox:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError("box extents must be >= 1")


def decode_netpbm(data: bytes) -> RasterImage:
    """Decode a binary P5/P6 stream with maxval 255.

    The header is magic, width, height and maxval separated by whitespace
    runs ('#' comment lines are skipped), followed by exactly one whitespace
    byte and the raster.
    """
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise MalformedHeaderError(f"not a binary netpbm stream (magic {magic!r})")

    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] not in (0x0A, 0x0D):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise MalformedHeaderError(f"expected integer header field, got {token!r}")
        fields.append(int(token))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise MalformedHeaderError("missing whitespace after maxval")
    pos += 1  # exactly one separator byte, then the raster

    width, height, maxval = fields
    if maxval != 255:
        raise UnsupportedMaxvalError(f"maxval {maxval} unsupported (only 255)")
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad dimensions {width}x{height}")

    need = width * height * channels
    raster = data[pos : pos + need]
    if len(raster) < need:
        raise TruncatedDataError(f"raster has {len(raster)} bytes, expected {need}")
    return RasterImage(width, height, channels, raster)


def encode_netpbm(image: RasterImage) -> bytes:
    """Canonical encoding: single-space header, newline, then the raster."""
    magic = b"P5" if image.channels == 1 else b"P6"
    header = b"%s %d %d 255\n" % (magic, image.width, image.height)
    return header + image.pixels


def to_grayscale(image: RasterImage) -> RasterImage:
    """ITU-R 601 luma (0.299/0.587/0.114), rounded half away from zero."""
    if image.channels == 1:
        return image
    rgb = image.to_array().astype(np.float64)
    luma = 0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1] + 0.114 * rgb[:, :, 2]
    gray = np.floor(luma + 0.5).astype(np.uint8)
    return RasterImage(image.width, image.height, 1, gray.tobytes())


def rgb_to_hsv(r: int, g: int, b: int) -> tuple[float, float, float]:
    """Hexcone HSV of one 8-bit RGB sample: h in [0, 360), s and v in [0, 1]."""
    h, s, v = _hsv_planes(np.array([[[r, g, b]]], dtype=np.uint8))
    return float(h[0, 0]), float(s[0, 0]), float(v[0, 0])


def _hsv_planes(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = rgb.astype(np.float64) / 255.0
    r, g, b = c[:, :, 0], c[:, :, 1], c[:, :, 2]
    mx = c.max(axis=2)
    mn = c.min(axis=2)
    delta = mx - mn

    v = mx
    s = np.where(mx > 0, delta / np.where(mx > 0, mx, 1.0), 0.0)

    h = np.zeros_like(mx)
    nz = delta > 0
    red_max = nz & (mx == r)
    grn_max = nz & ~red_max & (mx == g)
    blu_max = nz & ~red_max & ~grn_max
    d = np.where(nz, delta, 1.0)
    h = np.where(red_max, np.mod((g - b) / d, 6.0), h)
    h = np.where(grn_max, (b - r) / d + 2.0, h)
    h = np.where(blu_max, (r - g) / d + 4.0, h)
    h = np.mod(h * 60.0, 360.0)
    return h, s, v


def skin_mask(image: RasterImage, th: HsvThreshold = DEFAULT_SKIN_THRESHOLD) -> BinaryMask:
    """Set a mask bit where the pixel's HSV lies inside all three intervals."""
    if image.channels != 3:
        raise ChannelCountError("skin_mask needs a 3-channel image")
    h, s, v = _hsv_planes(image.to_array())
    if th.h_min <= th.h_max:
        hue_ok = (h >= th.h_min) & (h <= th.h_max)
    else:  # wrapped hue interval, e.g. [330, 30)
        hue_ok = (h >= th.h_min) | (h <= th.h_max)
    bits = hue_ok & (s >= th.s_min) & (s <= th.s_max) & (v >= th.v_min) & (v <= th.v_max)
    return BinaryMask(image.width, image.height, bits)


def largest_component_bbox(mask: BinaryMask) -> BoundingBox:
    """Bounding box of the largest 4-connected component of set bits.

    Ties go to the component whose first pixel comes earliest in row-major
    scan order (scipy labels components in scan order, so the lowest label
    among the maxima wins).
    """
    if not mask.bits.any():
        raise EmptyMaskError("mask has no set bits")
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
    labels, n = ndimage.label(mask.bits, structure=structure)
    sizes = np.bincount(labels.ravel())[1:]  # skip background
    best = int(np.argmax(sizes)) + 1
    ys, xs = np.nonzero(labels == best)
    x0, x1 = int(xs.min()), int(xs.max())
    y0, y1 = int(ys.min()), int(ys.max())
    return BoundingBox(x0, y0, x1 - x0 + 1, y1 - y0 + 1)


def crop(image: RasterImage, box: BoundingBox) -> RasterImage:
    if box.x < 0 or box.y < 0 or box.x + box.w > image.width or box.y + box.h > image.height:
        raise BoxOutOfBoundsError(f"{box} outside {image.width}x{image.height}")
    a = image.to_array()[box.y : box.y + box.h, box.x : box.x + box.w]
    return RasterImage.from_array(a)


def resize_bilinear(image: RasterImage, out_w: int, out_h: int) -> RasterImage:
    """Bilinear resample with half-pixel-center mapping.

    Source coordinate for output index d is (d + 0.5) * in/out - 0.5, clamped
    to the image; samples are rounded half away from zero.
    """
    if out_w < 1 or out_h < 1:
        raise ValueError("target size must be >= 1")
    a = image.to_array().astype(np.float64)

    def axis_coords(n_out, n_in):
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = np.clip(src, 0.0, n_in - 1.0)
        i0 = np.floor(src).astype(int)
        i1 = np.minimum(i0 + 1, n_in - 1)
        frac = src - i0
        return i0, i1, frac

    x0, x1, fx = axis_coords(out_w, image.width)
    y0, y1, fy = axis_coords(out_h, image.height)
    fx = fx[None, :, None]
    fy = fy[:, None, None]

    top = a[y0][:, x0] * (1 - fx) + a[y0][:, x1] * fx
    bot = a[y1][:, x0] * (1 - fx) + a[y1][:, x1] * fx
    out = top * (1 - fy) + bot * fy
    out = np.floor(out + 0.5).astype(np.uint8)
    return RasterImage(out_w, out_h, image.channels, out.tobytes())


def preprocess(image: RasterImage, th: HsvThreshold = DEFAULT_SKIN_THRESHOLD) -> np.ndarray:
    """Full input chain: segment (color only), crop, grayscale, resize, normalize.

    Returns a (32, 32) float64 array with values in [0, 1].  When the skin
    mask comes up empty the whole frame is used; segmentation is best-effort,
    never fatal.
    """
    if image.channels == 3:
        mask = skin_mask(image, th)
        if mask.bits.any():
            image = crop(image, largest_component_bbox(mask))
    gray = to_grayscale(image)
    small = resize_bilinear(gray, GRAY_SIZE, GRAY_SIZE)
    return small.to_array()[:, :, 0].astype(np.float64) / 255.0


def validate_gray32(img: np.ndarray) -> np.ndarray:
    """Check the 32x32 [0,1] contract and return the array as float64."""
    a = np.asarray(img, dtype=np.float64)
    if a.shape != (GRAY_SIZE, GRAY_SIZE):
        raise ValueError(f"expected (32, 32) image, got {a.shape}")
    if not np.isfinite(a).all() or a.min() < 0.0 or a.max() > 1.0:
        raise ValueError("pixel values must be finite and in [0, 1]")
    return a
