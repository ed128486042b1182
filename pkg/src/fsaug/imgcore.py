"""Image buffers, region geometry and raster I/O.

An ImageBuffer is an 8-bit, row-major, channel-interleaved raster with 1
(grayscale) or 3 (RGB) channels. PNG and baseline JPEG are the only input
codecs; PNG is the only output codec so round-trips are lossless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from ._backend import kernels
from .errors import BoundsError, DecodeError, IoError

Image.MAX_IMAGE_PIXELS = None


class ImageBuffer:
    """8-bit raster; `pixels` is a (height, width, channels) uint8 array."""

    __slots__ = ("pixels",)

    def __init__(self, pixels: np.ndarray):
        pixels = np.asarray(pixels, dtype=np.uint8)
        if pixels.ndim == 2:
            pixels = pixels[:, :, None]
        if pixels.ndim != 3 or pixels.shape[2] not in (1, 3):
            raise ValueError("pixels must be (h, w, c) with c in {1, 3}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        pixels = np.ascontiguousarray(pixels)
        if not pixels.flags.writeable:  # e.g. zero-copy views of decoder buffers
            pixels = pixels.copy()
        self.pixels = pixels

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def data(self) -> np.ndarray:
        """Flat row-major, channel-interleaved sample vector."""
        return self.pixels.reshape(-1)

    def copy(self) -> "ImageBuffer":
        return ImageBuffer(self.pixels.copy())

    def __eq__(self, other) -> bool:
        return isinstance(other, ImageBuffer) and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"ImageBuffer({self.width}x{self.height}x{self.channels})"


@dataclass(frozen=True)
class RegionBox:
    """Half-open pixel box: [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    def validate(self, img_w: int, img_h: int) -> None:
        if not (0 <= self.x0 < self.x1 <= img_w and 0 <= self.y0 < self.y1 <= img_h):
            raise BoundsError(f"box {self} out of bounds for {img_w}x{img_h} image")


def load_image(path) -> ImageBuffer:
    """Decode a PNG/JPEG file. Alpha is composited over black; grayscale
    sources give channels=1, everything else channels=3."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise IoError(str(e)) from e
    import io

    try:
        img = Image.open(io.BytesIO(raw))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise DecodeError(f"{path}: {e}") from e

    if img.mode == "LA":
        arr = np.asarray(img, dtype=np.float64)
        alpha = arr[:, :, 1:2] / 255.0
        return ImageBuffer(np.floor(arr[:, :, :1] * alpha + 0.5).astype(np.uint8))
    if img.mode in ("RGBA", "PA") or (img.mode == "P" and "transparency" in img.info):
        arr = np.asarray(img.convert("RGBA"), dtype=np.float64)
        alpha = arr[:, :, 3:4] / 255.0
        return ImageBuffer(np.floor(arr[:, :, :3] * alpha + 0.5).astype(np.uint8))
    if img.mode in ("L", "1", "I", "I;16"):
        return ImageBuffer(np.asarray(img.convert("L"), dtype=np.uint8))
    return ImageBuffer(np.asarray(img.convert("RGB"), dtype=np.uint8))


def save_image(img: ImageBuffer, path) -> None:
    """Write losslessly as PNG."""
    arr = img.pixels[:, :, 0] if img.channels == 1 else img.pixels
    try:
        Image.fromarray(arr, mode="L" if img.channels == 1 else "RGB").save(path, format="PNG")
    except OSError as e:
        raise IoError(str(e)) from e


def to_grayscale(img: ImageBuffer) -> ImageBuffer:
    """ITU-R 601 luma: round(0.299 R + 0.587 G + 0.114 B)."""
    if img.channels == 1:
        return img
    p = img.pixels.astype(np.float64)
    luma = 0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2]
    return ImageBuffer(np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8))


def resize_bilinear(img: ImageBuffer, w: int, h: int) -> ImageBuffer:
    """Half-pixel-centered bilinear resample, edge-clamped."""
    if w < 1 or h < 1:
        raise ValueError("target dimensions must be >= 1")
    if w == img.width and h == img.height:
        return img.copy()
    return ImageBuffer(kernels.resize_bilinear_u8(img.pixels, w, h))


def crop(img: ImageBuffer, box: RegionBox) -> ImageBuffer:
    box.validate(img.width, img.height)
    return ImageBuffer(img.pixels[box.y0 : box.y1, box.x0 : box.x1].copy())


def paste(img: ImageBuffer, box: RegionBox, patch: ImageBuffer) -> ImageBuffer:
    box.validate(img.width, img.height)
    if patch.width != box.width or patch.height != box.height:
        raise BoundsError("patch dimensions do not match the box")
    if patch.channels != img.channels:
        raise BoundsError("patch channel count does not match the image")
    out = img.pixels.copy()
    out[box.y0 : box.y1, box.x0 : box.x1] = patch.pixels
    return ImageBuffer(out)
