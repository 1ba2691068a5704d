"""8-bit raster images and the PNG/JPEG codec boundary."""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image as PILImage

from scenetext.errors import ImageFormatError

# Standard-definition luma weights for RGB -> grayscale.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class RasterImage:
    """In-memory 8-bit image with one (grayscale) or three (RGB) channels.

    Pixels are stored row-major in a NumPy array of shape ``(height, width)``
    or ``(height, width, 3)``, dtype ``uint8``.
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels: np.ndarray):
        arr = np.asarray(pixels)
        if arr.dtype != np.uint8:
            raise ImageFormatError(f"pixels must be uint8, got {arr.dtype}")
        if arr.ndim == 2:
            pass
        elif arr.ndim == 3 and arr.shape[2] == 3:
            pass
        else:
            raise ImageFormatError(
                f"expected shape (h, w) or (h, w, 3), got {arr.shape}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ImageFormatError(f"image dimensions must be >= 1, got {arr.shape}")
        self.pixels = np.ascontiguousarray(arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3

    def __repr__(self) -> str:
        return f"RasterImage({self.width}x{self.height}, {self.channels}ch)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def copy(self) -> "RasterImage":
        return RasterImage(self.pixels.copy())

    def crop(self, x: int, y: int, w: int, h: int) -> "RasterImage":
        """Return the sub-image at (x, y, w, h), clipped to the image bounds."""
        x0 = max(0, x)
        y0 = max(0, y)
        x1 = min(self.width, x + w)
        y1 = min(self.height, y + h)
        if x1 <= x0 or y1 <= y0:
            raise ImageFormatError(f"crop ({x},{y},{w},{h}) lies outside the image")
        return RasterImage(self.pixels[y0:y1, x0:x1].copy())


def load_image(path: Union[str, Path]) -> RasterImage:
    """Decode a PNG or JPEG file into a RasterImage.

    Grayscale files stay single-channel; everything else is converted to RGB.
    """
    with PILImage.open(path) as im:
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.uint8)
        else:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    return RasterImage(arr)


def save_image(img: RasterImage, path: Union[str, Path]) -> None:
    """Encode a RasterImage as PNG or JPEG, chosen by the file extension."""
    PILImage.fromarray(img.pixels).save(path)


def to_grayscale(img: RasterImage) -> RasterImage:
    """Convert an RGB image to grayscale with fixed 0.299/0.587/0.114 luma weights.

    Rounds half away from zero, so equal channels map to themselves exactly.
    """
    if img.channels != 3:
        raise ImageFormatError("to_grayscale expects a 3-channel image")
    rgb = img.pixels.astype(np.float64)
    luma = (
        LUMA_WEIGHTS[0] * rgb[:, :, 0]
        + LUMA_WEIGHTS[1] * rgb[:, :, 1]
        + LUMA_WEIGHTS[2] * rgb[:, :, 2]
    )
    return RasterImage(np.floor(luma + 0.5).astype(np.uint8))
