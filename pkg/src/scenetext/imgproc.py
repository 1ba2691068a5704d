"""Low-level image primitives used by the detector.

Gradient images are 2-D uint8 arrays, binary masks are 2-D bool arrays
and label maps carry dense int32 labels (0 = background). All operations
are pure functions; the heavy loops run on the active kernel backend
(compiled or NumPy, see :mod:`scenetext._kernels`).

Border policy for every kernel is edge replication; gradient values
saturate at 255 so they share the 256-bin Otsu histogram domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from scenetext import _kernels
from scenetext.errors import ImageFormatError
from scenetext.image import RasterImage, to_grayscale

__all__ = [
    "LabelMap",
    "ComponentStats",
    "to_grayscale",
    "sobel_gx",
    "morph_gradient_gx",
    "max_channel_gx",
    "otsu_value",
    "otsu_threshold",
    "canny",
    "morph_close",
    "connected_components",
    "downsample",
]

GrayInput = Union[RasterImage, np.ndarray]


@dataclass(frozen=True)
class LabelMap:
    """Dense component labels: 0 background, 1..count components."""

    labels: np.ndarray
    count: int

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]


@dataclass(frozen=True)
class ComponentStats:
    """Area and minimum bounding rectangle of one connected component."""

    label: int
    area: int
    x: int
    y: int
    w: int
    h: int

    @property
    def aspect_ratio(self) -> float:
        return self.w / self.h

    @property
    def extent(self) -> float:
        return self.area / (self.w * self.h)


def _gray_array(img: GrayInput, op: str, min_w: int = 1, min_h: int = 1) -> np.ndarray:
    if isinstance(img, RasterImage):
        if img.channels != 1:
            raise ImageFormatError(f"{op} expects a single-channel image")
        arr = img.pixels
    else:
        arr = np.asarray(img)
        if arr.ndim != 2 or arr.dtype != np.uint8:
            raise ImageFormatError(f"{op} expects a 2-D uint8 array")
    if arr.shape[1] < min_w or arr.shape[0] < min_h:
        raise ImageFormatError(
            f"{op} needs an image of at least {min_w}x{min_h}, got "
            f"{arr.shape[1]}x{arr.shape[0]}"
        )
    return np.ascontiguousarray(arr)


def _rgb_array(img: RasterImage, op: str) -> np.ndarray:
    if not isinstance(img, RasterImage) or img.channels != 3:
        raise ImageFormatError(f"{op} expects a 3-channel RasterImage")
    return img.pixels


def _mask_u8(mask: np.ndarray) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ImageFormatError("binary masks must be 2-D")
    return np.ascontiguousarray(arr.astype(np.uint8))


def sobel_gx(img: GrayInput) -> np.ndarray:
    """Absolute horizontal Sobel response (aperture 3), saturated to [0, 255]."""
    gray = _gray_array(img, "sobel_gx", min_w=3, min_h=3)
    return _kernels.active().sobel_gx(gray)


def morph_gradient_gx(img: GrayInput) -> np.ndarray:
    """Horizontal morphological gradient: 3x1 dilation minus 3x1 erosion."""
    gray = _gray_array(img, "morph_gradient_gx", min_w=3)
    return _kernels.active().morph_gradient_gx(gray)


def max_channel_gx(img: RasterImage, method: str) -> np.ndarray:
    """Per-pixel maximum of the three per-channel horizontal gradients."""
    rgb = _rgb_array(img, "max_channel_gx")
    if method == "sobel":
        op = sobel_gx
    elif method == "morph":
        op = morph_gradient_gx
    else:
        raise ImageFormatError(
            f"max_channel_gx supports sobel or morph, not {method!r}"
        )
    grads = [op(np.ascontiguousarray(rgb[:, :, c])) for c in range(3)]
    return np.maximum(np.maximum(grads[0], grads[1]), grads[2])


def otsu_value(grad: np.ndarray) -> int:
    """Threshold maximizing between-class variance of the 256-bin histogram.

    Thresholds whose low or high class is empty are skipped; among the
    remaining maximizers the smallest threshold wins (near-ties within
    float precision are resolved with exact integer arithmetic). A
    constant image has no valid split and returns the constant value.
    """
    arr = np.asarray(grad)
    if arr.size == 0:
        raise ImageFormatError("otsu needs a nonempty image")
    hist = np.bincount(arr.ravel(), minlength=256).astype(np.int64)
    total = int(arr.size)
    counts_low = np.cumsum(hist)
    sums_low = np.cumsum(hist * np.arange(256, dtype=np.int64))
    total_sum = int(sums_low[-1])

    n0 = counts_low.astype(np.float64)
    n1 = total - n0
    valid = (counts_low > 0) & (counts_low < total)
    if not valid.any():
        return int(np.nonzero(hist)[0][0])

    s0 = sums_low.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        diff = s0 * n1 - (total_sum - s0) * n0
        score = np.where(valid, diff * diff / (n0 * n1), -1.0)
    best = float(score.max())
    # resolve near-ties exactly: score(t) = (S0*N1 - S1*N0)^2 / (N0*N1)
    candidates = np.nonzero(score >= best * (1.0 - 1e-9))[0]
    if len(candidates) == 1:
        return int(candidates[0])

    def exact_key(t: int) -> Tuple[int, int]:
        c0 = int(counts_low[t])
        c1 = total - c0
        a = int(sums_low[t]) * c1 - (total_sum - int(sums_low[t])) * c0
        return a * a, c0 * c1  # value = key[0]/key[1]

    best_t = int(candidates[0])
    bn, bd = exact_key(best_t)
    for t in map(int, candidates[1:]):
        n, d = exact_key(t)
        if n * bd > bn * d:
            best_t, bn, bd = t, n, d
    return best_t


def otsu_threshold(grad: np.ndarray) -> np.ndarray:
    """Binarize a gradient image at the Otsu threshold; foreground is value > t."""
    arr = np.asarray(grad)
    return arr > otsu_value(arr)


def morph_close(mask: np.ndarray, kernel_w: int, kernel_h: int) -> np.ndarray:
    """Binary closing (dilation then erosion) with a kernel_w x kernel_h rectangle."""
    if kernel_w < 1 or kernel_h < 1:
        raise ImageFormatError("closing kernel must be at least 1x1")
    k = _kernels.active()
    m = _mask_u8(mask)
    return k.binary_erode(k.binary_dilate(m, kernel_w, kernel_h), kernel_w, kernel_h).astype(bool)


def connected_components(mask: np.ndarray) -> Tuple[LabelMap, List[ComponentStats]]:
    """8-connected component labeling with one-pass stats.

    Labels are dense 1..K in raster first-appearance order, so labelings
    are comparable across backends and against a flood-fill oracle.
    """
    labels, count, stats = _kernels.active().label_components(_mask_u8(mask))
    out = [
        ComponentStats(
            label=i + 1,
            area=int(row[0]),
            x=int(row[1]),
            y=int(row[2]),
            w=int(row[3] - row[1] + 1),
            h=int(row[4] - row[2] + 1),
        )
        for i, row in enumerate(stats)
    ]
    return LabelMap(labels=labels, count=count), out


def canny(img: GrayInput, low: int = 50, high: int = 200) -> np.ndarray:
    """Canny edges: Sobel aperture 3 (no smoothing), L1 magnitude, NMS, hysteresis.

    A pixel survives hysteresis when its post-NMS magnitude exceeds
    ``low`` and its 8-connected candidate component contains a pixel
    exceeding ``high``.
    """
    gray = _gray_array(img, "canny", min_w=3, min_h=3)
    k = _kernels.active()
    gx, gy = k.sobel_pair(gray)
    nms = k.canny_nms(gx, gy)
    candidates = nms > low
    strong = nms > high
    if not strong.any():
        return np.zeros(gray.shape, dtype=bool)
    labels, count, _ = k.label_components(candidates.astype(np.uint8))
    if count == 0:
        return np.zeros(gray.shape, dtype=bool)
    strong_labels = np.unique(labels[strong])
    strong_labels = strong_labels[strong_labels > 0]
    keep = np.zeros(count + 1, dtype=bool)
    keep[strong_labels] = True
    return keep[labels]


def downsample(img: RasterImage, factor: float) -> RasterImage:
    """Shrink an image by ``factor`` (> 1) with bilinear interpolation.

    Output dimensions are ``round(side / factor)``, rounding half away
    from zero.
    """
    if factor <= 1:
        raise ImageFormatError(f"downsample factor must be > 1, got {factor}")
    out_w = math.floor(img.width / factor + 0.5)
    out_h = math.floor(img.height / factor + 0.5)
    if out_w < 1 or out_h < 1:
        raise ImageFormatError(
            f"downsampling {img.width}x{img.height} by {factor} collapses a dimension"
        )
    return resize(img, out_w, out_h)


def resize(img: RasterImage, out_w: int, out_h: int) -> RasterImage:
    """Bilinear resize to exact output dimensions."""
    if out_w < 1 or out_h < 1:
        raise ImageFormatError("resize dimensions must be >= 1")
    return RasterImage(_kernels.active().resize_bilinear(img.pixels, out_w, out_h))
