"""Horizontal text-line detection.

Single-scale pipeline: edge mask -> rectangular closing -> connected
components -> ordered shape-filter cascade -> box expansion. Multi-scale
detection runs the same pipeline over a 1.4x image pyramid (stopping
when a side would drop below 200 px), maps boxes back to original
coordinates and merges contained/overlapping detections.

All functions are pure and deterministic; an optional StageTimer records
per-stage wall-clock without affecting results.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from scenetext import imgproc
from scenetext.errors import ConfigError
from scenetext.image import RasterImage, to_grayscale
from scenetext.imgproc import ComponentStats

EDGE_METHODS = ("sobel", "morph", "canny")
COLOR_MODES = ("gray", "rgb")

STAGES = ("edge", "close", "components", "filter", "pyramid", "merge", "total")

FILTER_TESTS = ("none", "area", "height", "aspect", "extent")


def _round_half_away(v: float) -> int:
    """Round a non-negative value half away from zero."""
    return math.floor(v + 0.5)


@dataclass
class DetectorConfig:
    """Detection tunables; the defaults are the published operating point."""

    edge_method: str = "morph"
    color_mode: str = "rgb"
    multi_scale: bool = True
    close_kernels_single: Dict[str, Tuple[int, int]] = field(
        default_factory=lambda: {"sobel": (17, 5), "canny": (17, 5), "morph": (11, 5)}
    )
    close_kernels_multi: Dict[str, Tuple[int, int]] = field(
        default_factory=lambda: {"sobel": (15, 3), "canny": (15, 3), "morph": (9, 3)}
    )
    min_area_fraction: float = 0.001
    min_height_px: int = 17
    max_height_fraction: float = 0.25
    min_aspect_ratio: float = 1.3
    extent_threshold: float = 0.4
    raw_edge_extent_factor: float = 0.3
    expand_left_factor: float = 0.1
    expand_all_factor: float = 0.05
    pyramid_factor: float = 1.4
    pyramid_min_side: int = 200
    overlap_merge_threshold: float = 0.80

    @property
    def raw_extent_threshold(self) -> float:
        return self.raw_edge_extent_factor * self.extent_threshold

    def close_kernel(self, multi: bool) -> Tuple[int, int]:
        kernels = self.close_kernels_multi if multi else self.close_kernels_single
        return kernels[self.edge_method]

    def validate(self) -> None:
        if self.edge_method not in EDGE_METHODS:
            raise ConfigError(f"edge_method must be one of {EDGE_METHODS}")
        if self.color_mode not in COLOR_MODES:
            raise ConfigError(f"color_mode must be one of {COLOR_MODES}")
        if self.edge_method == "canny" and self.color_mode == "rgb":
            raise ConfigError(
                "canny edges are computed on grayscale only; use color_mode='gray'"
            )
        for name in ("min_area_fraction", "max_height_fraction", "extent_threshold",
                     "raw_edge_extent_factor", "overlap_merge_threshold"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        for kernels in (self.close_kernels_single, self.close_kernels_multi):
            for method, (kw, kh) in kernels.items():
                if kw < 1 or kh < 1:
                    raise ConfigError(f"closing kernel for {method} must be >= 1x1")
        if self.pyramid_factor <= 1.0:
            raise ConfigError("pyramid_factor must be > 1")
        if self.min_height_px < 1 or self.pyramid_min_side < 1:
            raise ConfigError("pixel thresholds must be >= 1")


@dataclass(frozen=True, order=True)
class TextRegion:
    """Axis-aligned text bounding box in original-image coordinates."""

    x: int
    y: int
    w: int
    h: int
    scale_index: int = 0
    weighted_extent: float = 0.0

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    def contains(self, other: "TextRegion") -> bool:
        """Non-strict geometric containment (equal boxes contain each other)."""
        return (
            self.x <= other.x
            and self.y <= other.y
            and self.x2 >= other.x2
            and self.y2 >= other.y2
        )

    def intersection_area(self, other: "TextRegion") -> int:
        iw = min(self.x2, other.x2) - max(self.x, other.x)
        ih = min(self.y2, other.y2) - max(self.y, other.y)
        return iw * ih if iw > 0 and ih > 0 else 0


@dataclass(frozen=True)
class FilterDecision:
    """Outcome of the shape-filter cascade; rejected_by names the first failure."""

    accepted: bool
    rejected_by: str = "none"


@dataclass(frozen=True)
class PyramidLevel:
    """One pyramid level; scale factors are ratios of actual integer dimensions."""

    index: int
    width: int
    height: int
    scale_x: float
    scale_y: float


class StageTimer:
    """Accumulates per-stage wall-clock milliseconds."""

    def __init__(self) -> None:
        self.ms: Dict[str, float] = {stage: 0.0 for stage in STAGES}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.ms[name] += (time.perf_counter() - start) * 1000.0


def _stage(timer: Optional[StageTimer], name: str):
    return timer.stage(name) if timer is not None else nullcontext()


def compute_edge_mask(img: RasterImage, cfg: DetectorConfig) -> np.ndarray:
    """Edge mask for the configured method/color mode (pre-closing).

    Gradient methods are Otsu-thresholded; canny returns its edge map
    directly. A single-channel image is processed as grayscale even in
    RGB mode.
    """
    cfg.validate()
    use_rgb = cfg.color_mode == "rgb" and img.channels == 3
    if cfg.edge_method == "canny":
        gray = to_grayscale(img) if img.channels == 3 else img
        return imgproc.canny(gray)
    if use_rgb:
        grad = imgproc.max_channel_gx(img, cfg.edge_method)
    else:
        gray = to_grayscale(img) if img.channels == 3 else img
        if cfg.edge_method == "sobel":
            grad = imgproc.sobel_gx(gray)
        else:
            grad = imgproc.morph_gradient_gx(gray)
    return imgproc.otsu_threshold(grad)


def filter_component(
    stats: ComponentStats,
    closed_mask: np.ndarray,
    raw_edge_mask: np.ndarray,
    img_w: int,
    img_h: int,
    cfg: DetectorConfig,
) -> FilterDecision:
    """Apply the ordered area/height/aspect/extent tests to one component.

    The extent test passes when the plain extent or the log(aspect)-
    weighted extent clears the threshold, on both the closed mask
    (component pixels over MBR area) and the raw edge mask (raw
    foreground inside the MBR over MBR area, at the reduced threshold).
    """
    if stats.area < cfg.min_area_fraction * img_w * img_h:
        return FilterDecision(False, "area")
    max_height = cfg.max_height_fraction * min(img_w, img_h)
    if stats.h < cfg.min_height_px or stats.h > max_height:
        return FilterDecision(False, "height")
    ar = stats.aspect_ratio
    if ar < cfg.min_aspect_ratio:
        return FilterDecision(False, "aspect")
    log_ar = math.log(ar)
    extent_closed = stats.extent
    if extent_closed < cfg.extent_threshold and log_ar * extent_closed < cfg.extent_threshold:
        return FilterDecision(False, "extent")
    box = raw_edge_mask[stats.y : stats.y + stats.h, stats.x : stats.x + stats.w]
    extent_raw = float(np.count_nonzero(box)) / (stats.w * stats.h)
    threshold_raw = cfg.raw_extent_threshold
    if extent_raw < threshold_raw and log_ar * extent_raw < threshold_raw:
        return FilterDecision(False, "extent")
    return FilterDecision(True, "none")


def expand_box(region: TextRegion, img_w: int, img_h: int, cfg: DetectorConfig) -> TextRegion:
    """Grow a detection leftward by 0.1x height, then by 0.05x height on all sides.

    Both offsets are computed from the height before expansion, rounded
    half away from zero; the result is clipped to the image.
    """
    left = _round_half_away(cfg.expand_left_factor * region.h)
    x = region.x - left
    w = region.w + left
    pad = _round_half_away(cfg.expand_all_factor * region.h)
    x -= pad
    y = region.y - pad
    w += 2 * pad
    h = region.h + 2 * pad
    x0 = max(0, x)
    y0 = max(0, y)
    x1 = min(img_w, x + w)
    y1 = min(img_h, y + h)
    return replace(region, x=x0, y=y0, w=max(1, x1 - x0), h=max(1, y1 - y0))


def detect_single_scale(
    img: RasterImage,
    cfg: DetectorConfig,
    scale_index: int = 0,
    multi_kernels: Optional[bool] = None,
    timer: Optional[StageTimer] = None,
) -> List[TextRegion]:
    """Run the full single-scale pipeline; coordinates stay in this scale's frame."""
    use_multi = cfg.multi_scale if multi_kernels is None else multi_kernels
    with _stage(timer, "edge"):
        raw_mask = compute_edge_mask(img, cfg)
    kw, kh = cfg.close_kernel(use_multi)
    with _stage(timer, "close"):
        closed = imgproc.morph_close(raw_mask, kw, kh)
    with _stage(timer, "components"):
        _, components = imgproc.connected_components(closed)
    regions: List[TextRegion] = []
    with _stage(timer, "filter"):
        for stats in components:
            decision = filter_component(stats, closed, raw_mask, img.width, img.height, cfg)
            if not decision.accepted:
                continue
            region = TextRegion(
                x=stats.x,
                y=stats.y,
                w=stats.w,
                h=stats.h,
                scale_index=scale_index,
                weighted_extent=math.log(stats.aspect_ratio) * stats.extent,
            )
            regions.append(expand_box(region, img.width, img.height, cfg))
    return regions


def build_pyramid_plan(img_w: int, img_h: int, cfg: DetectorConfig) -> List[PyramidLevel]:
    """Pyramid levels for an image: level 0 is the original; each further level
    divides the previous dimensions by the pyramid factor (rounded) and is kept
    only while min(w, h) >= pyramid_min_side."""
    levels = [PyramidLevel(0, img_w, img_h, 1.0, 1.0)]
    w, h = img_w, img_h
    index = 0
    while True:
        index += 1
        w = _round_half_away(w / cfg.pyramid_factor)
        h = _round_half_away(h / cfg.pyramid_factor)
        if min(w, h) < cfg.pyramid_min_side:
            break
        levels.append(PyramidLevel(index, w, h, img_w / w, img_h / h))
    return levels


def _map_to_original(region: TextRegion, level: PyramidLevel) -> TextRegion:
    x0 = _round_half_away(region.x * level.scale_x)
    y0 = _round_half_away(region.y * level.scale_y)
    x1 = _round_half_away(region.x2 * level.scale_x)
    y1 = _round_half_away(region.y2 * level.scale_y)
    return replace(region, x=x0, y=y0, w=max(1, x1 - x0), h=max(1, y1 - y0))


def detect_multi_scale(
    img: RasterImage, cfg: DetectorConfig, timer: Optional[StageTimer] = None
) -> List[TextRegion]:
    """Detect at every pyramid level and merge the union of detections.

    Thresholds are evaluated in each level's own pixel frame (area
    fraction of the level area, fixed 17 px minimum height); boxes are
    mapped back through the actual integer dimension ratios.
    """
    cfg.validate()
    plan = build_pyramid_plan(img.width, img.height, cfg)
    collected: List[TextRegion] = []
    current = img
    for level in plan:
        if level.index > 0:
            with _stage(timer, "pyramid"):
                current = imgproc.resize(current, level.width, level.height)
        regions = detect_single_scale(
            current, cfg, scale_index=level.index, multi_kernels=True, timer=timer
        )
        if level.index == 0:
            collected.extend(regions)
        else:
            collected.extend(_map_to_original(r, level) for r in regions)
    with _stage(timer, "merge"):
        merged = merge_detections(collected, cfg.overlap_merge_threshold)
    return merged


def detect(
    img: RasterImage, cfg: Optional[DetectorConfig] = None, timer: Optional[StageTimer] = None
) -> List[TextRegion]:
    """Detect text regions with the configured mode (multi-scale by default)."""
    cfg = cfg if cfg is not None else DetectorConfig()
    with _stage(timer, "total"):
        if cfg.multi_scale:
            return detect_multi_scale(img, cfg, timer=timer)
        return detect_single_scale(img, cfg, multi_kernels=False, timer=timer)


def merge_detections(
    regions: List[TextRegion], overlap_threshold: float = 0.80
) -> List[TextRegion]:
    """Drop regions contained in another and the smaller of high-overlap pairs.

    Overlap ratio is intersection area over the smaller region's area.
    Regions are swept in descending area order (ties broken by position),
    so the result is independent of input order.
    """
    order = sorted(regions, key=lambda r: (-r.area, r.y, r.x, r.h, r.w, r.scale_index))
    kept: List[TextRegion] = []
    for region in order:
        drop = False
        for other in kept:
            if other.contains(region):
                drop = True
                break
            inter = other.intersection_area(region)
            if inter and inter / min(other.area, region.area) > overlap_threshold:
                drop = True
                break
        if not drop:
            kept.append(region)
    return kept


def sort_reading_order(regions: List[TextRegion]) -> List[TextRegion]:
    """Order regions top-to-bottom by line, left-to-right within a line.

    Two regions share a line when their vertical overlap is at least half
    the smaller region's height, tested against the line's first (anchor)
    region.
    """
    ordered = sorted(regions, key=lambda r: (r.y, r.x, r.h, r.w))
    lines: List[List[TextRegion]] = []
    for region in ordered:
        for line in lines:
            anchor = line[0]
            overlap = min(anchor.y2, region.y2) - max(anchor.y, region.y)
            if overlap >= 0.5 * min(anchor.h, region.h):
                line.append(region)
                break
        else:
            lines.append([region])
    result: List[TextRegion] = []
    for line in lines:
        result.extend(sorted(line, key=lambda r: (r.x, r.y, r.w, r.h)))
    return result
