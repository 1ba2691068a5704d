"""Detection overlays for visual inspection."""

from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from scenetext.detector import TextRegion
from scenetext.image import RasterImage

GREEN = (0, 255, 0)


def draw_regions(
    img: RasterImage,
    regions: Sequence[TextRegion],
    color: Tuple[int, int, int] = GREEN,
    thickness: int = 2,
) -> RasterImage:
    """Return a copy of the image with hollow rectangles over the regions."""
    pixels = img.pixels.copy()
    if pixels.ndim == 2:
        pixels = np.repeat(pixels[:, :, np.newaxis], 3, axis=2)
    h, w = pixels.shape[:2]
    fill = np.asarray(color, dtype=np.uint8)
    for region in regions:
        x0 = max(0, region.x)
        y0 = max(0, region.y)
        x1 = min(w, region.x2)
        y1 = min(h, region.y2)
        if x1 <= x0 or y1 <= y0:
            continue
        t = thickness
        pixels[y0 : min(y0 + t, y1), x0:x1] = fill
        pixels[max(y1 - t, y0) : y1, x0:x1] = fill
        pixels[y0:y1, x0 : min(x0 + t, x1)] = fill
        pixels[y0:y1, max(x1 - t, x0) : x1] = fill
    return RasterImage(pixels)
