"""Real-time scene-text detection toolkit.

Detects horizontal text lines with a gradient/morphology pipeline run
over a multi-scale image pyramid, feeds the crops to an external OCR
engine, and ships an evaluation harness, a benchmark runner and a
dataset annotation service.
"""

from scenetext.image import RasterImage, load_image, save_image
from scenetext.detector import DetectorConfig, TextRegion, detect

__version__ = "0.1.0"

__all__ = [
    "RasterImage",
    "load_image",
    "save_image",
    "DetectorConfig",
    "TextRegion",
    "detect",
    "__version__",
]
