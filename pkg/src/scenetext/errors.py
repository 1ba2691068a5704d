"""Exception types shared across the package."""


class SceneTextError(Exception):
    """Base class for all package errors."""


class ImageFormatError(SceneTextError, ValueError):
    """Raised for images with an unsupported shape, dtype or channel count."""


class ConfigError(SceneTextError, ValueError):
    """Raised for invalid detector or OCR configuration."""


class OcrEngineError(SceneTextError, RuntimeError):
    """Raised when the external OCR engine cannot be launched."""


class AnnotationParseError(SceneTextError, ValueError):
    """Raised when an annotation file cannot be parsed."""


class AnnotationValidationError(SceneTextError, ValueError):
    """Raised when an annotation violates its invariants."""


class ManifestError(SceneTextError, ValueError):
    """Raised when a dataset manifest is malformed or lists missing files."""
