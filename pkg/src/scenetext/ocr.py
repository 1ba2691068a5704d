"""Adapter boundary to an external OCR engine.

Recognition stays outside the package: detected regions are cropped,
written to temporary image files and handed to a configurable command
line (Tesseract by default). A deterministic mock engine, addressed as
``mock:<table.json>``, resolves crops through a content-hash lookup
table so the full pipeline is reproducible without external binaries.
"""

from __future__ import annotations

import hashlib
import json
import shlex
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional

from scenetext.detector import TextRegion
from scenetext.errors import ConfigError, OcrEngineError
from scenetext.image import RasterImage, save_image

DEFAULT_ENGINE_COMMAND = "tesseract {image} stdout -l {lang} --psm {psm}"

PAGE_SEGMENTATION_MODES = ("single_block", "single_line", "single_word")

# Tesseract --psm codes for the supported segmentation hints.
_PSM_CODES = {"single_block": "6", "single_line": "7", "single_word": "8"}


@dataclass
class OcrEngineConfig:
    """External engine invocation settings.

    ``engine_command`` is a template whose tokens may contain ``{image}``,
    ``{lang}`` and ``{psm}`` placeholders; recognized text is read from
    stdout. ``mock:<path>`` selects the built-in lookup-table engine.
    """

    engine_command: str = DEFAULT_ENGINE_COMMAND
    language: str = "tur"
    page_segmentation: str = "single_block"
    timeout_ms: int = 10_000
    parallelism: int = 1
    preprocess: Optional[Callable[[RasterImage], RasterImage]] = None

    def validate(self) -> None:
        if self.page_segmentation not in PAGE_SEGMENTATION_MODES:
            raise ConfigError(
                f"page_segmentation must be one of {PAGE_SEGMENTATION_MODES}"
            )
        if self.timeout_ms < 1:
            raise ConfigError("timeout_ms must be >= 1")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")


@dataclass(frozen=True)
class RecognizedRegion:
    """OCR result for one region; ``error`` is set for timeouts/engine failures."""

    region: TextRegion
    text: str
    engine_time_ms: float = 0.0
    error: Optional[str] = None


def crop_hash(crop: RasterImage) -> str:
    """Content hash of a crop's raw pixels; the mock table key."""
    header = f"{crop.width}x{crop.height}x{crop.channels}:".encode("ascii")
    return hashlib.sha256(header + crop.pixels.tobytes()).hexdigest()


def load_mock_table(path: Path) -> Dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        table = json.load(fh)
    if not isinstance(table, dict):
        raise ConfigError(f"mock OCR table {path} must be a JSON object")
    return {str(k): str(v) for k, v in table.items()}


def _run_external(crop: RasterImage, cfg: OcrEngineConfig) -> str:
    tokens = shlex.split(cfg.engine_command)
    if not tokens:
        raise ConfigError("engine_command is empty")
    with tempfile.TemporaryDirectory(prefix="scenetext-ocr-") as tmp:
        image_path = str(Path(tmp) / "crop.png")
        save_image(crop, image_path)
        try:
            args = [
                token.format(
                    image=image_path,
                    lang=cfg.language,
                    psm=_PSM_CODES[cfg.page_segmentation],
                )
                for token in tokens
            ]
        except KeyError as exc:
            raise ConfigError(
                f"unknown placeholder {exc} in engine command {cfg.engine_command!r}"
            ) from None
        try:
            proc = subprocess.run(
                args,
                capture_output=True,
                timeout=cfg.timeout_ms / 1000.0,
            )
        except FileNotFoundError as exc:
            raise OcrEngineError(
                f"cannot launch OCR engine {args[0]!r}: {exc}"
            ) from exc
        if proc.returncode != 0:
            detail = proc.stderr.decode("utf-8", errors="replace").strip()
            raise _EngineFailure(f"engine exited with {proc.returncode}: {detail[:200]}")
        return proc.stdout.decode("utf-8", errors="replace").rstrip("\n")


class _EngineFailure(Exception):
    """Per-region engine failure; recorded on the result, not raised to callers."""


def _recognize_one(
    img: RasterImage, region: TextRegion, cfg: OcrEngineConfig, mock: Optional[Dict[str, str]]
) -> RecognizedRegion:
    start = time.perf_counter()
    crop = img.crop(region.x, region.y, region.w, region.h)
    if cfg.preprocess is not None:
        crop = cfg.preprocess(crop)
    error = None
    if mock is not None:
        text = mock.get(crop_hash(crop), "")
    else:
        try:
            text = _run_external(crop, cfg)
        except subprocess.TimeoutExpired:
            text, error = "", f"timeout after {cfg.timeout_ms} ms"
        except _EngineFailure as exc:
            text, error = "", str(exc)
    elapsed = (time.perf_counter() - start) * 1000.0
    return RecognizedRegion(region=region, text=text, engine_time_ms=elapsed, error=error)


def recognize_regions(
    img: RasterImage, regions: List[TextRegion], cfg: Optional[OcrEngineConfig] = None
) -> List[RecognizedRegion]:
    """Recognize each region crop, preserving the input (reading) order.

    Always returns one result per region; timeouts and nonzero engine
    exits are recorded on the result. A missing engine binary raises
    OcrEngineError naming the command.
    """
    cfg = cfg if cfg is not None else OcrEngineConfig()
    cfg.validate()
    mock: Optional[Dict[str, str]] = None
    if cfg.engine_command.startswith("mock:"):
        mock = load_mock_table(Path(cfg.engine_command[len("mock:"):]))
    if not regions:
        return []
    if cfg.parallelism == 1 or len(regions) == 1:
        return [_recognize_one(img, region, cfg, mock) for region in regions]
    with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
        futures = [pool.submit(_recognize_one, img, region, cfg, mock) for region in regions]
        return [f.result() for f in futures]


def emit_text(results: List[RecognizedRegion]) -> str:
    """One line per region in input order; each record ends with a newline.

    Internal newlines produced by the engine are preserved, so a record
    may span multiple physical lines.
    """
    return "".join(result.text + "\n" for result in results)
