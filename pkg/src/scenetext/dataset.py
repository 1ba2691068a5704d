"""Ground-truth annotations, canonical serialization and dataset manifests.

Annotation files are UTF-8 JSON, one per image:

    {
      "imageId": "tabela_012",
      "imageWidth": 1024,
      "imageHeight": 576,
      "boxes": [
        {"x": 10, "y": 20, "w": 100, "h": 30, "transcription": "ÇIKIŞ"}
      ]
    }

The canonical form sorts boxes by (y, x, w, h, transcription), keeps the
key order above, uses two-space indentation without ASCII escaping and
ends with a newline, so identical content always produces identical
bytes regardless of the writer (CLI, server or annotation UI).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Union

from scenetext.detector import TextRegion, sort_reading_order
from scenetext.errors import AnnotationParseError, AnnotationValidationError, ManifestError

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class AnnotationBox:
    """One labeled text box with its UTF-8 transcription."""

    x: int
    y: int
    w: int
    h: int
    transcription: str


@dataclass
class GroundTruthAnnotation:
    """Per-image list of labeled boxes plus the image dimensions."""

    image_id: str
    image_width: int
    image_height: int
    boxes: List[AnnotationBox] = field(default_factory=list)

    def validate(self) -> None:
        if self.image_width < 1 or self.image_height < 1:
            raise AnnotationValidationError(
                f"{self.image_id}: image dimensions must be >= 1"
            )
        for i, box in enumerate(self.boxes):
            if box.w < 1 or box.h < 1:
                raise AnnotationValidationError(
                    f"{self.image_id}: box {i} has empty extent ({box.w}x{box.h})"
                )
            if box.x < 0 or box.y < 0 or box.x + box.w > self.image_width or \
                    box.y + box.h > self.image_height:
                raise AnnotationValidationError(
                    f"{self.image_id}: box {i} ({box.x},{box.y},{box.w},{box.h}) "
                    f"exceeds image bounds {self.image_width}x{self.image_height}"
                )
            try:
                box.transcription.encode("utf-8")
            except UnicodeEncodeError as exc:
                raise AnnotationValidationError(
                    f"{self.image_id}: box {i} transcription is not valid UTF-8: {exc}"
                ) from exc

    def canonical(self) -> "GroundTruthAnnotation":
        """Copy with boxes in canonical order."""
        ordered = sorted(
            self.boxes, key=lambda b: (b.y, b.x, b.w, b.h, b.transcription)
        )
        return replace(self, boxes=ordered)


def annotation_to_dict(ann: GroundTruthAnnotation) -> dict:
    canonical = ann.canonical()
    return {
        "imageId": canonical.image_id,
        "imageWidth": canonical.image_width,
        "imageHeight": canonical.image_height,
        "boxes": [
            {"x": b.x, "y": b.y, "w": b.w, "h": b.h, "transcription": b.transcription}
            for b in canonical.boxes
        ],
    }


def annotation_from_dict(data: dict, source: str = "<memory>") -> GroundTruthAnnotation:
    try:
        boxes = [
            AnnotationBox(
                x=int(b["x"]),
                y=int(b["y"]),
                w=int(b["w"]),
                h=int(b["h"]),
                transcription=str(b["transcription"]),
            )
            for b in data["boxes"]
        ]
        ann = GroundTruthAnnotation(
            image_id=str(data["imageId"]),
            image_width=int(data["imageWidth"]),
            image_height=int(data["imageHeight"]),
            boxes=boxes,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise AnnotationParseError(f"{source}: malformed annotation: {exc}") from exc
    ann.validate()
    return ann


def annotation_to_canonical_bytes(ann: GroundTruthAnnotation) -> bytes:
    text = json.dumps(annotation_to_dict(ann), ensure_ascii=False, indent=2)
    return (text + "\n").encode("utf-8")


def load_annotation(path: Union[str, Path]) -> GroundTruthAnnotation:
    """Parse and validate an annotation file.

    Parse failures report the line/column; bound violations name the box.
    """
    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise AnnotationParseError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return annotation_from_dict(data, source=str(path))


def save_annotation(ann: GroundTruthAnnotation, path: Union[str, Path]) -> None:
    """Validate and write the canonical serialization."""
    ann.validate()
    Path(path).write_bytes(annotation_to_canonical_bytes(ann))


def parse_tsv_annotation(
    text: str, image_id: str, image_width: int, image_height: int
) -> GroundTruthAnnotation:
    """Import the interchange TSV form: ``x y w h<TAB>transcription`` per line."""
    boxes = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            geometry, transcription = line.split("\t", 1)
            x, y, w, h = (int(v) for v in geometry.split())
        except ValueError as exc:
            raise AnnotationParseError(
                f"{image_id}: TSV line {lineno}: expected 'x y w h<TAB>text': {exc}"
            ) from exc
        boxes.append(AnnotationBox(x=x, y=y, w=w, h=h, transcription=transcription))
    ann = GroundTruthAnnotation(image_id, image_width, image_height, boxes)
    ann.validate()
    return ann


def flatten_ground_truth(ann: GroundTruthAnnotation) -> str:
    """Transcriptions in detector reading order, one record per line."""
    regions = [
        TextRegion(x=b.x, y=b.y, w=b.w, h=b.h, scale_index=i) for i, b in enumerate(ann.boxes)
    ]
    ordered = sort_reading_order(regions)
    return "".join(ann.boxes[r.scale_index].transcription + "\n" for r in ordered)


@dataclass(frozen=True)
class ManifestEntry:
    image_file: Path
    annotation_file: Optional[Path] = None

    @property
    def image_id(self) -> str:
        return self.image_file.stem


@dataclass
class DatasetManifest:
    """Image/annotation pairs rooted at a directory."""

    root: Path
    entries: List[ManifestEntry]

    @property
    def count(self) -> int:
        return len(self.entries)

    def validate(self) -> None:
        missing = [
            str(p)
            for entry in self.entries
            for p in (entry.image_file, entry.annotation_file)
            if p is not None and not p.exists()
        ]
        if missing:
            raise ManifestError("manifest lists missing files: " + ", ".join(missing))


def load_manifest(path: Union[str, Path]) -> DatasetManifest:
    """Load a manifest file: ``{"root": ".", "entries": [{"image": ..., "annotation": ...}]}``.

    Paths are resolved relative to the manifest's directory joined with
    ``root``; every listed file must exist.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    base = path.parent / data.get("root", ".")
    try:
        entries = [
            ManifestEntry(
                image_file=base / e["image"],
                annotation_file=(base / e["annotation"]) if e.get("annotation") else None,
            )
            for e in data["entries"]
        ]
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"{path}: malformed manifest: {exc}") from exc
    manifest = DatasetManifest(root=base, entries=entries)
    manifest.validate()
    return manifest


def scan_dataset(root: Union[str, Path]) -> DatasetManifest:
    """Build a manifest from a directory: images paired with same-stem .json files."""
    root = Path(root)
    if not root.is_dir():
        raise ManifestError(f"dataset root {root} is not a directory")
    entries = []
    for image_file in sorted(p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES):
        annotation = image_file.with_suffix(".json")
        entries.append(
            ManifestEntry(
                image_file=image_file,
                annotation_file=annotation if annotation.exists() else None,
            )
        )
    return DatasetManifest(root=root, entries=entries)
