"""Annotation service: JSON-over-HTTP API plus static hosting for the web UI.

API contract (consumed by the browser annotation tool):

    GET  /api/images                     -> [{id, imageFile, width, height, hasAnnotation}]
    GET  /api/images/{id}/file           -> image bytes (PNG/JPEG)
    GET  /api/annotations/{id}           -> {imageId, imageWidth, imageHeight, boxes, version}
    PUT  /api/annotations/{id}           -> {version}; 400 + detail on invalid payload
    GET  /api/detect/{id}                -> {imageId, regions: [{x, y, w, h, scaleIndex}]}

Annotations are written in the canonical serialization only; an invalid
PUT leaves the existing file untouched. Concurrent PUTs to one image are
serialized and resolve last-writer-wins; the returned version counter
lets clients detect lost updates.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from PIL import Image as PILImage

from scenetext import dataset as ds
from scenetext import detector
from scenetext.errors import AnnotationValidationError
from scenetext.image import load_image

_MEDIA_TYPES = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg"}


class BoxPayload(BaseModel):
    x: int
    y: int
    w: int
    h: int
    transcription: str


class AnnotationPayload(BaseModel):
    imageWidth: int
    imageHeight: int
    boxes: List[BoxPayload]


def default_frontend_dir() -> Optional[Path]:
    """Built annotation UI shipped alongside the repository, if present."""
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def create_app(
    dataset_root: Path,
    detector_config: Optional[detector.DetectorConfig] = None,
    frontend_dir: Optional[Path] = None,
) -> FastAPI:
    dataset_root = Path(dataset_root)
    if not dataset_root.is_dir():
        raise FileNotFoundError(f"dataset root {dataset_root} is not a directory")
    cfg = detector_config if detector_config is not None else detector.DetectorConfig()
    cfg.validate()

    app = FastAPI(title="scenetext annotation service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    versions: Dict[str, int] = {}
    locks: Dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()
    detect_cache: Dict[str, List[detector.TextRegion]] = {}

    def image_lock(image_id: str) -> threading.Lock:
        with registry_lock:
            return locks.setdefault(image_id, threading.Lock())

    def find_entry(image_id: str) -> ds.ManifestEntry:
        manifest = ds.scan_dataset(dataset_root)
        for entry in manifest.entries:
            if entry.image_id == image_id:
                return entry
        raise HTTPException(status_code=404, detail=f"unknown image id {image_id!r}")

    @app.get("/api/images")
    def list_images() -> List[dict]:
        manifest = ds.scan_dataset(dataset_root)
        out = []
        for entry in manifest.entries:
            with PILImage.open(entry.image_file) as im:
                width, height = im.size
            out.append(
                {
                    "id": entry.image_id,
                    "imageFile": entry.image_file.name,
                    "width": width,
                    "height": height,
                    "hasAnnotation": entry.annotation_file is not None,
                }
            )
        return out

    @app.get("/api/images/{image_id}/file")
    def image_file(image_id: str) -> Response:
        entry = find_entry(image_id)
        media = _MEDIA_TYPES.get(entry.image_file.suffix.lower(), "application/octet-stream")
        return Response(content=entry.image_file.read_bytes(), media_type=media)

    @app.get("/api/annotations/{image_id}")
    def get_annotation(image_id: str) -> dict:
        entry = find_entry(image_id)
        if entry.annotation_file is not None:
            ann = ds.load_annotation(entry.annotation_file)
        else:
            with PILImage.open(entry.image_file) as im:
                width, height = im.size
            ann = ds.GroundTruthAnnotation(image_id, width, height, [])
        body = ds.annotation_to_dict(ann)
        body["version"] = versions.get(image_id, 0)
        return body

    @app.put("/api/annotations/{image_id}")
    def put_annotation(image_id: str, payload: AnnotationPayload) -> dict:
        entry = find_entry(image_id)
        ann = ds.GroundTruthAnnotation(
            image_id=image_id,
            image_width=payload.imageWidth,
            image_height=payload.imageHeight,
            boxes=[
                ds.AnnotationBox(b.x, b.y, b.w, b.h, b.transcription)
                for b in payload.boxes
            ],
        )
        try:
            ann.validate()
        except AnnotationValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        target = entry.annotation_file or entry.image_file.with_suffix(".json")
        with image_lock(image_id):
            ds.save_annotation(ann, target)
            versions[image_id] = versions.get(image_id, 0) + 1
            return {"version": versions[image_id]}

    @app.get("/api/detect/{image_id}")
    def detect_regions(image_id: str) -> dict:
        entry = find_entry(image_id)
        if image_id not in detect_cache:
            detect_cache[image_id] = detector.detect(load_image(entry.image_file), cfg)
        return {
            "imageId": image_id,
            "regions": [
                {"x": r.x, "y": r.y, "w": r.w, "h": r.h, "scaleIndex": r.scale_index}
                for r in detect_cache[image_id]
            ],
        }

    static_dir = frontend_dir if frontend_dir is not None else default_frontend_dir()
    if static_dir is not None and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve_annotate(
    dataset_root: Path,
    port: int = 8787,
    host: str = "127.0.0.1",
    detector_config: Optional[detector.DetectorConfig] = None,
    frontend_dir: Optional[Path] = None,
) -> None:
    """Run the annotation service until interrupted."""
    import uvicorn

    app = create_app(dataset_root, detector_config, frontend_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
