import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from synth import block_text_image
from scenetext import dataset as ds
from scenetext.image import RasterImage, save_image
from scenetext.server import create_app


@pytest.fixture
def dataset_dir(tmp_path, rng):
    root = tmp_path / "dataset"
    root.mkdir()
    for i in range(3):
        if i == 0:
            img, _ = block_text_image(rng, width=320, height=240, n_lines=1, max_height=40)
        else:
            img = RasterImage(np.full((240, 320, 3), 230, np.uint8))
        save_image(img, root / f"img_{i}.png")
    ds.save_annotation(
        ds.GroundTruthAnnotation("img_1", 320, 240, [ds.AnnotationBox(5, 5, 50, 20, "VAR")]),
        root / "img_1.json",
    )
    return root


@pytest.fixture
def client(dataset_dir):
    return TestClient(create_app(dataset_dir))


class TestImages:
    def test_lists_all_entries(self, client):
        entries = client.get("/api/images").json()
        assert [e["id"] for e in entries] == ["img_0", "img_1", "img_2"]
        assert entries[0]["width"] == 320 and entries[0]["height"] == 240
        assert [e["hasAnnotation"] for e in entries] == [False, True, False]

    def test_serves_image_bytes(self, client, dataset_dir):
        response = client.get("/api/images/img_0/file")
        assert response.status_code == 200
        assert response.headers["content-type"] == "image/png"
        assert response.content == (dataset_dir / "img_0.png").read_bytes()

    def test_unknown_id_is_404(self, client):
        assert client.get("/api/images/ghost/file").status_code == 404


class TestAnnotations:
    def payload(self):
        return {
            "imageWidth": 320,
            "imageHeight": 240,
            "boxes": [{"x": 10, "y": 20, "w": 100, "h": 30, "transcription": "ÇIKIŞ"}],
        }

    def test_get_without_file_returns_empty_skeleton(self, client):
        body = client.get("/api/annotations/img_0").json()
        assert body["imageId"] == "img_0"
        assert body["boxes"] == [] and body["version"] == 0
        assert body["imageWidth"] == 320 and body["imageHeight"] == 240

    def test_put_then_get_round_trips(self, client):
        put = client.put("/api/annotations/img_0", json=self.payload())
        assert put.status_code == 200
        assert put.json()["version"] == 1
        body = client.get("/api/annotations/img_0").json()
        assert body["boxes"] == self.payload()["boxes"]
        assert body["version"] == 1

    def test_saved_file_is_canonical_bytes(self, client, dataset_dir):
        client.put("/api/annotations/img_0", json=self.payload())
        expected = ds.annotation_to_canonical_bytes(
            ds.GroundTruthAnnotation(
                "img_0", 320, 240, [ds.AnnotationBox(10, 20, 100, 30, "ÇIKIŞ")]
            )
        )
        assert (dataset_dir / "img_0.json").read_bytes() == expected

    def test_version_counter_increments(self, client):
        assert client.put("/api/annotations/img_0", json=self.payload()).json()["version"] == 1
        assert client.put("/api/annotations/img_0", json=self.payload()).json()["version"] == 2

    def test_invalid_put_is_400_and_leaves_file_untouched(self, client, dataset_dir):
        before = (dataset_dir / "img_1.json").read_bytes()
        bad = self.payload()
        bad["boxes"][0]["x"] = 310  # x + w exceeds imageWidth
        response = client.put("/api/annotations/img_1", json=bad)
        assert response.status_code == 400
        assert "box 0" in response.json()["detail"]
        assert (dataset_dir / "img_1.json").read_bytes() == before

    def test_non_integer_payload_is_rejected(self, client):
        bad = self.payload()
        bad["boxes"][0]["x"] = "ten"
        assert client.put("/api/annotations/img_0", json=bad).status_code == 422


class TestDetectEndpoint:
    def test_returns_regions_for_overlay(self, client):
        body = client.get("/api/detect/img_0").json()
        assert body["imageId"] == "img_0"
        assert len(body["regions"]) >= 1
        assert set(body["regions"][0]) == {"x", "y", "w", "h", "scaleIndex"}

    def test_blank_image_has_no_regions(self, client):
        assert client.get("/api/detect/img_2").json()["regions"] == []
