import numpy as np
import pytest

from scenetext.errors import ImageFormatError
from scenetext.image import RasterImage, load_image, save_image, to_grayscale


def test_accepts_grayscale_and_rgb_shapes():
    gray = RasterImage(np.zeros((4, 6), np.uint8))
    assert (gray.width, gray.height, gray.channels) == (6, 4, 1)
    rgb = RasterImage(np.zeros((4, 6, 3), np.uint8))
    assert rgb.channels == 3
    assert rgb.pixels.size == 6 * 4 * 3


@pytest.mark.parametrize(
    "arr",
    [
        np.zeros((4, 6), np.float32),
        np.zeros((4, 6, 2), np.uint8),
        np.zeros((4, 6, 4), np.uint8),
        np.zeros((0, 6), np.uint8),
        np.zeros((4, 0, 3), np.uint8),
    ],
)
def test_rejects_bad_shapes_and_dtypes(arr):
    with pytest.raises(ImageFormatError):
        RasterImage(arr)


def test_crop_clips_and_rejects_outside():
    img = RasterImage(np.arange(24, dtype=np.uint8).reshape(4, 6))
    crop = img.crop(4, 2, 10, 10)
    assert (crop.width, crop.height) == (2, 2)
    with pytest.raises(ImageFormatError):
        img.crop(10, 10, 3, 3)


def test_png_round_trip(tmp_path, rng):
    arr = rng.integers(0, 256, (20, 30, 3), dtype=np.uint8)
    path = tmp_path / "img.png"
    save_image(RasterImage(arr), path)
    loaded = load_image(path)
    assert loaded == RasterImage(arr)


def test_grayscale_png_stays_single_channel(tmp_path, rng):
    arr = rng.integers(0, 256, (20, 30), dtype=np.uint8)
    path = tmp_path / "img.png"
    save_image(RasterImage(arr), path)
    assert load_image(path).channels == 1


def test_jpeg_decodes_to_rgb(tmp_path, rng):
    arr = rng.integers(0, 256, (20, 30, 3), dtype=np.uint8)
    path = tmp_path / "img.jpg"
    save_image(RasterImage(arr), path)
    loaded = load_image(path)
    assert (loaded.width, loaded.height, loaded.channels) == (30, 20, 3)


class TestToGrayscale:
    def test_equal_channels_map_to_themselves(self):
        img = RasterImage(np.full((3, 3, 3), 200, np.uint8))
        assert np.array_equal(to_grayscale(img).pixels, np.full((3, 3), 200))

    def test_black_stays_black(self):
        img = RasterImage(np.zeros((3, 3, 3), np.uint8))
        assert to_grayscale(img).pixels.max() == 0

    def test_primary_channel_golden_values(self):
        # luma weights 0.299/0.587/0.114, rounded half away from zero
        arr = np.zeros((1, 3, 3), np.uint8)
        arr[0, 0] = (255, 0, 0)
        arr[0, 1] = (0, 255, 0)
        arr[0, 2] = (0, 0, 255)
        luma = to_grayscale(RasterImage(arr)).pixels[0]
        assert luma.tolist() == [76, 150, 29]

    def test_rejects_single_channel(self):
        with pytest.raises(ImageFormatError):
            to_grayscale(RasterImage(np.zeros((3, 3), np.uint8)))
