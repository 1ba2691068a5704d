#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the NumPy fallback.

Times the individual hot kernels and the full multi-scale detection on a
synthetic 1024x576 scene (or a user-supplied image). Run after building
the extension:

    python benchmarks/compare_backends.py
    python benchmarks/compare_backends.py --image path/to/photo.jpg --reps 10
"""

import argparse
import time

import numpy as np

from scenetext import _kernels, imgproc
from scenetext.detector import DetectorConfig, detect
from scenetext.image import RasterImage, load_image


def synthetic_scene(width: int, height: int) -> RasterImage:
    rng = np.random.default_rng(7)
    arr = np.full((height, width, 3), 236, np.uint8)
    for y, h in ((60, 30), (180, 55), (340, 42), (470, 26)):
        x = int(rng.integers(40, 200))
        stroke = max(2, round(0.16 * h))
        char_w = max(2 * stroke + 2, round(0.5 * h))
        for i in range(int(rng.integers(4, 8))):
            cx = x + i * (char_w + max(2, round(0.1 * h)))
            arr[y : y + h, cx : cx + stroke] = 25
            arr[y : y + h, cx + char_w - stroke : cx + char_w] = 25
            arr[y : y + stroke, cx : cx + char_w] = 25
    return RasterImage(arr)


def time_call(fn, reps: int) -> float:
    fn()  # warm-up
    start = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - start) * 1000 / reps


def kernel_timings(backend, img: RasterImage, reps: int) -> dict:
    gray_img = imgproc.to_grayscale(img) if img.channels == 3 else img
    gray = gray_img.pixels
    mask = (gray < 128).astype(np.uint8)
    gx, gy = backend.sobel_pair(gray)
    return {
        "sobel_gx": time_call(lambda: backend.sobel_gx(gray), reps),
        "morph_gradient_gx": time_call(lambda: backend.morph_gradient_gx(gray), reps),
        "binary_close_9x3": time_call(
            lambda: backend.binary_erode(backend.binary_dilate(mask, 9, 3), 9, 3), reps
        ),
        "label_components": time_call(lambda: backend.label_components(mask), reps),
        "canny_nms": time_call(lambda: backend.canny_nms(gx, gy), reps),
        "resize_1.4x": time_call(
            lambda: backend.resize_bilinear(
                img.pixels, round(img.width / 1.4), round(img.height / 1.4)
            ),
            reps,
        ),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--image", help="benchmark on this image instead of the synthetic scene")
    parser.add_argument("--width", type=int, default=1024)
    parser.add_argument("--height", type=int, default=576)
    parser.add_argument("--reps", type=int, default=20)
    args = parser.parse_args()

    img = load_image(args.image) if args.image else synthetic_scene(args.width, args.height)
    print(f"input: {img.width}x{img.height}x{img.channels}, reps={args.reps}")

    names = _kernels.available()
    if "compiled" not in names:
        print("compiled kernels not built; benchmarking the fallback only")
    results = {}
    for name in names:
        backend = _kernels.select(name)
        results[name] = kernel_timings(backend, img, args.reps)
        cfg = DetectorConfig()
        results[name]["detect_multi_scale"] = time_call(lambda: detect(img, cfg), max(3, args.reps // 4))
    _kernels.select(None)

    rows = sorted(results[names[0]])
    width = max(len(r) for r in rows) + 2
    header = f"{'kernel'.ljust(width)}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for row in rows:
        line = row.ljust(width) + "".join(f"{results[n][row]:>10.2f}ms" for n in names)
        if len(names) == 2:
            line += f"{results['numpy'][row] / results['compiled'][row]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
