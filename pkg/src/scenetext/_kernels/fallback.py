"""NumPy implementations of the hot kernels.

This backend is used whenever the compiled extension is unavailable. Both
backends implement the same contracts and must produce bit-identical
output; the cross-backend tests assert that on random inputs.

Conventions shared with the compiled core:
  - border policy is edge replication, realized as windows clamped to the
    image bounds (equivalent for min/max filters);
  - a rectangular structuring element of width k spans ``(k-1)//2`` pixels
    to the left and ``k//2`` to the right of the anchor for dilation, and
    the mirrored extents for erosion, so closing is extensive and
    idempotent for even kernel sizes too;
  - component labels are dense 1..K, numbered by first appearance in
    row-major scan order.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

BACKEND_NAME = "numpy"

# tan(22.5 degrees); sector boundary for non-maximum suppression.
_TAN_22_5 = 0.4142135623730951


def sobel_gx(gray: np.ndarray) -> np.ndarray:
    """Absolute horizontal Sobel response (aperture 3), saturated to [0, 255]."""
    p = np.pad(gray, 1, mode="edge").astype(np.int32)
    gx = (p[:-2, 2:] + 2 * p[1:-1, 2:] + p[2:, 2:]) - (
        p[:-2, :-2] + 2 * p[1:-1, :-2] + p[2:, :-2]
    )
    return np.minimum(np.abs(gx), 255).astype(np.uint8)


def sobel_pair(gray: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Signed horizontal and vertical Sobel responses as int16."""
    p = np.pad(gray, 1, mode="edge").astype(np.int32)
    gx = (p[:-2, 2:] + 2 * p[1:-1, 2:] + p[2:, 2:]) - (
        p[:-2, :-2] + 2 * p[1:-1, :-2] + p[2:, :-2]
    )
    gy = (p[2:, :-2] + 2 * p[2:, 1:-1] + p[2:, 2:]) - (
        p[:-2, :-2] + 2 * p[:-2, 1:-1] + p[:-2, 2:]
    )
    return gx.astype(np.int16), gy.astype(np.int16)


def morph_gradient_gx(gray: np.ndarray) -> np.ndarray:
    """Horizontal morphological gradient: 3x1 dilation minus 3x1 erosion."""
    p = np.pad(gray, ((0, 0), (1, 1)), mode="edge")
    mx = np.maximum(np.maximum(p[:, :-2], p[:, 1:-1]), p[:, 2:])
    mn = np.minimum(np.minimum(p[:, :-2], p[:, 1:-1]), p[:, 2:])
    return mx - mn


def _window_counts(
    arr: np.ndarray, left: int, right: int, axis: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Count nonzero entries in the clamped window [i-left, i+right] per position.

    Returns (counts, window_sizes); sizes shrink near the borders where the
    window is clamped.
    """
    moved = np.moveaxis(arr, axis, -1)
    n = moved.shape[-1]
    prefix = np.zeros(moved.shape[:-1] + (n + 1,), dtype=np.int32)
    np.cumsum(moved, axis=-1, dtype=np.int32, out=prefix[..., 1:])
    idx = np.arange(n)
    hi = np.minimum(idx + right, n - 1) + 1
    lo = np.maximum(idx - left, 0)
    counts = prefix[..., hi] - prefix[..., lo]
    return np.moveaxis(counts, -1, axis), np.moveaxis(
        np.broadcast_to(hi - lo, moved.shape).copy(), -1, axis
    )


def binary_dilate(mask: np.ndarray, kw: int, kh: int) -> np.ndarray:
    """Binary dilation with a kw x kh rectangle (uint8 0/1 in, uint8 0/1 out)."""
    lx, rx = (kw - 1) // 2, kw // 2
    ty, by = (kh - 1) // 2, kh // 2
    counts, _ = _window_counts(mask, lx, rx, axis=1)
    step = (counts > 0).astype(np.uint8)
    counts, _ = _window_counts(step, ty, by, axis=0)
    return (counts > 0).astype(np.uint8)


def binary_erode(mask: np.ndarray, kw: int, kh: int) -> np.ndarray:
    """Binary erosion with the mirrored kw x kh rectangle."""
    lx, rx = kw // 2, (kw - 1) // 2
    ty, by = kh // 2, (kh - 1) // 2
    counts, sizes = _window_counts(mask, lx, rx, axis=1)
    step = (counts == sizes).astype(np.uint8)
    counts, sizes = _window_counts(step, ty, by, axis=0)
    return (counts == sizes).astype(np.uint8)


def _runs(mask: np.ndarray):
    """Foreground runs per row as (row, start, end) with end exclusive."""
    h, w = mask.shape
    padded = np.zeros((h, w + 2), dtype=np.int8)
    padded[:, 1:-1] = mask
    diff = np.diff(padded, axis=1)
    start_rows, start_cols = np.nonzero(diff == 1)
    end_rows, end_cols = np.nonzero(diff == -1)
    # diff pairs starts and ends one-to-one within each row
    return start_rows, start_cols, end_cols


def label_components(mask: np.ndarray) -> Tuple[np.ndarray, int, np.ndarray]:
    """8-connected component labeling with per-component stats.

    Returns ``(labels, count, stats)`` where labels is int32 with 0 for
    background and stats is an int64 array of shape (count, 5) holding
    (area, min_x, min_y, max_x, max_y) per label, ordered by label.
    """
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    rows, starts, ends = _runs(mask)
    n_runs = len(rows)
    if n_runs == 0:
        return labels, 0, np.zeros((0, 5), dtype=np.int64)

    parent = np.arange(n_runs, dtype=np.int64)

    def find(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    # runs are emitted in raster order; link 8-adjacent runs on consecutive rows
    row_begin = np.searchsorted(rows, np.arange(h + 1))
    for y in range(1, h):
        cur = range(row_begin[y], row_begin[y + 1])
        prev_lo, prev_hi = row_begin[y - 1], row_begin[y]
        if prev_lo == prev_hi:
            continue
        j = prev_lo
        for i in cur:
            s, e = starts[i], ends[i]
            while j < prev_hi and ends[j] < s:  # prev run ends left of 8-reach
                j += 1
            k = j
            while k < prev_hi and starts[k] <= e:  # prev run starts within 8-reach
                union(i, k)
                k += 1
            if k > j:
                j = k - 1  # last overlapping run may also touch the next current run

    # dense labels by first appearance in raster order
    run_label = np.zeros(n_runs, dtype=np.int32)
    root_to_label = {}
    stats = []
    for i in range(n_runs):
        root = find(i)
        lbl = root_to_label.get(root)
        if lbl is None:
            lbl = len(stats) + 1
            root_to_label[root] = lbl
            stats.append([0, w, h, -1, -1])
        run_label[i] = lbl
        st = stats[lbl - 1]
        s, e, y = int(starts[i]), int(ends[i]), int(rows[i])
        st[0] += e - s
        if s < st[1]:
            st[1] = s
        if y < st[2]:
            st[2] = y
        if e - 1 > st[3]:
            st[3] = e - 1
        if y > st[4]:
            st[4] = y

    for i in range(n_runs):
        labels[rows[i], starts[i] : ends[i]] = run_label[i]
    return labels, len(stats), np.asarray(stats, dtype=np.int64)


def canny_nms(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Non-maximum suppression of the L1 gradient magnitude.

    Returns the magnitude where the pixel is a local maximum along the
    quantized gradient direction and zero elsewhere. Out-of-bounds
    neighbors count as zero. Ties keep the pixel against its leading
    neighbor (>=) and drop it against the trailing one (>).
    """
    gx32 = gx.astype(np.int32)
    gy32 = gy.astype(np.int32)
    adx = np.abs(gx32)
    ady = np.abs(gy32)
    mag = adx + ady

    p = np.pad(mag, 1, mode="constant")
    west, east = p[1:-1, :-2], p[1:-1, 2:]
    north, south = p[:-2, 1:-1], p[2:, 1:-1]
    nw, se = p[:-2, :-2], p[2:, 2:]
    ne, sw = p[:-2, 2:], p[2:, :-2]

    horizontal = ady <= _TAN_22_5 * adx
    vertical = ~horizontal & (adx <= _TAN_22_5 * ady)
    diagonal = ~horizontal & ~vertical
    same_sign = (gx32 > 0) == (gy32 > 0)
    diag_main = diagonal & same_sign
    diag_anti = diagonal & ~same_sign

    keep = np.zeros(mag.shape, dtype=bool)
    keep |= horizontal & (mag >= west) & (mag > east)
    keep |= vertical & (mag >= north) & (mag > south)
    keep |= diag_main & (mag >= nw) & (mag > se)
    keep |= diag_anti & (mag >= ne) & (mag > sw)
    return np.where(keep, mag, 0).astype(np.int32)


def resize_bilinear(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resampling with pixel-center alignment and edge clamping.

    Output values are rounded half away from zero. The arithmetic mirrors
    the compiled kernel operation-for-operation so both backends produce
    identical bytes.
    """
    h, w = img.shape[:2]
    sx = w / out_w
    sy = h / out_h
    xs = np.clip((np.arange(out_w) + 0.5) * sx - 0.5, 0.0, w - 1.0)
    ys = np.clip((np.arange(out_h) + 0.5) * sy - 0.5, 0.0, h - 1.0)
    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xs - x0
    fy = ys - y0

    if img.ndim == 2:
        planes = img[:, :, np.newaxis]
    else:
        planes = img
    p00 = planes[y0[:, None], x0[None, :], :].astype(np.float64)
    p01 = planes[y0[:, None], x1[None, :], :].astype(np.float64)
    p10 = planes[y1[:, None], x0[None, :], :].astype(np.float64)
    p11 = planes[y1[:, None], x1[None, :], :].astype(np.float64)
    wx = fx[None, :, None]
    wy = fy[:, None, None]
    value = (
        p00 * (1.0 - wx) * (1.0 - wy)
        + p01 * wx * (1.0 - wy)
        + p10 * (1.0 - wx) * wy
        + p11 * wx * wy
    )
    out = np.floor(value + 0.5)
    out = np.clip(out, 0.0, 255.0).astype(np.uint8)
    return out[:, :, 0] if img.ndim == 2 else out
