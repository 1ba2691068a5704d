"""Independent brute-force oracles used by the unit and acceptance tests.

These deliberately avoid the production code paths: flood fill instead of
union-find, per-threshold recomputation instead of cumulative histograms,
memoized recursion instead of the DP table, nested loops instead of
vectorized kernels.
"""

from collections import deque
from functools import lru_cache

import numpy as np


def flood_fill_labels(mask):
    """8-connected labeling by BFS, labels dense 1..K in raster discovery order.

    Returns (labels int32, count, stats) with stats rows
    (area, min_x, min_y, max_x, max_y).
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    stats = []
    for sy in range(h):
        for sx in range(w):
            if not mask[sy, sx] or labels[sy, sx]:
                continue
            label = len(stats) + 1
            labels[sy, sx] = label
            queue = deque([(sy, sx)])
            area, min_x, min_y, max_x, max_y = 0, sx, sy, sx, sy
            while queue:
                y, x = queue.popleft()
                area += 1
                min_x, max_x = min(min_x, x), max(max_x, x)
                min_y, max_y = min(min_y, y), max(max_y, y)
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not labels[ny, nx]:
                            labels[ny, nx] = label
                            queue.append((ny, nx))
            stats.append((area, min_x, min_y, max_x, max_y))
    return labels, len(stats), np.asarray(stats, dtype=np.int64).reshape(-1, 5)


def otsu_exact_threshold(values):
    """Exhaustive argmax of between-class variance over all 256 thresholds.

    Computed per threshold from scratch in exact integer arithmetic
    (cross-multiplied rationals); smallest maximizing threshold wins;
    thresholds with an empty class are skipped. Returns the first
    populated bin when no split is valid (constant image).
    """
    hist = np.bincount(np.asarray(values).ravel(), minlength=256)
    total = int(hist.sum())
    best_t = None
    best_num, best_den = -1, 1
    for t in range(256):
        n0 = int(hist[: t + 1].sum())
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        s0 = int(sum(v * int(hist[v]) for v in range(t + 1)))
        s1 = int(sum(v * int(hist[v]) for v in range(t + 1, 256)))
        # sigma_b(t) proportional to (s0*n1 - s1*n0)^2 / (n0*n1)
        num = (s0 * n1 - s1 * n0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_num, best_den, best_t = num, den, t
    if best_t is None:
        return int(np.nonzero(hist)[0][0])
    return best_t


def edit_distance_recursive(a, b):
    """Levenshtein distance by memoized recursion over code points."""

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            rec(i - 1, j) + 1,
            rec(i, j - 1) + 1,
            rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return rec(len(a), len(b))


def sobel_gx_reference(gray):
    """Hand-applied [-1 0 1; -2 0 2; -1 0 1] with edge replication and |.| at 255."""
    gray = np.asarray(gray, dtype=np.int64)
    h, w = gray.shape
    out = np.zeros((h, w), dtype=np.int64)
    for y in range(h):
        for x in range(w):
            acc = 0
            for dy, ky in ((-1, 1), (0, 2), (1, 1)):
                yy = min(max(y + dy, 0), h - 1)
                xr = min(x + 1, w - 1)
                xl = max(x - 1, 0)
                acc += ky * (gray[yy, xr] - gray[yy, xl])
            out[y, x] = min(abs(acc), 255)
    return out.astype(np.uint8)
