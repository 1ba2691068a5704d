# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels.

Mirrors scenetext._kernels.fallback operation-for-operation; both backends
must produce bit-identical output. See the fallback module for the shared
conventions (clamped windows, mirrored erosion extents, raster-order
dense labels).
"""

import numpy as np

from libc.math cimport floor

cdef double TAN_22_5 = 0.4142135623730951

BACKEND_NAME = "compiled"


def sobel_gx(unsigned char[:, ::1] gray):
    cdef Py_ssize_t h = gray.shape[0], w = gray.shape[1]
    out = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    cdef Py_ssize_t y, x, ym, yp, xm, xp
    cdef int v
    with nogil:
        for y in range(h):
            ym = y - 1 if y > 0 else 0
            yp = y + 1 if y < h - 1 else h - 1
            for x in range(w):
                xm = x - 1 if x > 0 else 0
                xp = x + 1 if x < w - 1 else w - 1
                v = (gray[ym, xp] + 2 * gray[y, xp] + gray[yp, xp]) - (
                    gray[ym, xm] + 2 * gray[y, xm] + gray[yp, xm]
                )
                if v < 0:
                    v = -v
                if v > 255:
                    v = 255
                o[y, x] = <unsigned char> v
    return out


def sobel_pair(unsigned char[:, ::1] gray):
    cdef Py_ssize_t h = gray.shape[0], w = gray.shape[1]
    gx_arr = np.empty((h, w), dtype=np.int16)
    gy_arr = np.empty((h, w), dtype=np.int16)
    cdef short[:, ::1] gx = gx_arr
    cdef short[:, ::1] gy = gy_arr
    cdef Py_ssize_t y, x, ym, yp, xm, xp
    with nogil:
        for y in range(h):
            ym = y - 1 if y > 0 else 0
            yp = y + 1 if y < h - 1 else h - 1
            for x in range(w):
                xm = x - 1 if x > 0 else 0
                xp = x + 1 if x < w - 1 else w - 1
                gx[y, x] = <short> (
                    (gray[ym, xp] + 2 * gray[y, xp] + gray[yp, xp])
                    - (gray[ym, xm] + 2 * gray[y, xm] + gray[yp, xm])
                )
                gy[y, x] = <short> (
                    (gray[yp, xm] + 2 * gray[yp, x] + gray[yp, xp])
                    - (gray[ym, xm] + 2 * gray[ym, x] + gray[ym, xp])
                )
    return gx_arr, gy_arr


def morph_gradient_gx(unsigned char[:, ::1] gray):
    cdef Py_ssize_t h = gray.shape[0], w = gray.shape[1]
    out = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    cdef Py_ssize_t y, x, xm, xp
    cdef unsigned char a, b, c, mx, mn
    with nogil:
        for y in range(h):
            for x in range(w):
                xm = x - 1 if x > 0 else 0
                xp = x + 1 if x < w - 1 else w - 1
                a = gray[y, xm]
                b = gray[y, x]
                c = gray[y, xp]
                mx = a if a > b else b
                if c > mx:
                    mx = c
                mn = a if a < b else b
                if c < mn:
                    mn = c
                o[y, x] = mx - mn
    return out


cdef void _window_rows(const unsigned char[:, ::1] src, int[:, ::1] dst,
                       Py_ssize_t left, Py_ssize_t right, bint full) noexcept nogil:
    """Horizontal pass: dst[y,x] = 1 if the clamped window count is >0 (dilate)
    or equals the window size (erode), else 0."""
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t y, x, lo, hi, i
    cdef int acc
    for y in range(h):
        acc = 0
        hi = right if right < w - 1 else w - 1
        for i in range(hi + 1):
            acc += src[y, i]
        for x in range(w):
            if x > 0:
                if x - left - 1 >= 0:
                    acc -= src[y, x - left - 1]
                if x + right <= w - 1:
                    acc += src[y, x + right]
            lo = x - left if x - left > 0 else 0
            hi = x + right if x + right < w - 1 else w - 1
            if full:
                dst[y, x] = 1 if acc == hi - lo + 1 else 0
            else:
                dst[y, x] = 1 if acc > 0 else 0


cdef void _window_cols(const int[:, ::1] src, unsigned char[:, ::1] dst,
                       int[::1] acc, Py_ssize_t top, Py_ssize_t bottom,
                       bint full) noexcept nogil:
    """Vertical pass over the horizontal-pass output.

    Keeps one rolling accumulator per column so rows are traversed in
    memory order.
    """
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t y, x, lo, hi, i
    cdef int size
    for x in range(w):
        acc[x] = 0
    hi = bottom if bottom < h - 1 else h - 1
    for i in range(hi + 1):
        for x in range(w):
            acc[x] += src[i, x]
    for y in range(h):
        if y > 0:
            if y - top - 1 >= 0:
                for x in range(w):
                    acc[x] -= src[y - top - 1, x]
            if y + bottom <= h - 1:
                for x in range(w):
                    acc[x] += src[y + bottom, x]
        lo = y - top if y - top > 0 else 0
        hi = y + bottom if y + bottom < h - 1 else h - 1
        size = <int> (hi - lo + 1)
        if full:
            for x in range(w):
                dst[y, x] = 1 if acc[x] == size else 0
        else:
            for x in range(w):
                dst[y, x] = 1 if acc[x] > 0 else 0


def binary_dilate(unsigned char[:, ::1] mask, int kw, int kh):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    step = np.empty((h, w), dtype=np.int32)
    out = np.empty((h, w), dtype=np.uint8)
    col_acc = np.empty(w, dtype=np.int32)
    cdef int[:, ::1] s = step
    cdef unsigned char[:, ::1] o = out
    cdef int[::1] acc = col_acc
    with nogil:
        _window_rows(mask, s, (kw - 1) // 2, kw // 2, False)
        _window_cols(s, o, acc, (kh - 1) // 2, kh // 2, False)
    return out


def binary_erode(unsigned char[:, ::1] mask, int kw, int kh):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    step = np.empty((h, w), dtype=np.int32)
    out = np.empty((h, w), dtype=np.uint8)
    col_acc = np.empty(w, dtype=np.int32)
    cdef int[:, ::1] s = step
    cdef unsigned char[:, ::1] o = out
    cdef int[::1] acc = col_acc
    with nogil:
        _window_rows(mask, s, kw // 2, (kw - 1) // 2, True)
        _window_cols(s, o, acc, kh // 2, (kh - 1) // 2, True)
    return out


cdef inline int _find_root(const int[::1] parent, int i) noexcept nogil:
    while parent[i] != i:
        i = parent[i]
    return i


cdef inline void _union(int[::1] parent, int a, int b) noexcept nogil:
    cdef int ra = _find_root(parent, a)
    cdef int rb = _find_root(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


def label_components(unsigned char[:, ::1] mask):
    """Two-pass 8-connected labeling with union-find over provisional labels.

    Returns (labels int32, count, stats int64[count, 5]) with stats rows
    (area, min_x, min_y, max_x, max_y), labels dense 1..count in raster
    first-appearance order.
    """
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    labels_arr = np.zeros((h, w), dtype=np.int32)
    cdef int[:, ::1] labels = labels_arr
    parent_arr = np.zeros(h * w + 2, dtype=np.int32)
    cdef int[::1] parent = parent_arr
    cdef int next_label = 1
    cdef Py_ssize_t y, x
    cdef int best, cand, root, lbl

    with nogil:
        for y in range(h):
            for x in range(w):
                if mask[y, x] == 0:
                    continue
                best = 0
                if x > 0 and labels[y, x - 1] != 0:
                    best = labels[y, x - 1]
                if y > 0:
                    if x > 0 and labels[y - 1, x - 1] != 0:
                        cand = labels[y - 1, x - 1]
                        if best == 0 or cand < best:
                            best = cand
                    if labels[y - 1, x] != 0:
                        cand = labels[y - 1, x]
                        if best == 0 or cand < best:
                            best = cand
                    if x < w - 1 and labels[y - 1, x + 1] != 0:
                        cand = labels[y - 1, x + 1]
                        if best == 0 or cand < best:
                            best = cand
                if best == 0:
                    parent[next_label] = next_label
                    labels[y, x] = next_label
                    next_label += 1
                    continue
                labels[y, x] = best
                if x > 0 and labels[y, x - 1] != 0:
                    _union(parent, labels[y, x - 1], best)
                if y > 0:
                    if x > 0 and labels[y - 1, x - 1] != 0:
                        _union(parent, labels[y - 1, x - 1], best)
                    if labels[y - 1, x] != 0:
                        _union(parent, labels[y - 1, x], best)
                    if x < w - 1 and labels[y - 1, x + 1] != 0:
                        _union(parent, labels[y - 1, x + 1], best)

    cdef Py_ssize_t n_prov = next_label
    resolve_arr = np.zeros(n_prov, dtype=np.int32)
    dense_arr = np.zeros(n_prov, dtype=np.int32)
    stats_arr = np.zeros((n_prov, 5), dtype=np.int64)
    cdef int[::1] resolve = resolve_arr
    cdef int[::1] dense = dense_arr
    cdef long long[:, ::1] st = stats_arr
    cdef int count = 0
    cdef int i
    with nogil:
        for i in range(1, <int> n_prov):
            resolve[i] = _find_root(parent, i)
        for y in range(h):
            for x in range(w):
                lbl = labels[y, x]
                if lbl == 0:
                    continue
                root = resolve[lbl]
                lbl = dense[root]
                if lbl == 0:
                    count += 1
                    lbl = count
                    dense[root] = lbl
                    st[lbl - 1, 1] = x
                    st[lbl - 1, 2] = y
                    st[lbl - 1, 3] = x
                    st[lbl - 1, 4] = y
                labels[y, x] = lbl
                st[lbl - 1, 0] += 1
                if x < st[lbl - 1, 1]:
                    st[lbl - 1, 1] = x
                if x > st[lbl - 1, 3]:
                    st[lbl - 1, 3] = x
                if y > st[lbl - 1, 4]:
                    st[lbl - 1, 4] = y
    return labels_arr, count, stats_arr[:count].copy()


def canny_nms(short[:, ::1] gx, short[:, ::1] gy):
    """Non-maximum suppression of the L1 gradient magnitude.

    Same sector quantization and tie rule as the fallback: keep against
    the leading neighbor (>=), drop against the trailing one (>);
    out-of-bounds neighbors count as zero.
    """
    cdef Py_ssize_t h = gx.shape[0], w = gx.shape[1]
    mag_arr = np.empty((h, w), dtype=np.int32)
    out = np.zeros((h, w), dtype=np.int32)
    cdef int[:, ::1] mag = mag_arr
    cdef int[:, ::1] o = out
    cdef Py_ssize_t y, x
    cdef int adx, ady, m, n1, n2
    cdef double fdx, fdy
    with nogil:
        for y in range(h):
            for x in range(w):
                adx = gx[y, x]
                if adx < 0:
                    adx = -adx
                ady = gy[y, x]
                if ady < 0:
                    ady = -ady
                mag[y, x] = adx + ady
        for y in range(h):
            for x in range(w):
                m = mag[y, x]
                adx = gx[y, x]
                if adx < 0:
                    adx = -adx
                ady = gy[y, x]
                if ady < 0:
                    ady = -ady
                fdx = adx
                fdy = ady
                if fdy <= TAN_22_5 * fdx:
                    n1 = mag[y, x - 1] if x > 0 else 0
                    n2 = mag[y, x + 1] if x < w - 1 else 0
                elif fdx <= TAN_22_5 * fdy:
                    n1 = mag[y - 1, x] if y > 0 else 0
                    n2 = mag[y + 1, x] if y < h - 1 else 0
                elif (gx[y, x] > 0) == (gy[y, x] > 0):
                    n1 = mag[y - 1, x - 1] if (y > 0 and x > 0) else 0
                    n2 = mag[y + 1, x + 1] if (y < h - 1 and x < w - 1) else 0
                else:
                    n1 = mag[y - 1, x + 1] if (y > 0 and x < w - 1) else 0
                    n2 = mag[y + 1, x - 1] if (y < h - 1 and x > 0) else 0
                if m >= n1 and m > n2:
                    o[y, x] = m
    return out


def resize_bilinear(img, int out_w, int out_h):
    """Bilinear resampling; arithmetic mirrors the fallback expression exactly."""
    arr = np.ascontiguousarray(img)
    src3 = arr[:, :, np.newaxis] if arr.ndim == 2 else arr
    cdef const unsigned char[:, :, ::1] src = src3
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], c = src.shape[2]
    out = np.empty((out_h, out_w, c), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] o = out
    cdef double sx = (<double> w) / out_w
    cdef double sy = (<double> h) / out_h
    cdef Py_ssize_t oy, ox, ch, x0, y0, x1, y1
    cdef double xs, ys, fx, fy, value
    with nogil:
        for oy in range(out_h):
            ys = (oy + 0.5) * sy - 0.5
            if ys < 0.0:
                ys = 0.0
            if ys > h - 1.0:
                ys = h - 1.0
            y0 = <Py_ssize_t> floor(ys)
            y1 = y0 + 1 if y0 + 1 < h - 1 else h - 1
            fy = ys - y0
            for ox in range(out_w):
                xs = (ox + 0.5) * sx - 0.5
                if xs < 0.0:
                    xs = 0.0
                if xs > w - 1.0:
                    xs = w - 1.0
                x0 = <Py_ssize_t> floor(xs)
                x1 = x0 + 1 if x0 + 1 < w - 1 else w - 1
                fx = xs - x0
                for ch in range(c):
                    value = (
                        src[y0, x0, ch] * (1.0 - fx) * (1.0 - fy)
                        + src[y0, x1, ch] * fx * (1.0 - fy)
                        + src[y1, x0, ch] * (1.0 - fx) * fy
                        + src[y1, x1, ch] * fx * fy
                    )
                    value = floor(value + 0.5)
                    if value < 0.0:
                        value = 0.0
                    if value > 255.0:
                        value = 255.0
                    o[oy, ox, ch] = <unsigned char> value
    if arr.ndim == 2:
        return out[:, :, 0].copy()
    return out
