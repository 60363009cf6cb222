# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled raster kernels: 8-connected labeling, exact squared EDT,
Zhang-Suen thinning. Bit-identical to promptseg._pykernels."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.uint8_t u8
ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64


cdef inline i64 _find(i64[::1] parent, i64 x) nogil:
    cdef i64 root = x
    cdef i64 t
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        t = parent[x]
        parent[x] = root
        x = t
    return root


def label_8(mask):
    """8-connected labeling; ids 1..N in first-pixel raster-scan order."""
    cdef u8[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0]
    cdef Py_ssize_t w = m.shape[1]
    labels_arr = np.zeros((h, w), dtype=np.int64)
    cdef i64[:, ::1] lab = labels_arr
    parent_arr = np.arange(h * ((w + 1) // 2) + 2, dtype=np.int64)
    cdef i64[::1] parent = parent_arr
    cdef i64 nxt = 1
    cdef Py_ssize_t r, c
    cdef Py_ssize_t nc
    cdef i64 best, n, root

    with nogil:
        for r in range(h):
            for c in range(w):
                if not m[r, c]:
                    continue
                best = 0
                if r > 0:
                    if c > 0 and lab[r - 1, c - 1]:
                        best = _find(parent, lab[r - 1, c - 1])
                    if lab[r - 1, c]:
                        n = _find(parent, lab[r - 1, c])
                        if best == 0 or n < best:
                            best = n
                    if c + 1 < w and lab[r - 1, c + 1]:
                        n = _find(parent, lab[r - 1, c + 1])
                        if best == 0 or n < best:
                            best = n
                if c > 0 and lab[r, c - 1]:
                    n = _find(parent, lab[r, c - 1])
                    if best == 0 or n < best:
                        best = n
                if best == 0:
                    lab[r, c] = nxt
                    nxt += 1
                else:
                    lab[r, c] = best
                    if r > 0:
                        for nc in range(c - 1, c + 2):
                            if 0 <= nc < w and lab[r - 1, nc]:
                                root = _find(parent, lab[r - 1, nc])
                                if root != best:
                                    parent[root] = best
                    if c > 0 and lab[r, c - 1]:
                        root = _find(parent, lab[r, c - 1])
                        if root != best:
                            parent[root] = best

    if nxt == 1:
        return np.zeros((h, w), dtype=np.int32), 0

    roots_arr = np.empty(nxt, dtype=np.int64)
    cdef i64[::1] roots = roots_arr
    cdef i64 i
    for i in range(nxt):
        roots[i] = _find(parent, i)
    uniq = np.unique(roots_arr[1:])
    remap = np.zeros(nxt, dtype=np.int32)
    remap[uniq] = np.arange(1, uniq.size + 1, dtype=np.int32)
    return remap[roots_arr[labels_arr]], int(uniq.size)


def edt_sq(mask):
    """Exact squared Euclidean distance to the nearest zero pixel or border."""
    cdef u8[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0]
    cdef Py_ssize_t w = m.shape[1]
    g_arr = np.empty((h, w), dtype=np.int64)
    out_arr = np.zeros((h, w), dtype=np.int64)
    v_arr = np.empty(w + 2, dtype=np.int64)
    zn_arr = np.empty(w + 2, dtype=np.int64)
    zd_arr = np.empty(w + 2, dtype=np.int64)
    f_arr = np.empty(w, dtype=np.int64)
    cdef i64[:, ::1] g = g_arr
    cdef i64[:, ::1] out = out_arr
    cdef i64[::1] v = v_arr
    cdef i64[::1] zn = zn_arr
    cdef i64[::1] zd = zd_arr
    cdef i64[::1] f = f_arr
    cdef Py_ssize_t r, c
    cdef i64 q, p, fq, fp, num, den, k, j, prev

    with nogil:
        for c in range(w):
            prev = 0
            for r in range(h):
                prev = prev + 1 if m[r, c] else 0
                g[r, c] = prev
            prev = 0
            for r in range(h - 1, -1, -1):
                prev = prev + 1 if m[r, c] else 0
                if prev < g[r, c]:
                    g[r, c] = prev

        for r in range(h):
            for c in range(w):
                f[c] = g[r, c] * g[r, c]
            k = 0
            v[0] = -1
            for q in range(w + 1):
                fq = f[q] if q < w else 0
                while True:
                    p = v[k]
                    fp = f[p] if 0 <= p < w else 0
                    num = fq + q * q - fp - p * p
                    den = 2 * (q - p)
                    if k > 0 and num * zd[k] <= zn[k] * den:
                        k -= 1
                    else:
                        break
                k += 1
                v[k] = q
                zn[k] = num
                zd[k] = den
            j = 0
            for c in range(w):
                while j < k and zn[j + 1] <= c * zd[j + 1]:
                    j += 1
                p = v[j]
                fp = f[p] if 0 <= p < w else 0
                out[r, c] = (c - p) * (c - p) + fp
    return out_arr


def thin_zs(mask):
    """Zhang-Suen thinning; returns uint8 of the same shape."""
    cdef u8[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0]
    cdef Py_ssize_t w = m.shape[1]
    pad_arr = np.zeros((h + 2, w + 2), dtype=np.uint8)
    pad_arr[1:h + 1, 1:w + 1] = np.asarray(m)
    kill_arr = np.empty(h * w * 2, dtype=np.int64)
    cdef u8[:, ::1] pad = pad_arr
    cdef i64[::1] kill = kill_arr
    cdef Py_ssize_t r, c, i
    cdef int step, changed, b, a
    cdef int p2, p3, p4, p5, p6, p7, p8, p9, c3, c4
    cdef Py_ssize_t nkill

    changed = 1
    with nogil:
        while changed:
            changed = 0
            for step in range(2):
                nkill = 0
                for r in range(1, h + 1):
                    for c in range(1, w + 1):
                        if not pad[r, c]:
                            continue
                        p2 = pad[r - 1, c]
                        p3 = pad[r - 1, c + 1]
                        p4 = pad[r, c + 1]
                        p5 = pad[r + 1, c + 1]
                        p6 = pad[r + 1, c]
                        p7 = pad[r + 1, c - 1]
                        p8 = pad[r, c - 1]
                        p9 = pad[r - 1, c - 1]
                        b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
                        if b < 2 or b > 6:
                            continue
                        a = 0
                        if p2 == 0 and p3 == 1: a += 1
                        if p3 == 0 and p4 == 1: a += 1
                        if p4 == 0 and p5 == 1: a += 1
                        if p5 == 0 and p6 == 1: a += 1
                        if p6 == 0 and p7 == 1: a += 1
                        if p7 == 0 and p8 == 1: a += 1
                        if p8 == 0 and p9 == 1: a += 1
                        if p9 == 0 and p2 == 1: a += 1
                        if a != 1:
                            continue
                        if step == 0:
                            c3 = p2 * p4 * p6
                            c4 = p4 * p6 * p8
                        else:
                            c3 = p2 * p4 * p8
                            c4 = p2 * p6 * p8
                        if c3 == 0 and c4 == 0:
                            kill[nkill] = r * (w + 2) + c
                            nkill += 1
                for i in range(nkill):
                    pad[kill[i] // (w + 2), kill[i] % (w + 2)] = 0
                if nkill > 0:
                    changed = 1
    return pad_arr[1:h + 1, 1:w + 1]
