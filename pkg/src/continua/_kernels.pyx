# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled raster kernels; same contracts as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport ceil, floor

cnp.import_array()


cdef inline void _span(double lo, double hi, double eps, Py_ssize_t n,
                       Py_ssize_t* a, Py_ssize_t* b) noexcept nogil:
    cdef double fa = ceil(lo - 1 - eps)
    cdef double fb = floor(hi + eps)
    a[0] = 0 if fa < 0 else <Py_ssize_t>fa
    b[0] = n - 1 if fb > n - 1 else <Py_ssize_t>fb


def mark_segments(cnp.uint8_t[:, ::1] occ, segs, double eps):
    cdef double[:, ::1] s = np.ascontiguousarray(segs, dtype=np.float64).reshape(-1, 4)
    cdef Py_ssize_t ny = occ.shape[0], nx = occ.shape[1]
    cdef Py_ssize_t k, i, j, i0, i1, j0, j1
    cdef double x0, y0, x1, y1, dy, ta, tb, t, xa, xb
    with nogil:
        for k in range(s.shape[0]):
            x0 = s[k, 0]; y0 = s[k, 1]; x1 = s[k, 2]; y1 = s[k, 3]
            _span(y0 if y0 < y1 else y1, y1 if y0 < y1 else y0, eps, ny, &i0, &i1)
            dy = y1 - y0
            for i in range(i0, i1 + 1):
                if dy == 0:
                    xa = x0; xb = x1
                else:
                    ta = (i - eps - y0) / dy
                    tb = (i + 1 + eps - y0) / dy
                    if ta > tb:
                        t = ta; ta = tb; tb = t
                    if ta < 0:
                        ta = 0
                    if tb > 1:
                        tb = 1
                    if ta > tb:
                        continue
                    xa = x0 + ta * (x1 - x0)
                    xb = x0 + tb * (x1 - x0)
                if xa > xb:
                    t = xa; xa = xb; xb = t
                _span(xa, xb, eps, nx, &j0, &j1)
                for j in range(j0, j1 + 1):
                    occ[i, j] = 1


def bfs_distances(passable, sources):
    cdef cnp.uint8_t[:, ::1] ok = np.ascontiguousarray(passable, dtype=np.uint8)
    cdef Py_ssize_t ny = ok.shape[0], nx = ok.shape[1], n = ny * nx
    cdef cnp.int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    out = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] dist = out
    cdef cnp.int64_t[::1] queue = np.empty(n, dtype=np.int64)
    cdef cnp.uint8_t[::1] flat = np.asarray(ok).ravel()
    cdef Py_ssize_t head = 0, tail = 0, k, i, j, m, q
    cdef Py_ssize_t nb[4]
    cdef int c
    with nogil:
        for q in range(src.shape[0]):
            k = src[q]
            if flat[k] and dist[k] < 0:
                dist[k] = 0
                queue[tail] = k
                tail += 1
        while head < tail:
            k = queue[head]
            head += 1
            i = k // nx
            j = k - i * nx
            c = 0
            if i > 0:
                nb[c] = k - nx; c += 1
            if j > 0:
                nb[c] = k - 1; c += 1
            if j < nx - 1:
                nb[c] = k + 1; c += 1
            if i < ny - 1:
                nb[c] = k + nx; c += 1
            for q in range(c):
                m = nb[q]
                if flat[m] and dist[m] < 0:
                    dist[m] = dist[k] + 1
                    queue[tail] = m
                    tail += 1
    return out.reshape(ny, nx)


def label(free):
    cdef cnp.uint8_t[::1] flat = np.ascontiguousarray(free, dtype=np.uint8).ravel()
    cdef Py_ssize_t ny = free.shape[0], nx = free.shape[1], n = ny * nx
    out = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[::1] lab = out
    cdef cnp.int64_t[::1] queue = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, head, tail, k, i, j, m, q
    cdef Py_ssize_t nb[4]
    cdef int c
    cdef cnp.int32_t count = 0
    with nogil:
        for s in range(n):
            if not flat[s] or lab[s]:
                continue
            count += 1
            lab[s] = count
            head = 0
            tail = 1
            queue[0] = s
            while head < tail:
                k = queue[head]
                head += 1
                i = k // nx
                j = k - i * nx
                c = 0
                if i > 0:
                    nb[c] = k - nx; c += 1
                if j > 0:
                    nb[c] = k - 1; c += 1
                if j < nx - 1:
                    nb[c] = k + 1; c += 1
                if i < ny - 1:
                    nb[c] = k + nx; c += 1
                for q in range(c):
                    m = nb[q]
                    if flat[m] and not lab[m]:
                        lab[m] = count
                        queue[tail] = m
                        tail += 1
    return out.reshape(ny, nx), int(count)
