"""Reference implementations of the raster kernels (numpy + deque)."""
from __future__ import annotations

import math
from collections import deque

import numpy as np


def _span(lo: float, hi: float, eps: float, n: int) -> tuple[int, int]:
    # closed cell k covers [k, k+1]; widen by eps
    a = max(0, math.ceil(lo - 1 - eps))
    b = min(n - 1, math.floor(hi + eps))
    return a, b


def mark_segments(occ: np.ndarray, segs: np.ndarray, eps: float) -> None:
    """Mark every cell whose eps-widened closed square meets a segment (cell coordinates)."""
    ny, nx = occ.shape
    for x0, y0, x1, y1 in np.asarray(segs, dtype=np.float64):
        i0, i1 = _span(min(y0, y1), max(y0, y1), eps, ny)
        dy = y1 - y0
        for i in range(i0, i1 + 1):
            if dy == 0:
                xa, xb = x0, x1
            else:
                ta = (i - eps - y0) / dy
                tb = (i + 1 + eps - y0) / dy
                ta, tb = max(0.0, min(ta, tb)), min(1.0, max(ta, tb))
                if ta > tb:
                    continue
                xa, xb = x0 + ta * (x1 - x0), x0 + tb * (x1 - x0)
            j0, j1 = _span(min(xa, xb), max(xa, xb), eps, nx)
            if j0 <= j1:
                occ[i, j0 : j1 + 1] = 1


def _neighbours(k: int, ny: int, nx: int):
    i, j = divmod(k, nx)
    if i > 0:
        yield k - nx
    if j > 0:
        yield k - 1
    if j < nx - 1:
        yield k + 1
    if i < ny - 1:
        yield k + nx


def bfs_distances(passable: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """4-neighbour BFS distances over passable cells; -1 where unreachable."""
    ny, nx = passable.shape
    ok = passable.ravel().astype(bool)
    dist = np.full(ny * nx, -1, dtype=np.int32)
    queue: deque[int] = deque()
    for s in np.asarray(sources, dtype=np.int64):
        if ok[s] and dist[s] < 0:
            dist[s] = 0
            queue.append(int(s))
    while queue:
        k = queue.popleft()
        d = dist[k] + 1
        for m in _neighbours(k, ny, nx):
            if ok[m] and dist[m] < 0:
                dist[m] = d
                queue.append(m)
    return dist.reshape(ny, nx)


def label(free: np.ndarray) -> tuple[np.ndarray, int]:
    """4-connected components of free cells, numbered by first cell in row-major order."""
    ny, nx = free.shape
    ok = free.ravel().astype(bool)
    lab = np.zeros(ny * nx, dtype=np.int32)
    count = 0
    for s in np.flatnonzero(ok):
        if lab[s]:
            continue
        count += 1
        lab[s] = count
        queue = deque([int(s)])
        while queue:
            k = queue.popleft()
            for m in _neighbours(k, ny, nx):
                if ok[m] and not lab[m]:
                    lab[m] = count
                    queue.append(m)
    return lab.reshape(ny, nx), count
