"""Conservative occupancy grids and the complement-path probe.

Grid lines sit at multiples of ``1/resolution`` so grids at resolutions r
and 2r nest.  A cell is occupied when its closed square meets the model,
which keeps every complementary path found on the grid honest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .dendroid import DendroidApprox, Point

MIN_RESOLUTION = 8
MARGIN = 1e-6  # cells; absorbs float rounding at cell boundaries
PAD_CELLS = 4


class ProbeError(ValueError):
    pass


@dataclass(frozen=True)
class RasterScene:
    resolution: int
    x0: Fraction
    y0: Fraction
    occupied: np.ndarray = field(repr=False, compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.occupied.shape

    def cell_coords(self, pts: Iterable[Point]) -> np.ndarray:
        return np.array([((float(p[0] - self.x0)) * self.resolution,
                          (float(p[1] - self.y0)) * self.resolution) for p in pts], dtype=np.float64)

    def center(self, cell: tuple[int, int]) -> Point:
        i, j = cell
        return (self.x0 + Fraction(2 * j + 1, 2 * self.resolution),
                self.y0 + Fraction(2 * i + 1, 2 * self.resolution))

    def cells_at(self, q: Point) -> list[tuple[int, int]]:
        """Cells whose closed square contains ``q`` (one to four of them)."""
        u = (q[0] - self.x0) * self.resolution
        v = (q[1] - self.y0) * self.resolution
        js = {math.floor(u)} | ({int(u) - 1} if u.denominator == 1 else set())
        is_ = {math.floor(v)} | ({int(v) - 1} if v.denominator == 1 else set())
        ny, nx = self.shape
        return sorted((i, j) for i in is_ for j in js if 0 <= i < ny and 0 <= j < nx)

    def home_cell(self, q: Point) -> tuple[int, int]:
        u = (q[0] - self.x0) * self.resolution
        v = (q[1] - self.y0) * self.resolution
        return math.floor(v), math.floor(u)

    def mark(self, grid: np.ndarray, polyline: Sequence[Point], closed: bool = False) -> None:
        pts = list(polyline) + ([polyline[0]] if closed else [])
        if len(pts) == 1:
            pts = pts * 2
        c = self.cell_coords(pts)
        segs = np.hstack([c[:-1], c[1:]])
        _accel.mark_segments(grid, np.ascontiguousarray(segs), MARGIN)

    def to_json(self) -> dict:
        ny, nx = self.shape
        return {"resolution": self.resolution, "shape": [ny, nx],
                "origin": [str(self.x0), str(self.y0)], "occupied": int(self.occupied.sum())}


def _frame(m: DendroidApprox, resolution: int, extra: Sequence[Point] = ()) -> tuple[Fraction, Fraction, int, int]:
    box = m.bbox()
    pts = list(extra)
    if box is None and not pts:
        return Fraction(0), Fraction(0), resolution, resolution
    xs = [q[0] for q in pts] + ([box[0], box[2]] if box else [])
    ys = [q[1] for q in pts] + ([box[1], box[3]] if box else [])
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    pad = max(Fraction(PAD_CELLS, resolution), span / 16)
    x0 = Fraction(math.floor((min(xs) - pad) * resolution), resolution)
    y0 = Fraction(math.floor((min(ys) - pad) * resolution), resolution)
    nx = math.ceil((max(xs) + pad - x0) * resolution)
    ny = math.ceil((max(ys) + pad - y0) * resolution)
    return x0, y0, nx, ny


def rasterize(m: DendroidApprox, resolution: int, extra: Sequence[Point] = ()) -> RasterScene:
    """Occupancy grid of the model with ``resolution`` cells per unit length."""
    if resolution < MIN_RESOLUTION:
        raise ProbeError(f"resolution must be at least {MIN_RESOLUTION}")
    x0, y0, nx, ny = _frame(m, resolution, extra)
    occ = np.zeros((ny, nx), dtype=np.uint8)
    scene = RasterScene(resolution, x0, y0, occ)
    segs = [(a, b) for a, b, _ in m.segments()]
    if segs:
        c = scene.cell_coords([q for s in segs for q in s]).reshape(-1, 4)
        _accel.mark_segments(occ, np.ascontiguousarray(c), MARGIN)
    for q in m.nodes.values():
        scene.mark(occ, [q])
    occ.setflags(write=False)
    return scene


def boundary_cells(shape: tuple[int, int]) -> np.ndarray:
    ny, nx = shape
    idx = np.arange(ny * nx).reshape(ny, nx)
    return np.unique(np.concatenate([idx[0], idx[-1], idx[:, 0], idx[:, -1]]))


def neighbourhood(cells: Iterable[tuple[int, int]], shape: tuple[int, int], radius: int = 1) -> list[tuple[int, int]]:
    ny, nx = shape
    out = set()
    for i, j in cells:
        for di in range(-radius, radius + 1):
            for dj in range(-radius, radius + 1):
                if 0 <= i + di < ny and 0 <= j + dj < nx:
                    out.add((i + di, j + dj))
    return sorted(out)


def trace_back(dist: np.ndarray, goal: int) -> list[int]:
    """Cell path from a BFS source to ``goal`` (flat indices), stepping up, left, right, down."""
    ny, nx = dist.shape
    flat = dist.ravel()
    path = [goal]
    k = goal
    while flat[k] > 0:
        i, j = divmod(k, nx)
        for m, ok in ((k - nx, i > 0), (k - 1, j > 0), (k + 1, j < nx - 1), (k + nx, i < ny - 1)):
            if ok and flat[m] == flat[k] - 1:
                k = m
                break
        path.append(k)
    path.reverse()
    return path


def nearest_goal(dist: np.ndarray, goals: Iterable[int]) -> int | None:
    flat = dist.ravel()
    best = None
    for g in sorted(goals):
        if flat[g] >= 0 and (best is None or flat[g] < flat[best]):
            best = g
    return best


@dataclass
class AccessResult:
    target: str
    resolution: int
    found: bool
    cells: list[tuple[int, int]]
    path: list[Point]
    backend: str = _accel.BACKEND

    def to_json(self) -> dict:
        from .rational import fmt_point
        return {"target": self.target, "resolution": self.resolution,
                "verdict": "accessible" if self.found else "not reached",
                "cells": len(self.cells), "path": [fmt_point(q) for q in self.path]}


def accessibility_probe(m: DendroidApprox, target: str, resolution: int,
                        scene: RasterScene | None = None) -> AccessResult:
    """Grid BFS from the frame to the free cells touching the target's cells."""
    if target not in m.nodes:
        raise ProbeError(f"unknown node {target!r}")
    scene = scene or rasterize(m, resolution)
    free = scene.occupied == 0
    q = m.nodes[target]
    ny, nx = scene.shape
    home = scene.cells_at(q)
    goals = [i * nx + j for i, j in neighbourhood(home, scene.shape, 1)
             if free[i, j] and min(abs(i - a) + abs(j - b) for a, b in home) == 1]
    sources = boundary_cells(scene.shape)
    sources = sources[free.ravel()[sources]]
    dist = _accel.bfs_distances(free.astype(np.uint8), sources)
    g = nearest_goal(dist, goals)
    if g is None:
        return AccessResult(target, resolution, False, [], [])
    cells = [divmod(k, nx) for k in trace_back(dist, g)]
    return AccessResult(target, resolution, True, cells, [scene.center(c) for c in cells] + [q])
