"""Closed curves separating an endpoint from another point of a plane tree.

Construction, for an endpoint e and a point x off the arc from e to p:

1. pick a leaf e' beyond x and a complementary path gamma from e to e'
   (grid BFS, kept a few cells away from the tree when possible);
2. gamma and the tree arc from e to e' bound a loop T through x; the grid
   complement of tree and gamma splits into pieces, and a cell of gamma with
   different pieces U and V on its two sides is a crossing point c;
3. choose tree points z1, z2 on the arc from e to x, reachable from U and
   from V respectively, with p, e and x outside the sub-arc between them;
4. the curve runs c -> V -> z2 -> (tree) -> z1 -> U -> c.

It crosses T once on gamma and once along the e-x arc, so e and x fall on
different sides.  Every curve handed back has passed ``verify_separation``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import ndimage

from . import _accel
from .dendroid import DendroidApprox, Point, _candidate_pairs, point_on_segment, segment_intersection
from .raster import (ProbeError, RasterScene, boundary_cells, nearest_goal, neighbourhood,
                     rasterize, trace_back)
from .rational import fmt_point

MAX_VERIFY_RESOLUTION = 4096


class HypothesisViolation(ValueError):
    pass


class ResolutionFailure(RuntimeError):
    def __init__(self, resolution: int, reason: str):
        super().__init__(f"no separating curve verified at resolution {resolution}: {reason}")
        self.resolution = resolution


@dataclass
class SeparationReport:
    simple: bool
    endpoint_hits: list[str]
    p_on_curve: bool
    e_on_curve: bool
    x_on_curve: bool
    exact_separates: bool
    raster_separates: bool
    raster_resolution: int

    @property
    def ok(self) -> bool:
        return (self.simple and len(self.endpoint_hits) <= 2 and not self.p_on_curve
                and not self.e_on_curve and not self.x_on_curve
                and self.exact_separates and self.raster_separates)

    def to_json(self) -> dict:
        return {"ok": self.ok, "simple": self.simple, "endpoint_hits": self.endpoint_hits,
                "p_on_curve": self.p_on_curve, "exact_separates": self.exact_separates,
                "raster_separates": self.raster_separates,
                "raster_resolution": self.raster_resolution}


@dataclass
class SeparationCurve:
    loop: list[Point]
    e: str
    x: str
    e_prime: str
    resolution: int
    report: SeparationReport
    gamma: list[Point] = field(default_factory=list, repr=False)

    @property
    def endpoint_hits(self) -> list[str]:
        return self.report.endpoint_hits

    def to_json(self) -> dict:
        return {"e": self.e, "x": self.x, "e_prime": self.e_prime, "resolution": self.resolution,
                "loop": [fmt_point(q) for q in self.loop], "endpoint_hits": self.endpoint_hits,
                "verification": self.report.to_json()}


# -- exact helpers -------------------------------------------------------------


class _Segments:
    """Tree segments with a float bounding-box prefilter for exact queries."""

    def __init__(self, segs: Sequence[tuple[Point, Point]]):
        self.segs = list(segs)
        if self.segs:
            a = np.array([[float(s[0][0]), float(s[0][1]), float(s[1][0]), float(s[1][1])]
                          for s in self.segs])
            self.lo = np.minimum(a[:, :2], a[:, 2:]) - 1e-9
            self.hi = np.maximum(a[:, :2], a[:, 2:]) + 1e-9
        else:
            self.lo = self.hi = np.zeros((0, 2))

    def near(self, a: Point, b: Point) -> list[int]:
        lo = np.minimum([float(a[0]), float(a[1])], [float(b[0]), float(b[1])])
        hi = np.maximum([float(a[0]), float(a[1])], [float(b[0]), float(b[1])])
        hit = np.all(self.lo <= hi, axis=1) & np.all(self.hi >= lo, axis=1)
        return list(np.flatnonzero(hit))

    def touches_only_at(self, a: Point, b: Point, allowed: Point | None) -> bool:
        """True when segment ab meets these segments at most in the point ``allowed``."""
        for k in self.near(a, b):
            s, t = self.segs[k]
            hit = segment_intersection(a, b, s, t)
            if hit is None:
                continue
            if hit == "overlap" or hit != allowed:
                return False
        return True


def _compress(pts: list[Point]) -> list[Point]:
    out: list[Point] = []
    for q in pts:
        if out and out[-1] == q:
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            if (b[0] - a[0]) * (q[1] - b[1]) == (b[1] - a[1]) * (q[0] - b[0]) and \
                    (b[0] - a[0]) * (q[0] - b[0]) + (b[1] - a[1]) * (q[1] - b[1]) > 0:
                out[-1] = q
                continue
        out.append(q)
    return out


def _inside(poly: Sequence[Point], q: Point) -> bool:
    """Even-odd rule with exact arithmetic; ``q`` must not lie on the polygon."""
    x, y = q
    inside = False
    n = len(poly)
    for k in range(n):
        (x1, y1), (x2, y2) = poly[k], poly[(k + 1) % n]
        if (y1 > y) != (y2 > y):
            cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < cross:
                inside = not inside
    return inside


def _simple(loop: Sequence[Point]) -> bool:
    n = len(loop)
    if n < 3:
        return False
    segs = [(loop[k], loop[(k + 1) % n], k) for k in range(n)]
    for s, t in _candidate_pairs(segs):
        (a1, a2, i), (b1, b2, j) = segs[s], segs[t]
        hit = segment_intersection(a1, a2, b1, b2)
        if hit is None:
            continue
        if hit == "overlap":
            return False
        adjacent = (j - i) % n == 1 or (i - j) % n == 1
        if not adjacent:
            return False
        shared = a2 if (j - i) % n == 1 else a1
        if hit != shared:
            return False
    return True


def _on_loop(loop: Sequence[Point], q: Point) -> bool:
    n = len(loop)
    return any(point_on_segment(q, loop[k], loop[(k + 1) % n]) for k in range(n))


# -- independent verification ---------------------------------------------------


def verify_separation(m: DendroidApprox, e: str, x: str, loop: Sequence[Point],
                      resolution: int) -> SeparationReport:
    """Check a closed curve exactly and by flood fill on a fresh grid.

    The flood fill rasterizes only the curve, labels the 4-connected pieces
    of its complement with ``scipy.ndimage.label`` and compares the pieces
    holding e and x; the grid is refined until neither point's cell touches
    the curve.
    """
    loop = list(loop)
    qe, qx = m.nodes[e], m.nodes[x]
    simple = _simple(loop)
    xy = np.array([[float(a), float(b)] for a, b in loop])
    lo, hi = xy.min(axis=0) - 1e-9, xy.max(axis=0) + 1e-9
    hits = []
    for n in sorted(m.endpoints):
        q = m.nodes[n]
        if lo[0] <= float(q[0]) <= hi[0] and lo[1] <= float(q[1]) <= hi[1] and _on_loop(loop, q):
            hits.append(n)
    p_on = _on_loop(loop, m.nodes[m.initial])
    e_on, x_on = _on_loop(loop, qe), _on_loop(loop, qx)
    exact = simple and not e_on and not x_on and _inside(loop, qe) != _inside(loop, qx)
    raster_ok, r = False, resolution
    empty = DendroidApprox({"a": qe, "b": qx}, [], None)
    while not (e_on or x_on) and r <= MAX_VERIFY_RESOLUTION:
        scene = rasterize(empty, r, extra=loop)
        walls = np.zeros(scene.shape, dtype=np.uint8)
        scene.mark(walls, loop, closed=True)
        ce, cx = scene.home_cell(qe), scene.home_cell(qx)
        if walls[ce] or walls[cx]:
            r *= 2
            continue
        lab, _ = ndimage.label(walls == 0)
        raster_ok = bool(lab[ce] and lab[cx] and lab[ce] != lab[cx])
        break
    return SeparationReport(simple, hits, p_on, e_on, x_on, exact, raster_ok, r)


# -- construction -----------------------------------------------------------------


def _portals(scene: RasterScene, free: np.ndarray, q: Point, radius: int,
             tree: _Segments) -> list[int]:
    ny, nx = scene.shape
    out = []
    for c in neighbourhood(scene.cells_at(q), scene.shape, radius):
        if free[c] and tree.touches_only_at(q, scene.center(c), q):
            out.append(c[0] * nx + c[1])
    return out


def _densify(pts: list[Point], step: Fraction) -> list[Point]:
    out = [pts[0]]
    for a, b in zip(pts, pts[1:]):
        n = max(1, math.ceil(math.hypot(float(b[0] - a[0]), float(b[1] - a[1])) / float(step)))
        out.extend((a[0] + (b[0] - a[0]) * k / n, a[1] + (b[1] - a[1]) * k / n) for k in range(1, n + 1))
    return out


def _straight_crossings(cells: list[tuple[int, int]], walls: np.ndarray, lab: np.ndarray):
    """Path cells whose neighbours across the path lie in two different pieces."""
    ny, nx = walls.shape
    for t in range(1, len(cells) - 1):
        (i0, j0), (i, j), (i1, j1) = cells[t - 1], cells[t], cells[t + 1]
        if (i1 - i, j1 - j) != (i - i0, j - j0):
            continue
        di, dj = j1 - j, -(i1 - i)  # perpendicular
        a, b = (i + di, j + dj), (i - di, j - dj)
        if not (0 <= a[0] < ny and 0 <= a[1] < nx and 0 <= b[0] < ny and 0 <= b[1] < nx):
            continue
        la, lb = lab[a], lab[b]
        if la and lb and la != lb:
            yield (i, j), a, b


def separation_curve(m: DendroidApprox, e: str, x: str, resolution: int,
                     max_candidates: int = 12) -> SeparationCurve:
    """A verified closed curve separating endpoint ``e`` from ``x``."""
    for n in (e, x):
        if n not in m.nodes:
            raise ProbeError(f"unknown node {n!r}")
    if e == m.initial or e not in m.endpoints:
        raise ProbeError(f"{e!r} is not a marked endpoint other than the initial point")
    if x in m.path(e, m.initial):
        raise HypothesisViolation(f"{x!r} lies on the arc from {e!r} to the initial point")
    scene = rasterize(m, resolution)
    free = scene.occupied == 0
    ny, nx = scene.shape
    tree = _Segments([(a, b) for a, b, _ in m.segments()])
    leaves = m.subtree_leaves(x)
    arc = m.path_points(m.path(e, x))
    dense = _densify(arc, Fraction(1, 2 * resolution))
    p = m.nodes[m.initial]
    reasons = []
    for margin in (2, 1, 0):
        blocked = ndimage.binary_dilation(~free, structure=np.ones((3, 3), bool),
                                          iterations=margin) if margin else ~free
        src = _portals(scene, free, m.nodes[e], margin + 1, tree)
        if not src:
            reasons.append(f"no clean exit from {e!r}")
            continue
        passable = ~blocked
        passable.ravel()[src] = True
        targets = {}
        for leaf in leaves:
            ports = _portals(scene, free, m.nodes[leaf], margin + 1, tree)
            if ports:
                targets[leaf] = ports
                passable.ravel()[ports] = True
        dist = _accel.bfs_distances(passable.astype(np.uint8), np.array(src, dtype=np.int64))
        order = []
        for leaf, ports in targets.items():
            g = nearest_goal(dist, ports)
            if g is not None:
                order.append((int(dist.ravel()[g]), leaf, g))
        if not order:
            reasons.append(f"margin {margin}: no complementary path to the leaves beyond {x!r}")
            continue
        for _, leaf, g in sorted(order)[:3]:
            cells = [divmod(k, nx) for k in trace_back(dist, g)]
            gamma = [m.nodes[e]] + [scene.center(c) for c in cells] + [m.nodes[leaf]]
            if not tree.touches_only_at(gamma[-2], gamma[-1], gamma[-1]):
                continue
            curve = _close_loop(m, e, x, leaf, scene, cells, gamma, dense, p, tree, max_candidates)
            if curve is not None:
                return curve
            reasons.append(f"margin {margin}, e'={leaf!r}: no verified loop")
    raise ResolutionFailure(resolution, "; ".join(reasons[-3:]) or "no candidates")


def _rank_pairs(u_opts, v_opts, p_idx, size):
    """For each V anchor, the U anchor minimizing path cost plus arc length, p not between them."""
    INF = float("inf")
    du = [INF] * size
    cu = [None] * size
    for d, k, c in u_opts:
        du[k], cu[k] = d, c
    cut = set(p_idx)
    left = [(INF, -1)] * size
    run = (INF, -1)
    for i in range(size):
        run = (INF, -1) if i in cut else min(run, (du[i] - i, i))
        left[i] = run
    right = [(INF, -1)] * size
    run = (INF, -1)
    for i in range(size - 1, -1, -1):
        run = (INF, -1) if i in cut else min(run, (du[i] + i, i))
        right[i] = run
    out = []
    for dv, k2, c2 in v_opts:
        a, b = left[k2][0] + k2, right[k2][0] - k2
        k1 = left[k2][1] if a <= b else right[k2][1]
        if k1 >= 0 and min(a, b) < INF:
            out.append((min(a, b) + dv, k1, cu[k1], k2, c2))
    out.sort()
    return out


def _close_loop(m, e, x, leaf, scene: RasterScene, cells, gamma, dense, p, tree: _Segments,
                max_candidates: int) -> SeparationCurve | None:
    ny, nx = scene.shape
    walls = scene.occupied.copy()
    scene.mark(walls, gamma)
    lab, _ = _accel.label((walls == 0).astype(np.uint8))
    gamma_segs = _Segments(list(zip(gamma, gamma[1:])))
    qe, qx = m.nodes[e], m.nodes[x]
    # anchors: points strictly inside the e-x arc, clear of e and x by two cells, not p
    cell = Fraction(1, scene.resolution)
    p_idx = [k for k, q in enumerate(dense) if q == p]
    anchors = []
    for k, q in enumerate(dense[1:-1], start=1):
        if q == p:
            continue
        if max(abs(q[0] - qe[0]), abs(q[1] - qe[1])) <= 2 * cell:
            continue
        if max(abs(q[0] - qx[0]), abs(q[1] - qx[1])) <= 2 * cell:
            continue
        anchors.append(k)
    near_cells = {k: neighbourhood(scene.cells_at(dense[k]), scene.shape, 1) for k in anchors}
    tried = 0
    for cb, a_cell, b_cell in _straight_crossings(cells, walls, lab):
        for u_cell, v_cell in ((a_cell, b_cell), (b_cell, a_cell)):
            U, V = lab[u_cell], lab[v_cell]
            best = {}
            for side, lbl, first in (("U", U, u_cell), ("V", V, v_cell)):
                passable = (lab == lbl)
                passable[cb] = True
                dist = _accel.bfs_distances(passable.astype(np.uint8),
                                            np.array([cb[0] * nx + cb[1]], dtype=np.int64))
                opts = []
                for k in anchors:
                    cand = [(int(dist[c]), c) for c in near_cells[k] if lab[c] == lbl and dist[c] > 0]
                    if cand:
                        d, c = min(cand)
                        opts.append((d, k, c))
                best[side] = (dist, opts)
            if not best["U"][1] or not best["V"][1]:
                continue
            pairs = _rank_pairs(best["U"][1], best["V"][1], p_idx, len(dense))
            for _, k1, c1, k2, c2 in pairs:
                if tried >= max_candidates:
                    return None
                z1, z2 = dense[k1], dense[k2]
                f1, f2 = scene.center(c1), scene.center(c2)
                if not (tree.touches_only_at(z1, f1, z1) and tree.touches_only_at(z2, f2, z2)):
                    continue
                if not (gamma_segs.touches_only_at(z1, f1, None) and gamma_segs.touches_only_at(z2, f2, None)):
                    continue
                tried += 1
                path_v = trace_back(best["V"][0], c2[0] * nx + c2[1])
                path_u = trace_back(best["U"][0], c1[0] * nx + c1[1])
                arc = dense[k2:k1 - 1:-1] if k2 > k1 else dense[k2:k1 + 1]
                loop = ([scene.center(divmod(k, nx)) for k in path_v] + arc
                        + [scene.center(divmod(k, nx)) for k in reversed(path_u[1:])])
                loop = _compress(loop)
                if loop[0] == loop[-1]:
                    loop.pop()
                report = verify_separation(m, e, x, loop, scene.resolution)
                if report.ok:
                    return SeparationCurve(loop, e, x, leaf, scene.resolution, report, gamma)
    return None
