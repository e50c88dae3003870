"""Diagnostics on finite tree models: degrees, radial convexity, delta-classes, endpoint heights."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import Delaunay, QhullError, cKDTree

from .dendroid import DendroidApprox
from .rational import fmt, parse


@dataclass
class DegreeStats:
    endpoints: list[str]
    ramifications: dict[str, int]
    initial_degree: int | None

    @property
    def max_degree(self) -> int:
        return max(self.ramifications.values(), default=0)

    def to_json(self) -> dict:
        hist: dict[int, int] = {}
        for d in self.ramifications.values():
            hist[d] = hist.get(d, 0) + 1
        return {
            "endpoints": len(self.endpoints),
            "ramifications": len(self.ramifications),
            "max_ramification_degree": self.max_degree,
            "degree_histogram": {str(k): v for k, v in sorted(hist.items())},
            "initial_degree": self.initial_degree,
        }


def degree_stats(m: DendroidApprox) -> DegreeStats:
    ends = sorted(n for n in m.nodes if m.degree(n) == 1)
    ram = {n: m.degree(n) for n in sorted(m.nodes) if m.degree(n) >= 3}
    return DegreeStats(ends, ram, m.degree(m.initial) if m.initial is not None else None)


def degree_growth(models: Mapping[int, DendroidApprox]) -> dict:
    """Ramification count and largest degree per depth, for a family of models."""
    rows = {}
    for depth in sorted(models):
        s = degree_stats(models[depth])
        rows[str(depth)] = {"ramifications": len(s.ramifications), "max_degree": s.max_degree,
                            "initial_degree": s.initial_degree}
    maxes = [r["max_degree"] for r in rows.values()]
    return {"by_depth": rows, "bounded": len(set(maxes)) <= 1}


@dataclass
class RadialReport:
    checked: int
    violations: list[tuple[str, str, int]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked_segments": self.checked, "ok": self.ok,
                "violations": [{"edge": [a, b], "segment": k} for a, b, k in self.violations[:50]]}


def radially_convex_check(m: DendroidApprox) -> RadialReport:
    """Euclidean distance to p must strictly increase along every path leaving p.

    On a segment from a to b (a nearer p in the tree) the squared distance is
    a convex quadratic, so it increases throughout exactly when
    ``(a - p) . (b - a) >= 0`` and ``a != b``.
    """
    p = m.nodes[m.initial]
    parent = m.parent
    checked = 0
    bad: list[tuple[str, str, int]] = []
    for n, par in parent.items():
        if par is None:
            continue
        pts = m.edge_points(par, n)
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            checked += 1
            dx, dy = b[0] - a[0], b[1] - a[1]
            if (dx == 0 and dy == 0) or (a[0] - p[0]) * dx + (a[1] - p[1]) * dy < 0:
                bad.append((par, n, k))
    return RadialReport(checked, bad)


def _as_float(points) -> np.ndarray:
    return np.array([(float(x), float(y)) for x, y in points], dtype=np.float64).reshape(-1, 2)


def _candidate_edges(xy: np.ndarray, d: float) -> np.ndarray:
    """Index pairs containing a spanning forest of the graph of pairs closer than ``d``.

    A Euclidean minimum spanning tree lives inside the Delaunay triangulation,
    so its short edges already decide the components; small or degenerate
    inputs fall back to an all-pairs radius query.
    """
    n = len(xy)
    if n > 16:
        try:
            tri = Delaunay(xy)
        except QhullError:
            try:
                tri = Delaunay(xy, qhull_options="QJ Qbb Qc Qz Q12")
            except QhullError:
                tri = None
        if tri is not None:
            s = tri.simplices
            e = np.vstack([s[:, [0, 1]], s[:, [1, 2]], s[:, [0, 2]]]).astype(np.int64)
            e.sort(axis=1)
            key = np.unique(e[:, 0] * n + e[:, 1])
            e = np.column_stack([key // n, key % n])
            gap = np.hypot(*(xy[e[:, 0]] - xy[e[:, 1]]).T)
            return e[gap <= d * (1 + 1e-9)]
    return cKDTree(xy).query_pairs(d * (1 + 1e-9), output_type="ndarray")


def delta_quasicomponents(points: Sequence, delta) -> list[list[int]]:
    """Components of the graph joining points closer than ``delta``; classes sorted by first index."""
    delta = Fraction(delta) if not isinstance(delta, float) else delta
    if delta <= 0:
        raise ValueError("delta must be positive")
    n = len(points)
    if n == 0:
        return []
    xy = _as_float(points)
    # repeated points share a class outright
    uniq, first, inv = np.unique(xy, axis=0, return_index=True, return_inverse=True)
    inv = inv.ravel()
    d = float(delta)
    pairs = _candidate_edges(uniq, d)
    if len(pairs):
        gap = np.hypot(*(uniq[pairs[:, 0]] - uniq[pairs[:, 1]]).T)
        keep = gap < d * (1 - 1e-9)
        exact = isinstance(delta, Fraction) and all(isinstance(c, Fraction) for q in points for c in q)
        for k in np.flatnonzero(~keep):
            i, j = pairs[k]
            if exact:
                a, b = points[first[i]], points[first[j]]
                keep[k] = (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 < delta * delta
            else:
                keep[k] = gap[k] < d
        pairs = pairs[keep]
    m = len(uniq)
    rows = pairs[:, 0] if len(pairs) else np.zeros(0, dtype=np.intp)
    cols = pairs[:, 1] if len(pairs) else np.zeros(0, dtype=np.intp)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(m, m))
    _, lab = connected_components(graph, directed=False)
    classes: dict[int, list[int]] = {}
    for i, c in enumerate(lab[inv]):
        classes.setdefault(int(c), []).append(i)
    return sorted(classes.values(), key=lambda c: c[0])


def same_class(classes: Sequence[Sequence[int]], i: int, j: int) -> bool:
    return any(i in c and j in c for c in classes)


@dataclass
class HeightReport:
    endpoints: int
    scales: tuple[int, int]
    plane_violations: list[dict] = field(default_factory=list)
    cylinder_violations: list[str] = field(default_factory=list)
    cylinders_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.plane_violations and not self.cylinder_violations

    def to_json(self) -> dict:
        return {"endpoints": self.endpoints, "scales": list(self.scales), "ok": self.ok,
                "plane_violations": self.plane_violations[:50],
                "cylinder_violations": self.cylinder_violations[:50],
                "cylinders_checked": self.cylinders_checked}


def endpoint_height_usc_check(m: DendroidApprox, k_min: int = 2, k_max: int = 20,
                              tol: float = 1e-9) -> HeightReport:
    """Look for endpoints whose nearby endpoints sit persistently higher than they do.

    Heights are tree distances to p.  An endpoint e is flagged when, in at
    least two distinct dyadic annuli ``2^-(k+1) <= |e' - e| < 2^-k``, some
    endpoint e' has height above ``h(e) + 2|e' - e|``.  When endpoint labels
    carry cylinder words and profile heights, each cylinder's largest height
    must also sit on its keep branch (all-zero continuation).
    """
    ends = sorted(e for e in m.endpoints if e != m.initial)
    report = HeightReport(len(ends), (k_min, k_max))
    if len(ends) < 2:
        return report
    h = m.root_distance
    xy = _as_float(m.nodes[e] for e in ends)
    heights = np.array([h[e] for e in ends])
    tree = cKDTree(xy)
    for i, nbrs in enumerate(tree.query_ball_point(xy, 2.0**-k_min)):
        scales = set()
        for j in nbrs:
            if j == i:
                continue
            dist = float(np.hypot(*(xy[j] - xy[i])))
            if dist == 0 or heights[j] <= heights[i] + 2 * dist + tol:
                continue
            k = math.floor(-math.log2(dist))
            if k <= k_max:
                scales.add(k)
        if len(scales) >= 2:
            report.plane_violations.append({"endpoint": ends[i], "height": heights[i],
                                            "scales": sorted(scales)})
    words = {e: m.labels[e]["word"] for e in ends
             if "word" in m.labels.get(e, {}) and "height" in m.labels[e]}
    if words:
        by_word = {w: parse(m.labels[e]["height"]) for e, w in words.items()}
        depth = max(len(w) for w in by_word)
        prefixes: dict[str, Fraction] = {}
        for w, v in by_word.items():
            for k in range(len(w) + 1):
                if v > prefixes.get(w[:k], Fraction(-1)):
                    prefixes[w[:k]] = v
        for u, top in sorted(prefixes.items()):
            keep = u + "0" * (depth - len(u))
            report.cylinders_checked += 1
            if keep in by_word and by_word[keep] != top:
                report.cylinder_violations.append(f"cylinder {u or 'C'!r}: sup {fmt(top)} not on keep branch")
    return report
