"""Finite plane trees standing in for dendroids.

Nodes carry exact rational coordinates; an edge is a straight segment or a
polyline through interior points.  The initial point ``p`` roots the tree and
the marked endpoints are a subset of the degree-one nodes.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .rational import fmt, fmt_point, parse_point

Point = tuple[Fraction, Fraction]
Edge = tuple[str, str, tuple[Point, ...]]


class ModelError(ValueError):
    pass


def _pt(p) -> Point:
    if type(p) is tuple and type(p[0]) is Fraction and type(p[1]) is Fraction:
        return p
    return Fraction(p[0]), Fraction(p[1])


@dataclass
class DendroidApprox:
    nodes: dict[str, Point]
    edges: list[Edge]
    initial: str | None
    endpoints: frozenset[str] = frozenset()
    labels: dict[str, dict] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.nodes = {k: _pt(v) for k, v in self.nodes.items()}
        self.edges = [(a, b, tuple(_pt(q) for q in (rest[0] if rest else ())))
                      for a, b, *rest in self.edges]
        self.endpoints = frozenset(self.endpoints)
        for a, b, _ in self.edges:
            for n in (a, b):
                if n not in self.nodes:
                    raise ModelError(f"edge references unknown node {n!r}")
        if self.initial is not None and self.initial not in self.nodes:
            raise ModelError(f"initial point {self.initial!r} is not a node")
        unknown = self.endpoints - self.nodes.keys()
        if unknown:
            raise ModelError(f"endpoint marks on unknown nodes {sorted(unknown)}")

    @classmethod
    def empty(cls) -> "DendroidApprox":
        return cls({}, [], None)

    # -- graph structure -------------------------------------------------

    @cached_property
    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    @cached_property
    def _edge_index(self) -> dict[tuple[str, str], int]:
        out = {}
        for i, (a, b, _) in enumerate(self.edges):
            out[(a, b)] = i
            out[(b, a)] = i
        return out

    def degree(self, node: str) -> int:
        return len(self.adjacency[node])

    def tree_problems(self) -> list[str]:
        problems: list[str] = []
        if not self.nodes:
            return problems
        if len(self.edges) != len(self.nodes) - 1:
            problems.append(f"{len(self.edges)} edges for {len(self.nodes)} nodes")
        pairs = set()
        for a, b, _ in self.edges:
            if a == b:
                problems.append(f"loop edge at {a!r}")
            key = (min(a, b), max(a, b))
            if key in pairs:
                problems.append(f"repeated edge {key}")
            pairs.add(key)
        start = self.initial if self.initial is not None else next(iter(self.nodes))
        seen = {start}
        queue = deque([start])
        while queue:
            n = queue.popleft()
            for m in self.adjacency[n]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        if len(seen) != len(self.nodes):
            problems.append(f"{len(self.nodes) - len(seen)} nodes unreachable from {start!r}")
        bad = sorted(e for e in self.endpoints if self.degree(e) != 1)
        if bad:
            problems.append(f"marked endpoints of degree != 1: {bad[:5]}")
        return problems

    def is_tree(self) -> bool:
        return not self.tree_problems()

    @cached_property
    def _rooted(self) -> tuple[dict[str, str | None], dict[str, int]]:
        if self.initial is None:
            raise ModelError("model has no initial point")
        parent: dict[str, str | None] = {self.initial: None}
        depth = {self.initial: 0}
        queue = deque([self.initial])
        while queue:
            n = queue.popleft()
            for m in self.adjacency[n]:
                if m not in parent:
                    parent[m] = n
                    depth[m] = depth[n] + 1
                    queue.append(m)
        return parent, depth

    @property
    def parent(self) -> dict[str, str | None]:
        return self._rooted[0]

    def path_to_root(self, node: str) -> list[str]:
        parent = self.parent
        if node not in parent:
            raise ModelError(f"node {node!r} is not connected to the initial point")
        out = [node]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    def path(self, a: str, b: str) -> list[str]:
        """Node sequence of the unique arc from ``a`` to ``b``."""
        up_a = self.path_to_root(a)
        up_b = self.path_to_root(b)
        on_b = {n: i for i, n in enumerate(up_b)}
        for i, n in enumerate(up_a):
            if n in on_b:
                return up_a[: i + 1] + list(reversed(up_b[: on_b[n]]))
        raise ModelError("nodes lie in different components")

    def meet(self, a: str, b: str) -> str:
        """The point q with arc(q, p) equal to arc(a, p) intersected with arc(b, p)."""
        on_b = set(self.path_to_root(b))
        for n in self.path_to_root(a):
            if n in on_b:
                return n
        raise ModelError("nodes lie in different components")

    def subtree_leaves(self, node: str) -> list[str]:
        """Leaves below ``node`` (away from the initial point), in deterministic order."""
        parent = self.parent
        out = []
        stack = [node]
        while stack:
            n = stack.pop()
            kids = sorted(m for m in self.adjacency[n] if parent.get(m) == n)
            if not kids:
                out.append(n)
            stack.extend(reversed(kids))
        return out

    # -- geometry ---------------------------------------------------------

    def edge_points(self, a: str, b: str) -> list[Point]:
        """Full polyline of the edge between ``a`` and ``b``, oriented from ``a``."""
        i = self._edge_index[(a, b)]
        ea, eb, mid = self.edges[i]
        pts = [self.nodes[ea], *mid, self.nodes[eb]]
        return pts if ea == a else pts[::-1]

    def path_points(self, nodes: Sequence[str]) -> list[Point]:
        if len(nodes) == 1:
            return [self.nodes[nodes[0]]]
        pts: list[Point] = []
        for a, b in zip(nodes, nodes[1:]):
            seg = self.edge_points(a, b)
            pts.extend(seg if not pts else seg[1:])
        return pts

    def segments(self) -> Iterator[tuple[Point, Point, int]]:
        for i, (a, b, mid) in enumerate(self.edges):
            pts = [self.nodes[a], *mid, self.nodes[b]]
            for s, t in zip(pts, pts[1:]):
                yield s, t, i

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
        pts = list(self.nodes.values())
        for _, _, mid in self.edges:
            pts.extend(mid)
        if not pts:
            return None
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return min(xs), min(ys), max(xs), max(ys)

    def edge_length(self, a: str, b: str) -> float:
        pts = self.edge_points(a, b)
        return sum(math.dist(map(float, s), map(float, t)) for s, t in zip(pts, pts[1:]))

    @cached_property
    def root_distance(self) -> dict[str, float]:
        """Arc length along the tree from each node to the initial point."""
        parent, _ = self._rooted
        order = sorted(parent, key=lambda n: self._rooted[1][n])
        dist: dict[str, float] = {}
        for n in order:
            par = parent[n]
            dist[n] = 0.0 if par is None else dist[par] + self.edge_length(par, n)
        return dist

    def subdivided(self, max_length: Fraction | None = None) -> "DendroidApprox":
        """Same tree with polyline vertices (and optional splits of long segments) promoted to nodes."""
        nodes = dict(self.nodes)
        edges: list[Edge] = []
        for a, b, mid in self.edges:
            pts = [self.nodes[a], *mid, self.nodes[b]]
            if max_length is not None:
                pts = _split_long(pts, Fraction(max_length))
            ids = [a]
            for k, q in enumerate(pts[1:-1]):
                nid = f"{a}~{b}#{k}"
                nodes[nid] = q
                ids.append(nid)
            ids.append(b)
            edges.extend((s, t, ()) for s, t in zip(ids, ids[1:]))
        return DendroidApprox(nodes, edges, self.initial, self.endpoints, dict(self.labels))

    def planarity_problems(self, limit: int = 20) -> list[str]:
        """Exact check that edges meet only at shared nodes."""
        segs = list(self.segments())
        if len(segs) < 2:
            return []
        node_at: dict[Point, str] = {}
        for n, q in self.nodes.items():
            node_at.setdefault(q, n)
        ends = [(self.edges[i][0], self.edges[i][1]) for i in range(len(self.edges))]
        problems: list[str] = []
        for s, t in _candidate_pairs(segs):
            (a1, a2, ei), (b1, b2, ej) = segs[s], segs[t]
            hit = segment_intersection(a1, a2, b1, b2)
            if hit is None:
                continue
            if hit == "overlap":
                problems.append(f"segments of edges {ends[ei]} and {ends[ej]} overlap")
            else:
                if ei == ej and abs(s - t) == 1 and hit in (a1, a2) and hit in (b1, b2):
                    continue
                node = node_at.get(hit)
                if ei != ej and node is not None and node in ends[ei] and node in ends[ej]:
                    continue
                problems.append(f"edges {ends[ei]} and {ends[ej]} cross at "
                                f"({fmt(hit[0])}, {fmt(hit[1])})")
            if len(problems) >= limit:
                break
        return problems

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        edges = []
        for a, b, mid in self.edges:
            edges.append([a, b, [fmt_point(q) for q in mid]] if mid else [a, b])
        return {
            "type": "dendroid",
            "nodes": {n: fmt_point(q) for n, q in sorted(self.nodes.items())},
            "edges": edges,
            "initial": self.initial,
            "endpoints": sorted(self.endpoints),
            "labels": {k: self.labels[k] for k in sorted(self.labels)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DendroidApprox":
        try:
            nodes = {str(k): parse_point(v) for k, v in data["nodes"].items()}
            edges = []
            for i, e in enumerate(data["edges"]):
                if not isinstance(e, list) or len(e) not in (2, 3):
                    raise ModelError(f"edges[{i}]: expected [a, b] or [a, b, polyline]")
                mid = tuple(parse_point(q) for q in e[2]) if len(e) == 3 else ()
                edges.append((str(e[0]), str(e[1]), mid))
            return cls(nodes, edges, data.get("initial"), frozenset(data.get("endpoints", [])),
                       dict(data.get("labels", {})))
        except KeyError as exc:
            raise ModelError(f"missing field {exc.args[0]!r}") from exc


def _split_long(pts: list[Point], max_length: Fraction) -> list[Point]:
    out = [pts[0]]
    for s, t in zip(pts, pts[1:]):
        dx, dy = t[0] - s[0], t[1] - s[1]
        n = max(1, math.ceil(math.hypot(float(dx), float(dy)) / float(max_length)))
        out.extend((s[0] + dx * k / n, s[1] + dy * k / n) for k in range(1, n + 1))
    return out


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    return _cross(a, b, p) == 0 and _on_segment(p, a, b)


def segment_intersection(a1: Point, a2: Point, b1: Point, b2: Point):
    """None, the single intersection point, or ``"overlap"`` for collinear overlap."""
    d1 = _cross(b1, b2, a1)
    d2 = _cross(b1, b2, a2)
    d3 = _cross(a1, a2, b1)
    d4 = _cross(a1, a2, b2)
    if d1 == d2 == 0:
        # collinear: project on the dominant axis
        key = 0 if (a1[0] != a2[0] or b1[0] != b2[0]) else 1
        lo = max(min(a1[key], a2[key]), min(b1[key], b2[key]))
        hi = min(max(a1[key], a2[key]), max(b1[key], b2[key]))
        if lo > hi:
            return None
        if lo < hi:
            return "overlap"
        for q in (a1, a2):
            if q[key] == lo and _on_segment(q, b1, b2):
                return q
        return None
    if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0) or (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
        return None
    if d1 == 0:
        return a1
    if d2 == 0:
        return a2
    if d3 == 0:
        return b1
    if d4 == 0:
        return b2
    t = d1 / (d1 - d2)
    return a1[0] + t * (a2[0] - a1[0]), a1[1] + t * (a2[1] - a1[1])


def _candidate_pairs(segs: list[tuple[Point, Point, int]]) -> Iterable[tuple[int, int]]:
    boxes = []
    for a, b, _ in segs:
        boxes.append((float(min(a[0], b[0])), float(min(a[1], b[1])),
                      float(max(a[0], b[0])), float(max(a[1], b[1]))))
    x0 = min(b[0] for b in boxes)
    y0 = min(b[1] for b in boxes)
    span = max(max(b[2] for b in boxes) - x0, max(b[3] for b in boxes) - y0, 1e-12)
    n = max(1, int(math.sqrt(len(segs))))
    h = span / n
    buckets: dict[tuple[int, int], list[int]] = {}
    for k, (bx0, by0, bx1, by1) in enumerate(boxes):
        i0 = int((bx0 - x0) / h - 1e-9)
        i1 = int((bx1 - x0) / h + 1e-9)
        j0 = int((by0 - y0) / h - 1e-9)
        j1 = int((by1 - y0) / h + 1e-9)
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                buckets.setdefault((i, j), []).append(k)
    seen: set[tuple[int, int]] = set()
    for members in buckets.values():
        for u in range(len(members)):
            for v in range(u + 1, len(members)):
                pair = (members[u], members[v])
                if pair not in seen:
                    seen.add(pair)
                    yield pair
