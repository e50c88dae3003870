from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from continua.comb import figure1_model, remark13_build, spine_distance
from continua.dendroid import DendroidApprox, segment_intersection
from continua.fans import cantor_fan_profile, fan_geometry, lelek_profile
from continua.probes import (degree_growth, degree_stats, delta_quasicomponents,
                             endpoint_height_usc_check, radially_convex_check, same_class)
from continua.quotient import gehman_decomposition, quotient_tree
from continua.raster import ProbeError, accessibility_probe, rasterize
from continua.separation import HypothesisViolation, separation_curve, verify_separation


def seg_model(a, b):
    return DendroidApprox({"a": a, "b": b}, [("a", "b", ())], "a", frozenset({"b"}))


def t_tree():
    nodes = {"p": (F(1, 2), F(0)), "c": (F(1, 2), F(1, 2)), "l": (F(1, 4), F(3, 4)),
             "r": (F(3, 4), F(3, 4))}
    edges = [("p", "c", ()), ("c", "l", ()), ("c", "r", ())]
    return DendroidApprox(nodes, edges, "p", frozenset({"l", "r"}))


def test_tree_validator():
    assert t_tree().is_tree()
    bad = DendroidApprox({"a": (F(0), F(0)), "b": (F(1), F(0))}, [], "a")
    assert not bad.is_tree()


def test_segment_intersection():
    o, x, y, xy = (F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1))
    assert segment_intersection(o, xy, x, y) == (F(1, 2), F(1, 2))
    assert segment_intersection(o, x, y, xy) is None
    assert segment_intersection(o, x, (F(1, 2), F(0)), (F(2), F(0))) == "overlap"


def test_model_json_roundtrip():
    m = remark13_build(2, 4)
    assert DendroidApprox.from_json(m.to_json()).to_json() == m.to_json()


def test_degree_stats():
    s = degree_stats(seg_model((F(0), F(0)), (F(1), F(0))))
    assert not s.ramifications and len(s.endpoints) == 2
    for n in range(1, 6):
        s = degree_stats(quotient_tree(gehman_decomposition(n)))
        assert set(s.ramifications.values()) <= {3}
        assert len(s.ramifications) == 2**n - 2
        assert s.initial_degree == 2
    fans = {d: fan_geometry(cantor_fan_profile(d)) for d in (2, 3, 4)}
    growth = degree_growth(fans)
    assert [r["max_degree"] for r in growth["by_depth"].values()] == [4, 8, 16]
    assert not growth["bounded"]


def test_radial_convexity():
    assert radially_convex_check(t_tree()).ok
    assert radially_convex_check(fan_geometry(lelek_profile(6))).ok
    hook = DendroidApprox({"p": (F(0), F(0)), "e": (F(1, 2), F(0))},
                          [("p", "e", ((F(1), F(0)), (F(1), F(1, 4))))], "p", frozenset({"e"}))
    assert not radially_convex_check(hook).ok


def test_rasterize_basics():
    empty = rasterize(DendroidApprox.empty(), 8)
    assert empty.occupied.sum() == 0
    s = rasterize(seg_model((F(1, 2), F(1, 4)), (F(1, 2), F(3, 4))), 8)
    cols = np.flatnonzero(s.occupied.any(axis=0))
    # a segment on a grid line touches the closed squares on both sides
    assert len(cols) <= 2 and np.all(np.diff(cols) == 1)
    with pytest.raises(ProbeError):
        rasterize(t_tree(), 4)


def test_rasterize_is_conservative_under_refinement():
    m = fan_geometry(lelek_profile(4))
    a, b = rasterize(m, 64), rasterize(m, 128)
    # every fine occupied cell lies inside a coarse occupied cell
    fy, fx = np.nonzero(b.occupied)
    px = (b.x0 - a.x0) * 128
    py = (b.y0 - a.y0) * 128
    assert px.denominator == 1 and py.denominator == 1
    assert a.occupied[(fy + int(py)) // 2, (fx + int(px)) // 2].all()


def test_access_probe():
    m = fan_geometry(cantor_fan_profile(3))
    for e in sorted(m.endpoints):
        assert accessibility_probe(m, e, 128).found
    with pytest.raises(ProbeError):
        accessibility_probe(m, "missing", 128)
    f1 = figure1_model()
    assert not accessibility_probe(f1, "p", 256).found
    assert accessibility_probe(f1, "e3", 256).found


def test_quasicomponents():
    pts = [(F(0), F(0)), (F(1), F(0))]
    assert len(delta_quasicomponents(pts, F(1, 2))) == 2
    assert len(delta_quasicomponents(pts, F(2))) == 1
    # exact boundary: distance equal to delta does not join
    assert len(delta_quasicomponents(pts, F(1))) == 2


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=2, max_size=40),
       st.integers(1, 10), st.integers(1, 10))
def test_quasicomponents_monotone(raw, d1, d2):
    pts = [(F(x, 40), F(y, 40)) for x, y in raw]
    lo, hi = sorted((F(d1, 40), F(d2, 40)))
    fine, coarse = delta_quasicomponents(pts, lo), delta_quasicomponents(pts, hi)
    for c in fine:
        assert any(set(c) <= set(k) for k in coarse)
    # brute force agreement
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            d2_ = (pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2
            if d2_ < lo * lo:
                assert same_class(fine, i, j)


def test_comb_with_fans():
    m = remark13_build(1, 3)
    assert m.is_tree() and m.degree("p") == 1 and m.degree("e") == 1
    assert {"p", "e"} <= m.endpoints
    m = remark13_build(5, 6)
    assert not m.planarity_problems()
    dists = [spine_distance(m, n) for n in range(1, 6)]
    assert all(a > b for a, b in zip(dists, dists[1:]))


def test_usc_heights():
    assert endpoint_height_usc_check(seg_model((F(0), F(0)), (F(1), F(0)))).ok
    assert endpoint_height_usc_check(fan_geometry(lelek_profile(8))).ok


def test_usc_heights_counterexample():
    # endpoints creeping toward a low endpoint while staying tall
    nodes = {"p": (F(0), F(0)), "e": (F(1, 2), F(1, 8))}
    edges = [("p", "e", ())]
    for k, x in enumerate((F(1, 4), F(1, 16), F(1, 64))):
        nodes[f"a{k}"] = (F(1, 2) + x, F(1, 8))
        edges.append(("p", f"a{k}", ((F(1, 2) + x, F(7, 8)), (F(1, 2) + x + F(1, 256), F(7, 8)))))
    m = DendroidApprox(nodes, edges, "p", frozenset(n for n in nodes if n != "p"))
    rep = endpoint_height_usc_check(m)
    assert not rep.ok
    assert any(v["endpoint"] == "e" for v in rep.plane_violations)


def test_separation_on_t_tree():
    m = t_tree()
    c = separation_curve(m, "l", "r", 128)
    assert c.report.ok and len(c.endpoint_hits) <= 2
    again = verify_separation(m, "l", "r", c.loop, 256)
    assert again.ok
    with pytest.raises(HypothesisViolation):
        separation_curve(m, "l", "c", 128)


def test_separation_on_cantor_fan():
    m = fan_geometry(cantor_fan_profile(2))
    c = separation_curve(m, "e00", "e22", 512)
    assert c.report.ok and "p" not in c.endpoint_hits


def test_verify_rejects_non_separating_loop():
    m = t_tree()
    square = [(F(0), F(0)), (F(1, 8), F(0)), (F(1, 8), F(1, 8)), (F(0), F(1, 8))]
    assert not verify_separation(m, "l", "r", square, 128).ok
