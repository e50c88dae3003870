"""A comb of arcs closing in on an endpoint, and its variant with fans.

The spine runs along the x-axis from ``p = (0, 0)`` to ``e = (1, 0)`` through
ramification points ``x_n = (r^n, 0)``.  The n-th arc leaves ``x_n`` below
the axis, wraps around ``p`` at radius ``r^n`` and runs right to
``e_n = (1, r^n)``.  Every arc encircles ``p``, so ``p`` is sealed off once
the arcs get closer together than the resolution, while each ``e_n`` stays
open to the right.  Replacing an arc by a fan of nested tracks (heights taken
from a Lelek profile) keeps the arcs disjoint and still converging to the spine.
"""
from __future__ import annotations

from fractions import Fraction

from .dendroid import DendroidApprox, Point
from .fans import MultiplierSchedule, lelek_profile
from .rational import fmt

FIGURE1_RATIO = Fraction(3, 4)
REMARK13_RATIO = Fraction(1, 2)


def _track(x: Point, rho: Fraction, r: Fraction, v: Fraction) -> tuple[tuple[Point, ...], Point]:
    # slope of the first leg shrinks with rho, so tracks sharing a vertex fan out without crossing
    drop = rho * rho / (8 * r)
    neg = -rho
    mid = ((x[0] + drop, neg), (neg, neg), (neg, rho))
    return mid, (neg + v * (1 + rho), rho)


def _fan_tracks(n: int, ratio: Fraction, values: list[Fraction]) -> list[tuple[tuple[Point, ...], Point]]:
    """``_track`` for every branch of fan n, in integer arithmetic (same exact results)."""
    a, b = ratio.numerator, ratio.denominator
    an, bn, J = a**n, b**n, len(values)
    den = bn * J                      # rho_j = num_j / den
    lead = an * J
    gap = a ** (n - 1) * (b - a)
    out = []
    for j, v in enumerate(values):
        num = lead + j * gap
        rho = Fraction(num, den)
        neg = -rho
        # x_n + rho^2 / (8 r) over the common denominator 8 a^n den^2
        dd = 8 * an * den * den
        x_leg = Fraction(an * an * 8 * den * den + num * num * bn * bn, bn * dd)
        vn, vd = v.numerator, v.denominator
        tip = Fraction(-num * vd + vn * (den + num), vd * den)
        out.append((((x_leg, neg), (neg, neg), (neg, rho)), (tip, rho)))
    return out


def _spine(arcs: int, ratio: Fraction) -> tuple[dict, list, dict]:
    nodes: dict[str, Point] = {"p": (Fraction(0), Fraction(0)), "e": (Fraction(1), Fraction(0))}
    labels: dict[str, dict] = {"p": {"kind": "initial"}, "e": {"kind": "spine_end"}}
    for n in range(1, arcs + 1):
        nodes[f"x{n}"] = (ratio**n, Fraction(0))
        labels[f"x{n}"] = {"kind": "ramification", "n": n}
    chain = ["p"] + [f"x{n}" for n in range(arcs, 0, -1)] + ["e"]
    edges = [(a, b, ()) for a, b in zip(chain, chain[1:])]
    return nodes, edges, labels


def _build(arcs: int, ratio: Fraction, fans: int, depth: int,
           schedule: MultiplierSchedule | None) -> DendroidApprox:
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    if arcs < 1:
        raise ValueError("need at least one arc")
    nodes, edges, labels = _spine(arcs, ratio)
    endpoints = {"p", "e"}
    profile = lelek_profile(depth, schedule) if fans else None
    for n in range(1, arcs + 1):
        r = ratio**n
        x = nodes[f"x{n}"]
        if n <= fans:
            words = sorted(profile.values)
            values = [profile.values[w] for w in words]
            tracks = _fan_tracks(n, ratio, values)
        else:
            words, values = [""], [Fraction(1)]
            tracks = [_track(x, r, r, Fraction(1))]
        for j, (w, v, (mid, tip)) in enumerate(zip(words, values, tracks)):
            nid = f"e{n}" if j == 0 else f"e{n}.{w}"
            nodes[nid] = tip
            edges.append((f"x{n}", nid, mid))
            labels[nid] = {"kind": "fan_top" if n <= fans else "comb_top", "n": n,
                           "word": w, "height": fmt(v)}
            endpoints.add(nid)
    return DendroidApprox(nodes, edges, "p", frozenset(endpoints), labels)


def figure1_model(arcs: int = 20, ratio: Fraction = FIGURE1_RATIO) -> DendroidApprox:
    """Spine plus ``arcs`` single arcs; ``p`` is the inaccessible endpoint."""
    return _build(arcs, ratio, 0, 0, None)


def remark13_build(k_fans: int, depth: int, arcs: int | None = None,
                   ratio: Fraction = REMARK13_RATIO,
                   schedule: MultiplierSchedule | None = None) -> DendroidApprox:
    """Comb whose first ``k_fans`` arcs are replaced by depth-``depth`` Lelek fans.

    Fan n is attached at ``x_n``; its keep branch still ends at ``e_n`` and
    its other tracks sit between radius ``r^n`` and ``r^(n-1)``.
    """
    if k_fans < 1 or depth < 1:
        raise ValueError("k_fans and depth must be at least 1")
    arcs = max(k_fans, 12) if arcs is None else arcs
    if arcs < k_fans:
        raise ValueError("arcs must be at least k_fans")
    return _build(arcs, ratio, k_fans, depth, schedule)


def spine_distance(m: DendroidApprox, n: int) -> Fraction:
    """Largest sup-distance from the n-th arc or fan to the spine segment."""
    worst = Fraction(0)
    for a, b, mid in m.edges:
        if a != f"x{n}":
            continue
        for q in (*mid, m.nodes[b]):
            dx = -q[0] if q[0] < 0 else (q[0] - 1 if q[0] > 1 else Fraction(0))
            worst = max(worst, dx, abs(q[1]))
    return worst
