"""Decompositions of the fan region under a profile into horizontal bands.

A band ``(P, lo, hi, stage)`` stands for the family of classes ``P x {t}``
with ``lo <= t <= hi``; each collapses to a point, so the band becomes an arc
in the quotient.  The root band ``C x {0}`` is the fan vertex.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .cantor import ClopenSet, Partition, mesh, refines, respects, word_midpoint, words_at_depth
from .dendroid import DendroidApprox
from .fans import StepFunction, cantor_fan_profile
from .partition import NullPartitionRequest, null_partition
from .rational import fmt, parse


class InvalidDecomposition(ValueError):
    pass


class UndecidableThreshold(ValueError):
    def __init__(self, word: str, stage: int, depth: int):
        super().__init__(f"undecidable at depth {depth}: threshold for cylinder {word or 'C'!r} "
                         f"at stage {stage} is not uniform over its descendants")
        self.word = word
        self.stage = stage
        self.depth = depth


@dataclass(frozen=True)
class Band:
    piece: ClopenSet
    lo: Fraction
    hi: Fraction
    stage: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not 0 <= self.lo <= self.hi <= 1:
            raise InvalidDecomposition(f"band heights [{self.lo}, {self.hi}] not ordered inside [0, 1]")
        if not self.piece:
            raise InvalidDecomposition("band over an empty piece")

    @property
    def diameter(self) -> Fraction:
        # each class is a horizontal slice, so its size is the piece's
        return self.piece.diameter

    def to_json(self) -> dict:
        return {"piece": self.piece.to_json(), "lo": fmt(self.lo), "hi": fmt(self.hi),
                "stage": self.stage}

    @classmethod
    def from_json(cls, data: Mapping) -> "Band":
        return cls(ClopenSet(data["piece"]), parse(data["lo"]), parse(data["hi"]), int(data["stage"]))


ROOT = Band(ClopenSet.full(), Fraction(0), Fraction(0), 0)


@dataclass
class Decomposition:
    profile: StepFunction
    bands: list[Band]
    root: Band = ROOT

    @property
    def all_bands(self) -> list[Band]:
        return [self.root, *self.bands]

    @property
    def working_depth(self) -> int:
        return max([self.profile.depth] + [b.piece.max_depth for b in self.bands])

    def fibers(self) -> Iterator[tuple[str, list[int]]]:
        """Finest cylinders the bands and the profile distinguish, with covering band indices sorted by height."""
        by_word: dict[str, list[int]] = {}
        deep: list[str] = []
        for i, b in enumerate(self.bands):
            for w in b.piece.words:
                by_word.setdefault(w, []).append(i)
                if len(w) > self.profile.depth:
                    deep.append(w)
        deep.sort()

        def leaves(w: str) -> Iterator[str]:
            k = bisect.bisect_right(deep, w)
            if k < len(deep) and deep[k].startswith(w) and deep[k] != w:
                yield from leaves(w + "0")
                yield from leaves(w + "2")
            else:
                yield w

        for u in sorted(self.profile.values):
            for w in leaves(u):
                hits = [i for k in range(len(w) + 1) for i in by_word.get(w[:k], ())]
                hits.sort(key=lambda i: (self.bands[i].lo, self.bands[i].hi, i))
                yield w, hits

    def to_json(self) -> dict:
        return {"type": "decomposition", "profile": self.profile.to_json(),
                "bands": [b.to_json() for b in self.all_bands]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Decomposition":
        bands = [Band.from_json(b) for b in data["bands"]]
        profile = StepFunction.from_json(data["profile"])
        if bands and bands[0] == ROOT:
            bands = bands[1:]
        return cls(profile, bands)


def gehman_decomposition(n_max: int) -> Decomposition:
    """Bands over the depth-m cylinders at heights ``[1 - 2^(1-m), 1 - 2^-m]`` for m up to ``n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    bands = []
    for m in range(1, n_max + 1):
        lo, hi = 1 - Fraction(2, 2**m), 1 - Fraction(1, 2**m)
        bands.extend(Band(ClopenSet.cylinder(w), lo, hi, m) for w in words_at_depth(m))
    return Decomposition(cantor_fan_profile(n_max), bands)


# -- quotient tree -----------------------------------------------------------


def band_node(i: int) -> str:
    return f"b{i}"


def quotient_tree(d: Decomposition) -> DendroidApprox:
    """Collapse every band to an arc and read off the resulting tree.

    Nodes: the root, one per band (placed at the band top over the middle of
    its piece's hull), one per unidentified gap between bands on a fiber, and
    one leaf per fiber where the profile rises above the last band.
    """
    nodes: dict[str, tuple[Fraction, Fraction]] = {"p": (Fraction(1, 2), Fraction(0))}
    labels: dict[str, dict] = {"p": {"kind": "root"}}
    parent: dict[str, str] = {}
    for i, b in enumerate(d.bands):
        lo, hi = b.piece.hull()
        nid = band_node(i)
        nodes[nid] = ((lo + hi) / 2, b.hi)
        labels[nid] = {"kind": "band", "stage": b.stage, "lo": fmt(b.lo), "hi": fmt(b.hi)}
    endpoints = []
    for w, hits in d.fibers():
        v = d.profile.value(w)
        cur, h = "p", Fraction(0)
        for i in hits:
            b = d.bands[i]
            if b.lo < h:
                raise InvalidDecomposition(f"bands overlap over cylinder {w!r} at heights "
                                           f"[{fmt(b.lo)}, {fmt(h)}]")
            if b.hi > v:
                raise InvalidDecomposition(f"band {i} rises to {fmt(b.hi)} above the profile "
                                           f"value {fmt(v)} of {w!r}")
            if b.lo > h:
                gid = f"g{w}:{i}"
                nodes[gid] = (word_midpoint(w), b.lo)
                labels[gid] = {"kind": "gap", "word": w}
                parent[gid] = cur
                cur = gid
            nid = band_node(i)
            if parent.setdefault(nid, cur) != cur:
                raise InvalidDecomposition(f"band {i} attaches to both {parent[nid]!r} and {cur!r}; "
                                           "the quotient has a cycle")
            cur, h = nid, b.hi
        if v > h:
            lid = "e" + w
            nodes[lid] = (word_midpoint(w), v)
            labels[lid] = {"kind": "top", "word": w, "height": fmt(v)}
            parent[lid] = cur
            endpoints.append(lid)
    orphans = [band_node(i) for i in range(len(d.bands)) if band_node(i) not in parent]
    if orphans:
        raise InvalidDecomposition(f"bands {orphans[:5]} cover no fiber")
    edges = [(parent[n], n, ()) for n in nodes if n in parent]
    return DendroidApprox(nodes, edges, "p", frozenset(endpoints), labels)


# -- USC check ---------------------------------------------------------------


@dataclass
class UscReport:
    delta: Fraction
    counted: int
    counted_by_stage: dict[int, int]
    max_stage_counted: int | None
    overlaps: list[str]
    endpoint_touches: list[str]

    @property
    def ok(self) -> bool:
        return not self.overlaps and not self.endpoint_touches

    def to_json(self) -> dict:
        return {
            "delta": fmt(self.delta),
            "counted": self.counted,
            "counted_by_stage": {str(k): v for k, v in sorted(self.counted_by_stage.items())},
            "max_stage_counted": self.max_stage_counted,
            "overlaps": self.overlaps,
            "endpoint_touches": self.endpoint_touches,
            "ok": self.ok,
        }


def usc_decomposition_check(d: Decomposition, delta: Fraction) -> UscReport:
    """Count classes of diameter at least ``delta`` and look for overlapping or endpoint-touching bands."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    by_stage: dict[int, int] = {}
    for b in d.all_bands:
        if b.diameter >= delta:
            by_stage[b.stage] = by_stage.get(b.stage, 0) + 1
    overlaps: list[str] = []
    touches: list[str] = []
    seen_pairs: set[tuple[int, int]] = set()
    seen_touch: set[int] = set()
    for w, hits in d.fibers():
        v = d.profile.value(w)
        for a, b in zip(hits, hits[1:]):
            if d.bands[b].lo < d.bands[a].hi and (a, b) not in seen_pairs:
                seen_pairs.add((a, b))
                overlaps.append(f"bands {a} and {b} share heights over {w!r}")
        for i in hits:
            if v > 0 and d.bands[i].hi >= v and i not in seen_touch:
                seen_touch.add(i)
                touches.append(f"band {i} reaches the profile value {fmt(v)} over {w!r}")
    return UscReport(delta, sum(by_stage.values()), by_stage, max(by_stage, default=None),
                     overlaps[:50], touches[:50])


# -- staged construction over a profile -------------------------------------


@dataclass
class Stage:
    n: int
    threshold: Fraction
    increment: Fraction
    marked: list[ClopenSet]
    partition: Partition
    phi: dict[str, Fraction]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def incremented(self) -> ClopenSet:
        return ClopenSet([w for a in self.marked for w in a.words])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "threshold": fmt(self.threshold),
            "increment": fmt(self.increment),
            "marked": [a.to_json() for a in self.marked],
            "partition": self.partition.to_json(),
            "phi": {w: fmt(v) for w, v in sorted(self.phi.items())},
            "checks": dict(sorted(self.checks.items())),
        }


@dataclass
class Example20Result:
    profile: StepFunction
    stages: list[Stage]
    decomposition: Decomposition

    @property
    def ok(self) -> bool:
        return all(all(s.checks.values()) for s in self.stages)

    def to_json(self) -> dict:
        return {"type": "example20", "stages": [s.to_json() for s in self.stages],
                "decomposition": self.decomposition.to_json(), "ok": self.ok}


class _Levels:
    """Min and max of the profile below every word up to the profile depth."""

    def __init__(self, f: StepFunction):
        self.f = f
        lo: list[dict[str, Fraction]] = [dict(f.values)]
        for _ in range(f.depth):
            coarser: dict[str, Fraction] = {}
            for w, v in lo[-1].items():
                p = w[:-1]
                if p not in coarser or v < coarser[p]:
                    coarser[p] = v
            lo.append(coarser)
        lo.reverse()
        self.mins = lo

    def bounds(self, w: str) -> tuple[Fraction, Fraction]:
        if len(w) >= self.f.depth:
            v = self.f.values[w[: self.f.depth]]
            return v, v
        return self.mins[len(w)][w], self.f.levels[len(w)][w]

    def superlevel(self, w: str, t: Fraction, depth: int, stage: int) -> list[str]:
        """Words under ``w`` where the profile is at least ``t``, read at ``depth``."""
        lo, hi = self.bounds(w)
        if lo >= t:
            return [w]
        if hi < t:
            return []
        if len(w) >= depth:
            raise UndecidableThreshold(w, stage, depth)
        return self.superlevel(w + "0", t, depth, stage) + self.superlevel(w + "2", t, depth, stage)


def example20_build(n_max: int, profile: StepFunction, working_depth: int | None = None) -> Example20Result:
    """Stages of raised bands over ``profile``.

    At stage n a point of piece k of the previous partition is marked when the
    profile exceeds the previous stage function by ``3/(4n)``; marked points
    rise by ``1/(2n)`` and a null partition of mesh below ``1/n`` refining the
    previous one and respecting the marked sets becomes the next partition.
    Thresholds are read at ``working_depth`` (the profile depth by default);
    a cylinder straddling a threshold at that depth is an error.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    depth = profile.depth if working_depth is None else working_depth
    if depth < 0:
        raise ValueError("working depth must be non-negative")
    levels = _Levels(profile)
    part = Partition.trivial()
    phi_prev = [Fraction(0)]
    stages: list[Stage] = []
    bands: list[Band] = []
    for n in range(1, n_max + 1):
        threshold, increment = Fraction(3, 4 * n), Fraction(1, 2 * n)
        marked = []
        for piece, base in zip(part, phi_prev):
            words = [u for w in piece.words for u in levels.superlevel(w, base + threshold, depth, n)]
            marked.append(ClopenSet(words))
        nxt = null_partition(NullPartitionRequest(part, marked, Fraction(1, n)))
        owner = part._owner_map()
        mark_owner = {w: k for k, a in enumerate(marked) for w in a.words}
        phi_next: list[Fraction] = []
        for piece in nxt:
            w = piece.words[0]
            k = _lookup(owner, w)
            raised = _lookup(mark_owner, w) is not None
            value = phi_prev[k] + (increment if raised else 0)
            phi_next.append(value)
            if raised:
                bands.append(Band(piece, phi_prev[k], value, n))
        stage = Stage(n, threshold, increment, marked, nxt,
                      {w: v for piece, v in zip(nxt, phi_next) for w in piece.words})
        stage.checks = _stage_checks(stage, part, phi_prev, profile)
        stages.append(stage)
        part, phi_prev = nxt, phi_next
    return Example20Result(profile, stages, Decomposition(profile, bands))


def _lookup(owner: Mapping[str, int], word: str) -> int | None:
    for i in range(len(word), -1, -1):
        hit = owner.get(word[:i])
        if hit is not None:
            return hit
    return None


def _stage_checks(stage: Stage, prev: Partition, phi_prev: Sequence[Fraction],
                  f: StepFunction) -> dict[str, bool]:
    n = stage.n
    prev_owner = prev._owner_map()
    monotone = below_profile = margin = avoids = True
    raised = stage.incremented
    for w, v in stage.phi.items():
        before = phi_prev[_lookup(prev_owner, w)]
        words = [w] if len(w) >= f.depth else ClopenSet.cylinder(w).refine_to(f.depth)
        for u in words:
            top = f.value(u)
            monotone &= before <= v
            below_profile &= v <= top
            if raised.covers_word(w):
                margin &= v <= top - Fraction(1, 4 * n)
                if top > 0:
                    avoids &= v < top
    return {
        "threshold": stage.threshold == Fraction(3, 4 * n),
        "increment": stage.increment == Fraction(1, 2 * n),
        "refines": refines(stage.partition, prev),
        "respects": respects(stage.partition, stage.marked),
        "mesh": mesh(stage.partition) < Fraction(1, n),
        "partition_valid": stage.partition.is_valid(),
        "monotone": monotone,
        "below_profile": below_profile,
        "margin": margin,
        "endpoint_avoidance": avoids,
    }
