"""Depth-indexed fan profiles.

A profile assigns a height to every cylinder of a fixed depth.  The Cantor fan
is the constant profile 1.  The Lelek approximation refines each cylinder by
keeping the parent height on the ``0`` child and scaling it by a schedule
multiplier on the ``2`` child, so heights only decrease along a branch and
the branch limits fill out every interval below the cylinder's height.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .cantor import word_midpoint, words_at_depth
from .dendroid import DendroidApprox
from .rational import fmt, parse

KEEP_DIGIT = "0"


def _dyadic(x: float, bits: int) -> Fraction:
    return Fraction(round(x * 2**bits), 2**bits)


def _warmup() -> tuple[Fraction, ...]:
    def ladder(k: int) -> Fraction:
        # 2^(-2^-k) rounded to 16 bits; subset products approximate 2^-t on a 2^-7 grid
        return Fraction(1, 2) if k == 0 else _dyadic(2.0 ** -(2.0**-k), 16)

    q, h = Fraction(1, 4), Fraction(1, 2)
    return (ladder(0), q, ladder(1), q, ladder(2), q, ladder(3), h,
            ladder(1), ladder(4), ladder(5), ladder(6), ladder(7))


WARMUP: tuple[Fraction, ...] = _warmup()


def _tour_block_sizes(stage: int) -> int:
    # stage s emits blocks 1..s; block b holds the 2^b - 1 dyadics j/2^b
    return 2 ** (stage + 1) - 2 - stage


@lru_cache(maxsize=None)
def _tour_entry(t: int) -> Fraction:
    stage = 1
    while t >= _tour_block_sizes(stage):
        t -= _tour_block_sizes(stage)
        stage += 1
    for b in range(1, stage + 1):
        size = 2**b - 1
        if t < size:
            return Fraction(t + 1, 2**b)
        t -= size
    raise AssertionError("unreachable")


class MultiplierSchedule:
    """Lazily indexed multipliers in (0, 1).

    The default sequence is a fixed warm-up prefix followed by an alternation
    of ``1 - 2^-i`` with a tour that lists every dyadic ``j/2^k`` in blocks
    and revisits each block forever.  The tour alone makes the sequence dense
    with every value recurring; the warm-up makes shallow profiles usable.
    """

    def __init__(self, prefix: Sequence[Fraction] = WARMUP, *, name: str | None = None):
        self.prefix = tuple(Fraction(x) for x in prefix)
        for x in self.prefix:
            if not 0 < x < 1:
                raise ValueError(f"multiplier {x} outside (0, 1)")
        self.name = name or ("default" if self.prefix == WARMUP else "custom")

    @classmethod
    def default(cls) -> "MultiplierSchedule":
        return cls()

    def __getitem__(self, i: int) -> Fraction:
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        t = i - len(self.prefix)
        if t % 2 == 0:
            return 1 - Fraction(1, 2 ** (t // 2 + 1))
        return _tour_entry(t // 2)

    def take(self, n: int) -> list[Fraction]:
        return [self[i] for i in range(n)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiplierSchedule) and self.prefix == other.prefix

    def __repr__(self) -> str:
        return f"MultiplierSchedule(name={self.name!r}, prefix_len={len(self.prefix)})"

    def density_bound(self, k: int) -> int:
        """An index N such that, for every q in (0, 1), some seq(i) with i <= N is within 2^-k of q."""
        b = k + 1
        pos = sum(_tour_block_sizes(s) for s in range(1, b)) + _tour_block_sizes(b) - 1
        return len(self.prefix) + 2 * pos + 1

    def first_index_within(self, q: Fraction, k: int) -> int:
        tol = Fraction(1, 2**k)
        for i in range(self.density_bound(k) + 1):
            if abs(self[i] - q) < tol:
                return i
        raise AssertionError("density bound violated")


@dataclass(frozen=True)
class StepFunction:
    """Heights for every cylinder of one depth, with coarser levels as maxima."""

    depth: int
    values: Mapping[str, Fraction]
    levels: tuple[Mapping[str, Fraction], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        expected = 2**self.depth
        if len(self.values) != expected or any(len(w) != self.depth for w in self.values):
            raise ValueError(f"profile must assign a value to all {expected} depth-{self.depth} cylinders")
        for w, v in self.values.items():
            if not 0 <= v <= 1:
                raise ValueError(f"height {v} of {w!r} outside [0, 1]")
        if not self.levels:
            object.__setattr__(self, "levels", _max_levels(self.values, self.depth))

    def value(self, word: str) -> Fraction:
        """Height of a cylinder; shallower words get the max over their descendants."""
        if len(word) <= self.depth:
            return self.levels[len(word)][word]
        return self.values[word[: self.depth]]

    def positive_words(self) -> list[str]:
        return [w for w in sorted(self.values) if self.values[w] > 0]

    def descendants(self, word: str) -> Iterator[tuple[str, Fraction]]:
        for w in sorted(self.values):
            if w.startswith(word):
                yield w, self.values[w]

    def is_monotone(self) -> bool:
        for d in range(self.depth):
            for w, v in self.levels[d].items():
                if self.levels[d + 1][w + "0"] > v or self.levels[d + 1][w + "2"] > v:
                    return False
        return True

    def to_json(self) -> dict:
        return {"depth": self.depth,
                "values": {w: fmt(v) for w, v in sorted(self.values.items())}}

    @classmethod
    def from_json(cls, data: Mapping) -> "StepFunction":
        return cls(int(data["depth"]), {w: parse(v) for w, v in data["values"].items()})


def _max_levels(values: Mapping[str, Fraction], depth: int) -> tuple[dict[str, Fraction], ...]:
    levels: list[dict[str, Fraction]] = [dict(values)]
    for _ in range(depth):
        finer = levels[-1]
        coarser: dict[str, Fraction] = {}
        for w, v in finer.items():
            parent = w[:-1]
            if parent not in coarser or v > coarser[parent]:
                coarser[parent] = v
        levels.append(coarser)
    levels.reverse()
    return tuple(levels)


def cantor_fan_profile(depth: int) -> StepFunction:
    return StepFunction(depth, {w: Fraction(1) for w in words_at_depth(depth)})


def lelek_profile(depth: int, schedule: MultiplierSchedule | None = None) -> StepFunction:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    schedule = schedule or MultiplierSchedule.default()
    levels: list[dict[str, Fraction]] = [{"": Fraction(1)}]
    for d in range(depth):
        m = schedule[d]
        nxt: dict[str, Fraction] = {}
        for w, v in levels[-1].items():
            nxt[w + KEEP_DIGIT] = v
            nxt[w + "2"] = v * m
        levels.append(nxt)
    return StepFunction(depth, levels[-1], tuple(levels))


@dataclass
class DensityReport:
    probe_depth: int
    tol: Fraction
    passed: int
    failed: int
    worst_gap: Fraction
    worst_case: tuple[str, Fraction] | None
    failures: list[tuple[str, Fraction, Fraction]]

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "probe_depth": self.probe_depth,
            "tol": fmt(self.tol),
            "passed": self.passed,
            "failed": self.failed,
            "worst_gap": fmt(self.worst_gap),
            "ok": self.ok,
        }


def endpoint_density_check(f: StepFunction, probe_depth: int, tol: Fraction) -> DensityReport:
    """Check that branch heights under every probe cylinder come within ``tol`` of each dyadic target.

    Targets are the multiples of the largest power of two not exceeding
    ``tol`` that lie in ``(tol, v]``, where ``v`` is the cylinder height.
    Branches stop refining at the profile depth and keep their height after.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive: no finite depth certifies exact density")
    if f.depth < probe_depth:
        raise ValueError(f"profile depth {f.depth} is below probe depth {probe_depth}")
    step = Fraction(1)
    while step > tol:
        step /= 2
    groups: dict[str, list[Fraction]] = {}
    for w, v in f.values.items():
        groups.setdefault(w[:probe_depth], []).append(v)
    passed = failed = 0
    worst = Fraction(0)
    worst_case = None
    failures: list[tuple[str, Fraction, Fraction]] = []
    for w in sorted(groups):
        top = f.value(w)
        if top <= 0:
            continue
        vals = sorted(set(groups[w]))
        j = math.floor(tol / step) + 1
        while j * step <= top:
            t = j * step
            gap = _nearest_gap(vals, t)
            if gap > worst:
                worst, worst_case = gap, (w, t)
            if gap <= tol:
                passed += 1
            else:
                failed += 1
                failures.append((w, t, gap))
            j += 1
    return DensityReport(probe_depth, tol, passed, failed, worst, worst_case, failures)


def _nearest_gap(sorted_vals: list[Fraction], t: Fraction) -> Fraction:
    i = bisect.bisect_left(sorted_vals, t)
    best = None
    for k in (i - 1, i):
        if 0 <= k < len(sorted_vals):
            g = abs(sorted_vals[k] - t)
            best = g if best is None or g < best else best
    return best if best is not None else t


FAN_VERTEX = (Fraction(1, 2), Fraction(0))
STEM_BASE = Fraction(1, 4)
STEM_SCALE = Fraction(3, 4)


def top_id(word: str) -> str:
    return "e" + word


def fan_geometry(f: StepFunction) -> DendroidApprox:
    """Plane fan: one stem per positive cylinder, rising over the cylinder midpoint.

    Each branch runs straight from the vertex ``p = (1/2, 0)`` to the stem
    foot ``(m_w, 1/4)`` and then vertically to ``(m_w, 1/4 + 3/4 * height)``.
    Stem heights are recorded in the labels.
    """
    nodes = {"p": FAN_VERTEX}
    edges = []
    labels: dict[str, dict] = {"p": {"kind": "vertex"}}
    endpoints = []
    for w in sorted(f.values):
        v = f.values[w]
        if v <= 0:
            continue
        x = word_midpoint(w)
        nid = top_id(w)
        nodes[nid] = (x, STEM_BASE + STEM_SCALE * v)
        edges.append(("p", nid, ((x, STEM_BASE),)))
        labels[nid] = {"kind": "top", "word": w, "height": fmt(v)}
        endpoints.append(nid)
    return DendroidApprox(nodes, edges, "p", frozenset(endpoints), labels)
