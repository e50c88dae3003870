"""Exact symbolic subsets of the middle-thirds Cantor set.

A cylinder is a finite word over the ternary digits ``0`` and ``2``; it names
the points of C whose ternary expansion starts with that word.  Clopen sets
are finite unions of cylinders kept in a canonical form (no word covered by
another, no sibling pair left unmerged), so equality is tuple equality.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

DIGITS = "02"


def _check_word(word: str) -> str:
    if any(ch not in DIGITS for ch in word):
        raise ValueError(f"cylinder word {word!r} uses digits outside {{0,2}}")
    return word


def words_at_depth(depth: int) -> list[str]:
    """All cylinder words of the given length, in lexicographic order."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return ["".join(t) for t in product(DIGITS, repeat=depth)]


def word_interval(word: str) -> tuple[Fraction, Fraction]:
    lo = Fraction(0)
    scale = Fraction(1)
    for ch in word:
        scale /= 3
        if ch == "2":
            lo += 2 * scale
    return lo, lo + scale


def word_midpoint(word: str) -> Fraction:
    lo, hi = word_interval(word)
    return (lo + hi) / 2


@dataclass(frozen=True, order=True)
class Cylinder:
    word: str = ""

    def __post_init__(self) -> None:
        _check_word(self.word)

    @property
    def depth(self) -> int:
        return len(self.word)

    @property
    def diameter(self) -> Fraction:
        return Fraction(1, 3**self.depth)

    def interval(self) -> tuple[Fraction, Fraction]:
        return word_interval(self.word)

    def children(self) -> tuple["Cylinder", "Cylinder"]:
        return Cylinder(self.word + "0"), Cylinder(self.word + "2")

    def contains(self, other: "Cylinder") -> bool:
        return other.word.startswith(self.word)

    def disjoint(self, other: "Cylinder") -> bool:
        return not (self.contains(other) or other.contains(self))

    def __str__(self) -> str:
        return self.word or "C"


def _strip_covered(words: Iterable[str]) -> list[str]:
    out: list[str] = []
    for w in sorted(set(words)):
        # a covering ancestor sorts before its descendants
        if out and w.startswith(out[-1]):
            continue
        out.append(w)
    return out


def canonicalize(words: Iterable[str]) -> tuple[str, ...]:
    """Canonical cylinder list: drop covered words, merge sibling pairs bottom-up."""
    current = set(_strip_covered(_check_word(w) for w in words))
    if not current:
        return ()
    by_depth: dict[int, set[str]] = {}
    for w in current:
        by_depth.setdefault(len(w), set()).add(w)
    for d in range(max(by_depth), 0, -1):
        level = by_depth.get(d, set())
        for w in sorted(level):
            if not w.endswith("0"):
                continue
            sib = w[:-1] + "2"
            if sib in level:
                level.discard(w)
                level.discard(sib)
                by_depth.setdefault(d - 1, set()).add(w[:-1])
    return tuple(sorted(w for level in by_depth.values() for w in level))


class ClopenSet:
    """Finite union of cylinders in canonical form."""

    def __init__(self, words: Iterable[str] = (), *, _canonical: bool = False):
        self.words: tuple[str, ...] = tuple(words) if _canonical else canonicalize(words)

    @classmethod
    def empty(cls) -> "ClopenSet":
        return cls((), _canonical=True)

    @classmethod
    def full(cls) -> "ClopenSet":
        return cls(("",), _canonical=True)

    @classmethod
    def cylinder(cls, word: str) -> "ClopenSet":
        return cls((_check_word(word),), _canonical=True)

    def __repr__(self) -> str:
        return f"ClopenSet({list(self.words)!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ClopenSet) and self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def __bool__(self) -> bool:
        return bool(self.words)

    def __iter__(self) -> Iterator[Cylinder]:
        return (Cylinder(w) for w in self.words)

    def __len__(self) -> int:
        return len(self.words)

    @cached_property
    def _wordset(self) -> frozenset[str]:
        return frozenset(self.words)

    @property
    def is_full(self) -> bool:
        return self.words == ("",)

    @property
    def max_depth(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def covers_word(self, word: str) -> bool:
        """True when the cylinder ``word`` lies inside this set."""
        ws = self._wordset
        return any(word[:i] in ws for i in range(len(word) + 1))

    def has_strict_descendant(self, word: str) -> bool:
        i = bisect.bisect_right(self.words, word)
        return i < len(self.words) and self.words[i].startswith(word) and self.words[i] != word

    def meets_word(self, word: str) -> bool:
        return self.covers_word(word) or self.has_strict_descendant(word)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet(self.words + other.words)

    def intersection(self, other: "ClopenSet") -> "ClopenSet":
        keep = [w for w in self.words if other.covers_word(w)]
        keep += [w for w in other.words if self.covers_word(w)]
        return ClopenSet(keep)

    def complement(self) -> "ClopenSet":
        out: list[str] = []

        def walk(w: str) -> None:
            if self.covers_word(w):
                return
            if not self.has_strict_descendant(w):
                out.append(w)
                return
            walk(w + "0")
            walk(w + "2")

        walk("")
        return ClopenSet(out)

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersection(other.complement())

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def issubset(self, other: "ClopenSet") -> bool:
        # canonical forms make containment a per-word ancestor lookup
        return all(other.covers_word(w) for w in self.words)

    def isdisjoint(self, other: "ClopenSet") -> bool:
        return not any(other.meets_word(w) for w in self.words)

    def hull(self) -> tuple[Fraction, Fraction] | None:
        if not self.words:
            return None
        return word_interval(self.words[0])[0], word_interval(self.words[-1])[1]

    @property
    def diameter(self) -> Fraction:
        h = self.hull()
        return Fraction(0) if h is None else h[1] - h[0]

    def measure(self) -> Fraction:
        """Normalized Cantor measure (each depth-n cylinder weighs 2^-n)."""
        return sum((Fraction(1, 2 ** len(w)) for w in self.words), Fraction(0))

    def refine_to(self, depth: int) -> list[str]:
        """Cylinder words of exactly ``depth`` (or deeper, if already finer) covering the set."""
        out: list[str] = []
        for w in self.words:
            if len(w) >= depth:
                out.append(w)
            else:
                out.extend(w + "".join(t) for t in product(DIGITS, repeat=depth - len(w)))
        return out

    def to_json(self) -> list[str]:
        return list(self.words)

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "ClopenSet":
        return cls(data)


def diameter(obj: Cylinder | ClopenSet | str) -> Fraction:
    if isinstance(obj, str):
        obj = Cylinder(obj)
    return obj.diameter


class PartitionError(ValueError):
    pass


class Partition:
    """Ordered finite partition of C into nonempty clopen pieces."""

    def __init__(self, pieces: Iterable[ClopenSet], *, validate: bool = True):
        self.pieces: tuple[ClopenSet, ...] = tuple(pieces)
        if validate:
            problems = self.problems()
            if problems:
                raise PartitionError("; ".join(problems))

    @classmethod
    def uniform(cls, depth: int) -> "Partition":
        return cls((ClopenSet.cylinder(w) for w in words_at_depth(depth)), validate=False)

    @classmethod
    def trivial(cls) -> "Partition":
        return cls([ClopenSet.full()], validate=False)

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self) -> Iterator[ClopenSet]:
        return iter(self.pieces)

    def __getitem__(self, i: int) -> ClopenSet:
        return self.pieces[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self.pieces == other.pieces

    def __repr__(self) -> str:
        return f"Partition({[list(p.words) for p in self.pieces]!r})"

    def problems(self) -> list[str]:
        """Human-readable list of violated partition invariants (empty when valid)."""
        out: list[str] = []
        tagged: list[tuple[str, int]] = []
        for i, piece in enumerate(self.pieces):
            if not piece:
                out.append(f"piece {i} is empty")
            tagged.extend((w, i) for w in piece.words)
        tagged.sort()
        overlaps: set[tuple[int, int]] = set()
        for (w, i), (v, j) in zip(tagged, tagged[1:]):
            # every extension of w sorts directly after w, so one neighbour check suffices
            if v.startswith(w):
                overlaps.add((min(i, j), max(i, j)))
        out.extend(f"pieces {i} and {j} overlap" for i, j in sorted(overlaps))
        if not overlaps:
            total = sum((Fraction(1, 2 ** len(w)) for w, _ in tagged), Fraction(0))
            if total != 1:
                out.append(f"pieces cover measure {total}, not all of C")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def locate(self, word: str) -> int | None:
        """Index of the piece containing cylinder ``word``, or None if it straddles pieces."""
        for i, piece in enumerate(self.pieces):
            if piece.covers_word(word):
                return i
        return None

    def _owner_map(self) -> dict[str, int]:
        return {w: i for i, piece in enumerate(self.pieces) for w in piece.words}

    def to_json(self) -> list[list[str]]:
        return [p.to_json() for p in self.pieces]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]], *, validate: bool = True) -> "Partition":
        return cls((ClopenSet(p) for p in data), validate=validate)


def _owner(owner: dict[str, int], word: str) -> int | None:
    for i in range(len(word), -1, -1):
        hit = owner.get(word[:i])
        if hit is not None:
            return hit
    return None


def refines(p: Partition, q: Partition) -> bool:
    """Every piece of ``p`` sits inside a single piece of ``q``."""
    owner = q._owner_map()
    for piece in p:
        homes = {_owner(owner, w) for w in piece.words}
        if len(homes) != 1 or None in homes:
            return False
    return True


def respects(p: Partition, members: Sequence[ClopenSet]) -> bool:
    """Every piece of ``p`` is inside or disjoint from each member."""
    owner: dict[str, int] = {}
    for j, m in enumerate(members):
        for w in m.words:
            owner[w] = j
    all_words = sorted(owner)
    for piece in p:
        inside: set[int] = set()
        outside = False
        for w in piece.words:
            j = _owner(owner, w)
            if j is not None:
                inside.add(j)
                continue
            k = bisect.bisect_right(all_words, w)
            if k < len(all_words) and all_words[k].startswith(w):
                return False
            outside = True
        if len(inside) > 1 or (inside and outside):
            return False
    return True


def mesh(p: Partition) -> Fraction:
    return max((piece.diameter for piece in p), default=Fraction(0))
