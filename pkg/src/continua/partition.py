"""Null partitions of C that refine a base partition and respect marked sets."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cantor import ClopenSet, Partition


class InvalidRequest(ValueError):
    pass


@dataclass(frozen=True)
class NullPartitionRequest:
    base: Partition
    marked: Sequence[ClopenSet] = field(default_factory=tuple)
    epsilon: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        marked = tuple(self.marked)
        if len(marked) > len(self.base):
            raise InvalidRequest(f"{len(marked)} marked sets for {len(self.base)} base pieces")
        object.__setattr__(self, "marked", marked + (ClopenSet.empty(),) * (len(self.base) - len(marked)))

    def problems(self) -> list[str]:
        out = []
        if self.epsilon <= 0:
            out.append(f"epsilon must be positive, got {self.epsilon}")
        out.extend(f"base: {p}" for p in self.base.problems())
        for n, (a, c) in enumerate(zip(self.marked, self.base)):
            if not a.issubset(c):
                out.append(f"marked[{n}] is not inside base[{n}]")
        return out


def _split(s: ClopenSet) -> tuple[ClopenSet, ClopenSet]:
    """Cut a set in two along the digit after its longest common prefix."""
    first, last = s.words[0], s.words[-1]
    k = 0
    while k < min(len(first), len(last)) and first[k] == last[k]:
        k += 1
    prefix = first[:k]
    if len(s) == 1:
        return ClopenSet.cylinder(prefix + "0"), ClopenSet.cylinder(prefix + "2")
    left = ClopenSet([w for w in s.words if w[k] == "0"])
    right = ClopenSet([w for w in s.words if w[k] == "2"])
    return left, right


def blocks(req: NullPartitionRequest) -> list[ClopenSet]:
    """Marked sets (in base order) followed by the leftover cylinders in lexicographic order."""
    out = [a for a in req.marked if a]
    rest: list[str] = []
    for a, c in zip(req.marked, req.base):
        rest.extend((c - a).words)
    out.extend(ClopenSet.cylinder(w) for w in sorted(rest))
    return out


def null_partition(req: NullPartitionRequest) -> Partition:
    """Partition with piece ``j`` of diameter below ``epsilon / (j + 1)``.

    Blocks are consumed in order; a block whose diameter is too large for the
    next free index is cut in two and its halves are retried in place, so the
    output keeps the block order and each piece stays inside one block.
    """
    problems = req.problems()
    if problems:
        raise InvalidRequest("; ".join(problems))
    eps = req.epsilon
    pieces: list[ClopenSet] = []
    queue = deque(blocks(req))
    while queue:
        s = queue.popleft()
        if s.diameter * (len(pieces) + 1) < eps:
            pieces.append(s)
        else:
            left, right = _split(s)
            queue.appendleft(right)
            queue.appendleft(left)
    return Partition(pieces, validate=False)


def witness_problems(p: Partition, eps: Fraction) -> list[str]:
    eps = Fraction(eps)
    return [f"piece {j} has diameter {piece.diameter} >= {eps}/{j + 1}"
            for j, piece in enumerate(p) if piece.diameter * (j + 1) >= eps]


EPSILONS = (Fraction(1), Fraction(1, 3), Fraction(1, 9), Fraction(1, 27))


def random_partition(rng: random.Random, max_depth: int = 5, split: float = 0.6) -> Partition:
    out: list[ClopenSet] = []

    def grow(w: str) -> None:
        if len(w) < max_depth and (not w or rng.random() < split):
            grow(w + "0")
            grow(w + "2")
        else:
            out.append(ClopenSet.cylinder(w))

    grow("")
    # merge a few pieces so base pieces are not always single cylinders
    rng.shuffle(out)
    merged: list[ClopenSet] = []
    for piece in out:
        if merged and rng.random() < 0.3:
            merged[-1] = merged[-1] | piece
        else:
            merged.append(piece)
    return Partition(sorted(merged, key=lambda c: c.words), validate=False)


def random_request(rng: random.Random, max_depth: int = 5,
                   epsilons: Sequence[Fraction] = EPSILONS) -> NullPartitionRequest:
    """A base partition to ``max_depth`` with a random marked subset inside each piece."""
    base = random_partition(rng, max_depth)
    marked = []
    for c in base:
        words = c.refine_to(max(c.max_depth, min(max_depth, c.max_depth + rng.randint(0, 2))))
        marked.append(ClopenSet(w for w in words if rng.random() < 0.4))
    return NullPartitionRequest(base, marked, rng.choice(list(epsilons)))
