"""Permutations on the points {1..degree}.

Internally images are stored 0-based; everything user-facing (cycle strings,
group files, certificates) is 1-based.  Products compose right to left:
``(p * q)(i) == p(q(i))``, so ``g * x * ~g`` relabels the cycles of ``x`` by ``g``.
"""

from __future__ import annotations

import math
import re
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import ParseError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@total_ordering
class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ParseError(f"not a bijection on {len(images)} points: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: tuple) -> Permutation:
        p = cls.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        """Build from 1-based cycles; points not mentioned are fixed."""
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= degree:
                    raise ParseError(f"point {a} outside 1..{degree}")
                if a in seen:
                    raise ParseError(f"point {a} repeated in cycle notation")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a - 1] = b - 1
        return cls._trusted(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse cycle notation such as ``(1,2,3)(4,5)``; ``()`` is the identity."""
        compact = re.sub(r"\s+", "", text)
        if not compact or _CYCLE_RE.sub("", compact):
            raise ParseError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(compact):
            if not body:
                continue
            try:
                cycles.append([int(tok) for tok in body.split(",")])
            except ValueError:
                raise ParseError(f"malformed cycle {body!r} in {text!r}") from None
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        a = self.images
        return Permutation._trusted(tuple(a[i] for i in other.images))

    def __invert__(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return (~self) ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate_by(self, g: Permutation) -> Permutation:
        """Return ``g * self * g^-1``."""
        out = [0] * len(self.images)
        gi = g.images
        for i, j in enumerate(self.images):
            out[gi[i]] = gi[j]
        return Permutation._trusted(tuple(out))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(c + 1 for c in cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def moved_points(self) -> list[int]:
        """0-based, unlike the cycle notation."""
        return [i for i, j in enumerate(self.images) if i != j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({self})"
