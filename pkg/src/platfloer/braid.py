"""Braid words, plat closures, and the classical diagram invariants.

A word in the braid group on an even number of strands is a list of
letters (k, s) with 1 <= k < strands and s = +-1; the letter s{k} is the
counterclockwise half twist of strands k and k+1.  Words act on curves
first letter first (a right action: appending letters acts last).

The plat closure joins strands (2i-1, 2i) by caps at the top and at the
bottom.  Orientations, the writhe, and the exponent sum calibrate the
overall grading shift of the Floer complex.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import NotAKnot, ParseError
from .rational import QQ

_TOKEN = re.compile(r"s(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.strands < 2 or self.strands % 2 != 0:
            raise ParseError(f"strand count must be even and >= 2, got {self.strands}")
        for (k, s) in self.letters:
            if not 1 <= k < self.strands:
                raise ParseError(f"letter s{k} out of range for {self.strands} strands")
            if s not in (1, -1):
                raise ParseError(f"letter sign must be +-1, got {s}")

    # -- parsing and printing -------------------------------------------

    @classmethod
    def parse(cls, text: str, strands: int) -> "BraidWord":
        letters = []
        for tok in text.replace("*", " ").split():
            m = _TOKEN.match(tok)
            if not m:
                raise ParseError(f"bad braid letter {tok!r}")
            k = int(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            s = 1 if e > 0 else -1
            letters.extend([(k, s)] * abs(e))
        return cls(strands, tuple(letters))

    def __str__(self) -> str:
        if not self.letters:
            return ""
        out = []
        i = 0
        while i < len(self.letters):
            k, s = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == (k, s):
                j += 1
            e = (j - i) * s
            out.append(f"s{k}" if e == 1 else f"s{k}^{e}")
            i = j
        return " ".join(out)

    # -- elementary invariants ------------------------------------------

    @property
    def pairs(self) -> int:
        return self.strands // 2

    def exponent_sum(self) -> int:
        return sum(s for (_, s) in self.letters)

    def permutation(self) -> list:
        """perm[i] = bottom position of the strand starting at top position i
        (positions 1-based; index 0 unused)."""
        pos = list(range(self.strands + 1))  # pos[strand] = current position
        for (k, _) in self.letters:
            for i in range(1, self.strands + 1):
                if pos[i] == k:
                    pos[i] = k + 1
                elif pos[i] == k + 1:
                    pos[i] = k
        return pos

    def plat_components(self) -> int:
        """Number of components of the plat closure."""
        parent = list(range(2 * self.strands))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            parent[find(a)] = find(b)

        # nodes: top position i -> i-1, bottom position i -> strands + i - 1
        perm = self.permutation()
        for i in range(1, self.strands + 1, 2):
            union(i - 1, i)  # top caps
            union(self.strands + i - 1, self.strands + i)  # bottom caps
        for i in range(1, self.strands + 1):
            union(i - 1, self.strands + perm[i] - 1)  # strands
        return len({find(a) for a in range(2 * self.strands)})

    def is_knot(self) -> bool:
        return self.plat_components() == 1

    def _strand_directions(self) -> list:
        """Traversal direction (+1 down, -1 up) of each strand (by top position)
        when every component of the plat closure is traversed once."""
        perm = self.permutation()
        inv = [0] * (self.strands + 1)
        for i in range(1, self.strands + 1):
            inv[perm[i]] = i

        def top_partner(i):
            return i + 1 if i % 2 == 1 else i - 1

        direction = [0] * (self.strands + 1)
        for start in range(1, self.strands + 1):
            if direction[start] != 0:
                continue
            i, down = start, 1
            while True:
                direction[i] = down
                if down == 1:
                    b = perm[i]  # arrived at bottom position b
                    b2 = top_partner(b)  # bottom caps pair the same way
                    nxt = inv[b2]
                    # traverse that strand upward unless it is already done
                    if direction[nxt] != 0:
                        break
                    i, down = nxt, -1
                else:
                    t2 = top_partner(i)
                    if direction[t2] != 0:
                        break
                    i, down = t2, 1
        return direction

    def writhe(self) -> int:
        """Writhe of the plat closure diagram.

        A positive letter between co-oriented strands is a negative
        crossing under the counterclockwise half-twist convention.
        """
        direction = self._strand_directions()
        occupant = list(range(self.strands + 1))  # occupant[position] = strand
        w = 0
        for (k, s) in self.letters:
            a, b = occupant[k], occupant[k + 1]
            co = direction[a] == direction[b]
            w += -s if co else s
            occupant[k], occupant[k + 1] = b, a
        return w

    def level_shift(self) -> QQ:
        """Overall grading shift (exponent sum - writhe - strands) / 4."""
        return QQ(self.exponent_sum() - self.writhe() - self.strands, 4)

    # -- plat moves ------------------------------------------------------

    def move_A(self) -> "BraidWord":
        return BraidWord(self.strands, self.letters + ((1, 1),))

    def move_B(self) -> "BraidWord":
        return BraidWord(self.strands,
                         self.letters + ((2, 1), (1, 1), (1, 1), (2, 1)))

    def move_C(self, i: int) -> "BraidWord":
        if not 1 <= i <= self.pairs - 1:
            raise ValueError(f"C move index must be in 1..{self.pairs - 1}")
        extra = ((2 * i, 1), (2 * i - 1, 1), (2 * i + 1, 1), (2 * i, 1))
        return BraidWord(self.strands, self.letters + extra)

    def stabilize(self) -> "BraidWord":
        return BraidWord(self.strands + 2, self.letters + ((self.strands, 1),))

    def destabilize(self) -> "BraidWord":
        if self.strands < 4:
            raise ValueError("cannot destabilize below 2 strands")
        if not self.letters or self.letters[-1] != (self.strands - 2, 1):
            raise ValueError("word does not end with the stabilization letter")
        body = self.letters[:-1]
        if any(k >= self.strands - 2 for (k, _) in body):
            raise ValueError("word touches the last strand pair elsewhere")
        return BraidWord(self.strands - 2, body)

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple((k, -s) for (k, s) in self.letters))

    def require_knot(self):
        c = self.plat_components()
        if c != 1:
            raise NotAKnot(f"plat closure has {c} components")
