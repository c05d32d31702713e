"""Winding and twisting gradings of noodle-fork intersection points.

Three per-point / per-tuple quantities are read off the fork diagram:

  * Q*(z): total winding around the punctures of the closed loop that runs
    down the pushed handle, along the figure eight to z, along the tine to
    its midpoint, up the true handle, and back along the boundary arc of
    the rectangle through the bottom edge.  The handle-and-eight part is
    the same redrawn staircase that P* reads (pstar_path), so both
    gradings see the tightened curve with its canonical lobe orientation.
  * P*(z): half the tangent turning of the path down the pushed handle and
    along the figure eight to z, counted clockwise; the path leaves the
    handle top pointing south and is bent to meet the tine at a right
    angle, so the turning is an even number of quarter turns.
  * T(z_1..z_n): the sum over pairs of half-turns swept by the difference
    of the two straightened paths, each run on a common four-phase clock
    (pushed handle, beta spine, tine walk, true handle).  Moving pieces of
    distinct components never collide on that clock, which is what makes
    the count well defined.

Generators pick one intersection point on each tine with all figure
eights used once; Q and P are the sums of Q* and P* over components, and
R = P - Q + T + s with s = (eps - w - 2n)/4 the plat level shift.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInput, PlatFloerError
from .fork import ForkDiagram, ZPoint
from .geometry import (
    sector_step,
    sweep_half_turns,
    turning_quarters,
    vsub,
    winding_number,
)
from .rational import QQ, Q0

# Frozen against the sigma_2^3 grading tables: P* counts counterclockwise
# half revolutions of the redrawn foot-to-z path positively, T counts
# counterclockwise half twists positively.
P_SIGN = 1
T_SIGN = 1


@dataclass
class Generator:
    index: int
    name: str
    points: tuple
    Q: int = 0
    P: int = 0
    T: int = 0
    Rt: QQ = Q0
    R: QQ = Q0


def _interp(poly: list, f: QQ):
    """Point at parameter f in [0,1] of poly, uniform by segment count."""
    m = len(poly) - 1
    if m == 0:
        return poly[0]
    x = f * m
    i = int(x)
    if i == m:
        i = m - 1
    t = x - i
    a, b = poly[i], poly[i + 1]
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _phase_fracs(la: int, lb: int) -> list:
    fracs = {Q0, QQ(1)}
    for m in (la, lb):
        for c in range(1, m):
            fracs.add(QQ(c, m))
    return sorted(fracs)


@dataclass
class _Chunk:
    """Sector-step summary of a run of difference vectors.

    Chunks concatenate exactly because the quarter-turn count is a sum
    over consecutive vector pairs: the junction contributes one extra
    sector_step(last of one, first of the next)."""

    first: tuple
    last: tuple
    steps: int


def _chunk(vectors: list) -> _Chunk:
    total = 0
    for i, v in enumerate(vectors):
        if v == (Q0, Q0):
            raise DegenerateInput("paths collide at an event time")
        if i:
            total += sector_step(vectors[i - 1], v)
    return _Chunk(vectors[0], vectors[-1], total)


class _SpineSweeps:
    """Prefix sector-step sums along one beta, reused across targets.

    Every spine route is a prefix of one of two master walks along the
    raw beta (from the waist towards either endpoint, then back up the
    far side), possibly followed by one hop to a crossing point.  For a
    fixed external target q the sector steps of (walk - q) accumulate
    along the walk, so one pass serves every intersection point of the
    beta at once."""

    def __init__(self, fd: ForkDiagram, j: int):
        eight = fd.eights[j]
        self.fd = fd
        self.beta = j
        raw = eight.raw
        w = eight.waist
        last = len(raw) - 1
        if not 0 < w < last:
            raise PlatFloerError("beta waist sits at an endpoint")
        self.waist_point = raw[w]
        # master 1 runs out the terminal lobe and back; master 0 the same
        # for the initial lobe.  Positions of a raw vertex on each leg:
        self.m1 = [raw[k] for k in range(w, last + 1)]
        self.m1 += [raw[k] for k in range(last - 1, w, -1)]
        self.m0 = [raw[k] for k in range(w, -1, -1)]
        self.m0 += [raw[k] for k in range(1, w)]
        self._w, self._last = w, last
        self._cums = {}

    def _pos(self, z: ZPoint) -> tuple:
        """(master, truncation position, hop point or None) for z's spine."""
        fd = self.fd
        eight = fd.eights[self.beta]
        w, last = self._w, self._last
        if z.kind == "cap":
            lobe = 1 if fd.beta_ends[self.beta][1] == z.puncture else 0
            return (self.m1, last - w, None) if lobe == 1 else (self.m0, w, None)
        c = fd.events[z.crossing]
        lobe = 1 if c.seg >= w else 0
        r = fd.beta_ends[self.beta][lobe]
        direct = eight.tight_pos[z.hit] < eight.tight_pos[eight.cap_hit[r]]
        if lobe == 1:
            pos = c.seg - w if direct else (last - w) + (last - 1 - c.seg)
            return self.m1, pos, c.point
        pos = w - c.seg - 1 if direct else w + c.seg
        return self.m0, pos, c.point

    def _cum(self, master: list, q: tuple) -> list:
        key = (id(master), q)
        got = self._cums.get(key)
        if got is not None:
            return got
        cum = [0]
        prev = vsub(master[0], q)
        if prev == (Q0, Q0):
            raise DegenerateInput("paths collide at an event time")
        for p in master[1:]:
            v = vsub(p, q)
            if v == (Q0, Q0):
                raise DegenerateInput("paths collide at an event time")
            cum.append(cum[-1] + sector_step(prev, v))
            prev = v
        self._cums[key] = cum
        return cum

    def sweep(self, z: ZPoint, q: tuple) -> _Chunk:
        """Chunk of (spine(z) - q); sign-symmetric, so it also summarizes
        (q - spine(z)) with the same step count and negated ends."""
        master, pos, hop = self._pos(z)
        cum = self._cum(master, q)
        first = vsub(master[0], q)
        end = vsub(master[pos], q)
        steps = cum[pos]
        if hop is not None:
            v = vsub(hop, q)
            if v == (Q0, Q0):
                raise DegenerateInput("paths collide at an event time")
            steps += sector_step(end, v)
            end = v
        return _Chunk(first, end, steps)

    def end_point(self, z: ZPoint) -> tuple:
        master, pos, hop = self._pos(z)
        return hop if hop is not None else master[pos]


class Gradings:
    """Q*, P* per point and Q, P, T, R per generator for one fork diagram."""

    def __init__(self, fd: ForkDiagram):
        self.fd = fd
        self.s_level = fd.word.level_shift()
        self.zQ = {}
        self.zP = {}
        for z in fd.zpoints:
            self.zQ[z.index] = self._qstar(z)
            self.zP[z.index] = self._pstar(z)
        self._t_pairs = {}
        self._handle_chunks = {}
        self._spines = {}
        self.generators = self._enumerate()
        for g in self.generators:
            g.Q = sum(self.zQ[z.index] for z in g.points)
            g.P = sum(self.zP[z.index] for z in g.points)
            g.T = sum(
                self.t_pair(a, b)
                for k, a in enumerate(g.points)
                for b in g.points[k + 1 :]
            )
            g.Rt = QQ(g.P - g.Q + g.T)
            g.R = g.Rt + self.s_level

    # ------------------------------------------------------------------

    def _qstar(self, z: ZPoint) -> int:
        fd = self.fd
        loop = fd.pstar_path(z)
        for p in fd.tine_walk(z)[1:]:
            loop.append(p)
        loop.append(fd.d_point(z.tine))
        # the loop closes itself from d_i back to d_j along the bottom
        # edge, which is exactly the boundary arc between the handle feet
        return sum(winding_number(loop, p) for p in fd.punctures)

    def _pstar(self, z: ZPoint) -> int:
        q = turning_quarters(self.fd.pstar_path(z))
        if q % 2:
            raise PlatFloerError("odd tangent turning on an eight path")
        # entering the terminal-puncture lobe crosses the pinch against
        # the handle germ, which is worth one extra half revolution that
        # the redrawn staircase cannot see
        lobe = self.fd.eights[z.beta].raw_hits[z.hit].lobe
        return P_SIGN * (q // 2) + (1 if lobe == 1 else 0)

    # ------------------------------------------------------------------

    def _phases(self, z: ZPoint) -> list:
        fd = self.fd
        mid = fd.mids[z.tine]
        return [
            fd.handle_path(z.beta),
            fd.spine_path(z),
            fd.spine_walk(z),
            [mid, fd.d_point(z.tine)],
        ]

    def _t_pair_direct(self, za: ZPoint, zb: ZPoint) -> int:
        """Reference count on the synchronized clock, phase by phase.

        Quadratic in the drawn polylines per pair; t_pair reproduces it
        through chunked sweeps and is what callers should use."""
        if za.beta == zb.beta or za.tine == zb.tine:
            raise PlatFloerError("twisting of points sharing a curve")
        diffs = []
        for pa, pb in zip(self._phases(za), self._phases(zb)):
            for f in _phase_fracs(len(pa) - 1, len(pb) - 1):
                diffs.append(vsub(_interp(pa, f), _interp(pb, f)))
        return T_SIGN * sweep_half_turns(diffs)

    def _spine_sweeps(self, j: int) -> _SpineSweeps:
        got = self._spines.get(j)
        if got is None:
            got = self._spines[j] = _SpineSweeps(self.fd, j)
        return got

    def _handle_chunk(self, a: int, b: int) -> _Chunk:
        got = self._handle_chunks.get((a, b))
        if got is None:
            pa, pb = self.fd.handle_path(a), self.fd.handle_path(b)
            diffs = [
                vsub(_interp(pa, f), _interp(pb, f))
                for f in _phase_fracs(len(pa) - 1, len(pb) - 1)
            ]
            got = self._handle_chunks[(a, b)] = _chunk(diffs)
        return got

    def t_pair(self, za: ZPoint, zb: ZPoint) -> int:
        """Half turns swept by the difference of the two four-phase paths.

        Within each phase the two moving points live on disjoint drawn
        objects (two pushed handles, two betas, two tines, two verticals),
        so the difference never vanishes anywhere on the time square and
        the sweep does not care how the two clocks are interleaved.  Each
        phase is therefore run as two single-moving-point legs, which lets
        the handle phase cache per beta pair and the spine phase reuse
        prefix sums along each beta."""
        key = (min(za.index, zb.index), max(za.index, zb.index))
        if key in self._t_pairs:
            return self._t_pairs[key]
        if za.beta == zb.beta or za.tine == zb.tine:
            raise PlatFloerError("twisting of points sharing a curve")
        fd = self.fd
        sa, sb = self._spine_sweeps(za.beta), self._spine_sweeps(zb.beta)
        c1 = self._handle_chunk(za.beta, zb.beta)
        # spine phase: run za's spine against zb's resting start, then
        # zb's spine against za's finished end (signs cancel in pairs)
        qa_end = sa.end_point(za)
        leg_a = sa.sweep(za, sb.waist_point)
        leg_b = sb.sweep(zb, qa_end)
        c2 = _Chunk(
            leg_a.first,
            (-leg_b.last[0], -leg_b.last[1]),
            leg_a.steps + leg_b.steps,
        )
        wa, wb = fd.spine_walk(za), fd.spine_walk(zb)
        c3 = _chunk([vsub(wa[0], wb[0]), vsub(wa[-1], wb[-1])])
        ma, mb = fd.mids[za.tine], fd.mids[zb.tine]
        c4 = _chunk(
            [vsub(ma, mb), vsub(fd.d_point(za.tine), fd.d_point(zb.tine))]
        )
        chunks = [c1, c2, c3, c4]
        q = sum(c.steps for c in chunks)
        for u, v in zip(chunks, chunks[1:]):
            q += sector_step(u.last, v.first)
        for v in (c1.first, c4.last):
            if v[0] != 0 and v[1] != 0:
                raise DegenerateInput("sweep ends off-axis")
        if q % 2 != 0:
            raise DegenerateInput(f"sweep is not a multiple of a half turn: {q}/4")
        val = T_SIGN * (q // 2)
        self._t_pairs[key] = val
        return val

    # ------------------------------------------------------------------

    def _enumerate(self) -> list:
        rows = self.fd.z_by_tine
        gens = []
        pick = []
        used = set()

        def rec(i):
            if i == len(rows):
                name = "".join(z.name for z in pick)
                gens.append(Generator(len(gens), name, tuple(pick)))
                return
            for z in rows[i]:
                if z.beta in used:
                    continue
                used.add(z.beta)
                pick.append(z)
                rec(i + 1)
                pick.pop()
                used.remove(z.beta)

        rec(0)
        return gens

    # ------------------------------------------------------------------

    def by_name(self) -> dict:
        return {g.name: g for g in self.generators}

    def r_multiset(self) -> dict:
        out = {}
        for g in self.generators:
            out[g.R] = out.get(g.R, 0) + 1
        return out
