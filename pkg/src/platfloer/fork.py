"""Fork diagrams pushed through a plat braid word.

The standard fork for b in B_{2n} lives in the rectangle
[0, 2n+1] x [-H, H] with H = n+1:

  * punctures mu_r = (r, 0) for r = 1..2n,
  * tines alpha_i = [(2i-1, 0), (2i, 0)] with midpoints m_i,
  * handle feet d_i = (2i - 1/2, -H) on the bottom edge, each handle
    rising vertically from its foot through the axis to the waist,
  * beta_j = b(alpha_j) and pushed handles b(h_j).

Braid letters act through the PL half-twists in twist.py, so every pushed
curve is an exact rational polyline.  The beta seeds are bulged slightly
above the axis (apex over the midpoint) so that raw curves only meet the
axis transversally; the bulge height is retried on a ladder whenever a
coincidence shows up.

The raw polylines are wiggly, so their crossings with the axis are
recorded (on tines and in the gaps between them alike) and then tightened.
Since the punctures sit on the axis itself, the disk between a curve arc
and the axis stretch joining two crossings adjacent along the curve in the
same puncture-free interval never traps a puncture: such a pair always
bounds an empty bigon and cancels, and the first or last crossing of a
beta cancels against its endpoint whenever it lies in one of the two
intervals meeting that puncture.  Tightening is therefore pure word
reduction.  A cancellation whose slid arc carries the waist presses the
waist onto the other side of the axis, and the pushed handle attached
there gains a crossing of its own; these flips are tracked so the handle
word and the final waist side come out right.

Figure eights are offset doubles of the raw betas pinched at the waist
(the tracked image of the tine midpoint).  Their axis crossings cluster in
pairs around the crossings of the underlying beta (plus one pair wrapping
each endpoint puncture); an exact rescan certifies this and the offset
width is halved until it does.  The tightened crossing sequence of an
eight is not reduced but assembled: it doubles the tightened beta, and
each lobe is then oriented canonically (see _assemble_sequence).  Raw
positions of the surviving crossings are honest (a bigon slide only moves
the cancelled material), so the assembled sequence carries raw
coordinates.

Winding numbers (the Q grading, prime assignment) and tangent turning
(the P grading) are both read off clean redrawn paths built from the
tightened crossing sequences: axis-parallel staircases where every arc
between consecutive crossings turns by exactly a half revolution.  The
raw offset curves only certify the combinatorics; their leftover wiggles
(cancelled crossing pairs are kept in the drawing) and their drawing
orientation must not leak into a grading.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .braid import BraidWord
from .errors import DegenerateInput, IterationCapExceeded, PlatFloerError
from .geometry import (
    Q0,
    cross,
    pt,
    vadd,
    vscale,
    vsub,
    winding_number,
)
from .rational import QQ
from .twist import apply_word
from . import geometry

ITER_CAP = int(os.environ.get("PLATFLOER_ITER_CAP", "1000000"))

# Letters for interior crossing pairs, assigned scanning tines west to east.
# e is reserved for generator components, x for punctures, i/j/n for indices.
_LETTERS = "stuvwabcdfghklmopqr"

# Drawing side of the figure-eight offset strands.  This only picks which
# copy of the doubled beta gets drawn first; the assembled sequence is
# re-oriented lobe by lobe afterwards (each lobe winds counterclockwise
# around its endpoint puncture), so nothing downstream depends on the value.
CHIRALITY = 1


def _pair_letter(k: int) -> str:
    if k < len(_LETTERS):
        return _LETTERS[k]
    return _LETTERS[k % len(_LETTERS)] + str(k // len(_LETTERS))


@dataclass
class AxisEvent:
    """A transverse crossing of a pushed curve with the axis.

    interval indexes the puncture-free stretch [k, k+1] of the axis;
    odd k is the span of tine (k-1)//2, even k is a gap.  up means the
    curve passes from below to above.
    """

    index: int
    beta: int
    interval: int
    seg: int
    t: QQ
    point: tuple
    up: bool
    alive: bool = True
    name: str = ""

    @property
    def bpos(self):
        return (self.seg, self.t)

    @property
    def x(self):
        return self.point[0]

    @property
    def tine(self):
        return (self.interval - 1) // 2 if self.interval % 2 == 1 else None


@dataclass
class HandleLetter:
    """One axis crossing of a tightened pushed handle.

    flip marks a crossing created by a waist flip rather than found on the
    raw handle; its x is the midpoint of the axis stretch the waist was
    pressed against, which is where the dragged tail honestly crosses.
    """

    interval: int
    up: bool
    x: QQ
    flip: bool = False


@dataclass
class ZPoint:
    """One intersection of a figure eight with a tine.

    kind is "pair" for one half of a doubled crossing (then crossing/prime
    are set) or "cap" for the single point near an endpoint puncture (then
    puncture is the 0-based index of that puncture).  hit indexes the
    figure eight's raw axis-crossing list.
    """

    index: int
    name: str
    tine: int
    beta: int
    kind: str
    x: QQ
    seg: int
    point: tuple
    hit: int
    crossing: int | None = None
    prime: bool = False
    puncture: int | None = None
    strand: str = ""


class ForkDiagram:
    """Pushed fork data with tightened axis-crossing records."""

    def __init__(self, word: BraidWord):
        self.word = word
        self.n = word.strands // 2
        self.H = QQ(self.n + 1)
        self.punctures = [pt(QQ(r), Q0) for r in range(1, 2 * self.n + 1)]
        self.spans = [(QQ(2 * i + 1), QQ(2 * i + 2)) for i in range(self.n)]
        self.mids = [pt(QQ(4 * i + 3, 2), Q0) for i in range(self.n)]
        self.betas: list[list] = []
        self.handles: list[list] = []
        self.waists: list[int] = []
        self.waist_side: list[int] = []
        self.beta_ends: list[tuple] = []
        self.events: list[AxisEvent] = []
        self.handle_events: list[list] = []
        self.by_beta: list[list] = []
        self.by_tine: list[list] = []
        self.eights: list["Eight"] = []
        self.zpoints: list[ZPoint] = []
        self.z_by_tine: list[list] = []

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def build(cls, word: BraidWord) -> "ForkDiagram":
        word.require_knot()
        bulge = QQ(1, 64)
        last = None
        for _ in range(24):
            try:
                fd = cls(word)
                fd._build_at(bulge)
                return fd
            except DegenerateInput as exc:
                last = exc
                bulge = bulge / 2
        raise DegenerateInput(f"perturbation ladder exhausted: {last}")

    def _build_at(self, bulge: QQ):
        n = self.n
        letters = self.word.letters
        for i in range(n):
            x0, x1 = QQ(2 * i + 1), QQ(2 * i + 2)
            mx = self.mids[i][0]
            seed = [
                pt(x0, Q0),
                pt(x0 + QQ(1, 8), bulge),
                pt(mx, bulge),
                pt(x1 - QQ(1, 8), bulge),
                pt(x1, Q0),
            ]
            pts, tracked = apply_word(seed, letters, keep=(2,))
            self.betas.append(pts)
            self.waists.append(tracked[0])
            # A vertical handle through a twist center hits every ring
            # edge at its midpoint, and the ring rotations carry those
            # midpoints exactly onto the axis.  Bend the handle slightly
            # east below the twist disks (which reach y = -1); the bend
            # scales with the bulge so the retry ladder varies it.
            hseed = [pt(mx, -self.H), pt(mx + bulge / 2, -QQ(9, 8)),
                     pt(mx, bulge)]
            hpts, _ = apply_word(hseed, letters, keep=())
            if hpts[0] != pt(mx, -self.H):
                raise PlatFloerError("handle boundary end moved by a twist support")
            if hpts[-1] != pts[tracked[0]]:
                raise PlatFloerError("handle foot detached from the waist")
            self.handles.append(hpts)
        self._index_endpoints()
        self._scan_events()
        self._tighten()
        self._name_crossings()
        self._build_eights()

    def _index_endpoints(self):
        where = {}
        for r, p in enumerate(self.punctures):
            where[p] = r
        seen = set()
        for j, poly in enumerate(self.betas):
            w = self.waists[j]
            if not 0 < w < len(poly) - 1:
                raise PlatFloerError("waist tracked to a beta endpoint")
            try:
                ends = (where[poly[0]], where[poly[-1]])
            except KeyError:
                raise PlatFloerError("beta endpoint left the puncture set")
            self.beta_ends.append(ends)
            seen.update(ends)
        if len(seen) != 2 * self.n:
            raise PlatFloerError("beta endpoints do not cover the punctures")

    def _interval_of(self, x: QQ) -> int:
        """Index k of the open stretch (k, k+1) containing x; punctures and
        the outer walls are window boundaries, never crossing positions."""
        k = int(x)
        if QQ(k) == x:
            raise DegenerateInput("axis crossing at a puncture or wall")
        if not 0 <= k <= 2 * self.n:
            raise PlatFloerError("curve escaped the rectangle")
        return k

    def _scan_polyline(self, poly: list, owner: int, out: list,
                       endpoints_on_axis: bool):
        last = len(poly) - 1
        for s in range(last):
            p, q = poly[s], poly[s + 1]
            if p[1] == 0 and not (endpoints_on_axis and s == 0):
                raise DegenerateInput("curve vertex on the axis")
            if p[1] == 0 and q[1] == 0:
                raise DegenerateInput("curve rides along the axis")
            if (p[1] > 0 and q[1] < 0) or (p[1] < 0 and q[1] > 0):
                t = p[1] / (p[1] - q[1])
                x = p[0] + t * (q[0] - p[0])
                out.append(
                    AxisEvent(
                        index=-1,
                        beta=owner,
                        interval=self._interval_of(x),
                        seg=s,
                        t=t,
                        point=pt(x, Q0),
                        up=p[1] < 0,
                    )
                )
        if poly[last][1] == 0 and not endpoints_on_axis:
            raise DegenerateInput("curve vertex on the axis")

    def _scan_events(self):
        for j, poly in enumerate(self.betas):
            if poly[self.waists[j]][1] == 0:
                raise DegenerateInput("waist landed on the axis")
            self._scan_polyline(poly, j, self.events, endpoints_on_axis=True)
        for idx, e in enumerate(self.events):
            e.index = idx
        self.by_beta = [[] for _ in range(self.n)]
        for e in self.events:
            self.by_beta[e.beta].append(e.index)
        for lst in self.by_beta:
            lst.sort(key=lambda ei: self.events[ei].bpos)
        xs = sorted(self.events, key=lambda e: e.x)
        for a, b in zip(xs, xs[1:]):
            if a.x == b.x:
                raise DegenerateInput("two crossings share an axis position")
        self.handle_events = []
        for j, poly in enumerate(self.handles):
            ev: list = []
            self._scan_polyline(poly, j, ev, endpoints_on_axis=False)
            ev.sort(key=lambda e: e.bpos)
            self.handle_events.append(ev)

    # ------------------------------------------------------------------
    # tightening

    def _alive_on_beta(self, j: int) -> list:
        return [ei for ei in self.by_beta[j] if self.events[ei].alive]

    def _alive_crossings(self, i: int) -> list:
        """Alive span events on tine i, west to east."""
        out = [e for e in self.events if e.alive and e.tine == i]
        out.sort(key=lambda e: e.x)
        return [e.index for e in out]

    def _flip(self, j: int, interval: int, arc_above: bool, bounds: tuple):
        """The arc about to slide across the axis carries the waist of
        beta j; flip its side and remember where it was pressed."""
        if (self.waist_side[j] == 1) != arc_above:
            raise PlatFloerError("waist side disagrees with its arc")
        self.waist_side[j] = -self.waist_side[j]
        self.flips[j].append((interval, self.waist_side[j] == 1, bounds))

    def _tighten(self):
        self.waist_side = []
        self.flips = [[] for _ in range(self.n)]
        for j in range(self.n):
            y = self.betas[j][self.waists[j]][1]
            self.waist_side.append(1 if y > 0 else -1)
        steps = 0
        changed = True
        while changed:
            changed = False
            for j in range(self.n):
                steps += 1
                if steps > ITER_CAP:
                    raise IterationCapExceeded("tightening exceeded the cap")
                wpos = (self.waists[j], Q0)
                order = self._alive_on_beta(j)
                if order:
                    first = self.events[order[0]]
                    r = self.beta_ends[j][0]
                    if first.interval in (r, r + 1):
                        first.alive = False
                        if wpos < first.bpos:
                            self._flip(j, first.interval, not first.up,
                                       (QQ(r + 1), first.x))
                        changed = True
                        continue
                if order:
                    lastev = self.events[order[-1]]
                    r = self.beta_ends[j][1]
                    if lastev.interval in (r, r + 1):
                        lastev.alive = False
                        if wpos > lastev.bpos:
                            self._flip(j, lastev.interval, lastev.up,
                                       (lastev.x, QQ(r + 1)))
                        changed = True
                        continue
                for u, v in zip(order, order[1:]):
                    a, b = self.events[u], self.events[v]
                    if a.interval != b.interval:
                        continue
                    if a.up == b.up:
                        raise PlatFloerError(
                            "consecutive crossings on one side of the axis"
                        )
                    a.alive = False
                    b.alive = False
                    if a.bpos < wpos < b.bpos:
                        self._flip(j, a.interval, a.up, (a.x, b.x))
                    changed = True
                    break
        self._reduce_handles()

    def _reduce_handles(self):
        """Handle words: raw crossings, then one letter per waist flip
        (the tail is dragged along), reduced the same combinatorial way."""
        self._tail_letters = []
        reduced = []
        for j in range(self.n):
            word = [HandleLetter(e.interval, e.up, e.x)
                    for e in self.handle_events[j]]
            for interval, up, bounds in self.flips[j]:
                word.append(HandleLetter(interval, up,
                                         (bounds[0] + bounds[1]) / 2,
                                         flip=True))
            self._tail_letters.append(word[-1] if self.flips[j] else None)
            steps = 0
            changed = True
            while changed:
                changed = False
                for k in range(len(word) - 1):
                    steps += 1
                    if steps > ITER_CAP:
                        raise IterationCapExceeded(
                            "handle reduction exceeded the cap"
                        )
                    if word[k].interval != word[k + 1].interval:
                        continue
                    if word[k].up == word[k + 1].up:
                        raise PlatFloerError(
                            "handle crossings fail to alternate"
                        )
                    del word[k : k + 2]
                    changed = True
                    break
            reduced.append(word)
        self.handle_events = reduced

    def _name_crossings(self):
        k = 0
        for i in range(self.n):
            for ei in self._alive_crossings(i):
                self.events[ei].name = _pair_letter(k)
                k += 1

    # ------------------------------------------------------------------
    # figure eights

    def _window_entries(self) -> list:
        """All axis landmarks (every raw beta event and every puncture),
        sorted by position; figure-eight crossings are classified to the
        nearest landmark window."""
        entries = [("event", e.index, e.x) for e in self.events]
        entries += [("puncture", r, QQ(r + 1)) for r in range(2 * self.n)]
        entries.sort(key=lambda w: w[2])
        for a, b in zip(entries, entries[1:]):
            if a[2] == b[2]:
                raise DegenerateInput("two axis landmarks coincide")
        return entries

    def _build_eights(self):
        entries = self._window_entries()
        xs = [w[2] for w in entries]
        gaps = [b - a for a, b in zip(xs, xs[1:])]
        base = min(gaps) / 8 if gaps else QQ(1, 8)
        for j in range(self.n):
            poly = self.betas[j]
            delta = min(base, abs(poly[self.waists[j]][1]) / 2, QQ(1, 16))
            for ei in self.by_beta[j]:
                e = self.events[ei]
                p, q = poly[e.seg], poly[e.seg + 1]
                delta = min(delta, abs(p[1]) / 2, abs(q[1]) / 2)
            eight = None
            for _ in range(64):
                try:
                    eight = Eight(self, j, delta, entries)
                    break
                except DegenerateInput:
                    delta = delta / 2
            if eight is None:
                raise DegenerateInput("no clean figure-eight offset found")
            self.eights.append(eight)
        self._collect_zpoints()

    def _collect_zpoints(self):
        self.z_by_tine = [[] for _ in range(self.n)]
        eight_of_puncture = {}
        for j, (r0, r1) in enumerate(self.beta_ends):
            eight_of_puncture[r0] = j
            eight_of_puncture[r1] = j
        for i in range(self.n):
            row = []
            for r in (2 * i, 2 * i + 1):
                j = eight_of_puncture[r]
                eight = self.eights[j]
                hid = eight.cap_hit[r]
                hit = eight.raw_hits[hid]
                row.append(
                    ZPoint(
                        index=-1,
                        name=f"x{r + 1}",
                        tine=i,
                        beta=j,
                        kind="cap",
                        x=hit.x,
                        seg=hit.seg,
                        point=hit.point,
                        hit=hid,
                        puncture=r,
                        strand=hit.strand,
                    )
                )
            for ei in self._alive_crossings(i):
                c = self.events[ei]
                eight = self.eights[c.beta]
                ha, hb = eight.pair_hits[ei]
                w = eight.short_arc_winding(ha, hb, c)
                if w == 1:
                    e_hit, p_hit = ha, hb
                elif w == -1:
                    e_hit, p_hit = hb, ha
                else:
                    raise PlatFloerError(
                        f"short eight arc winds {w} around its puncture"
                    )
                for hid, prime in ((e_hit, False), (p_hit, True)):
                    hit = eight.raw_hits[hid]
                    row.append(
                        ZPoint(
                            index=-1,
                            name=c.name + ("'" if prime else ""),
                            tine=i,
                            beta=c.beta,
                            kind="pair",
                            x=hit.x,
                            seg=hit.seg,
                            point=hit.point,
                            hit=hid,
                            crossing=ei,
                            prime=prime,
                            strand=hit.strand,
                        )
                    )
            row.sort(key=lambda z: z.x)
            self.z_by_tine[i] = row
        idx = 0
        self.zpoints = []
        for row in self.z_by_tine:
            for z in row:
                z.index = idx
                self.zpoints.append(z)
                idx += 1

    # ------------------------------------------------------------------
    # paths used by the gradings

    def d_point(self, i: int):
        return pt(self.mids[i][0], -self.H)

    def handle_path(self, j: int) -> list:
        """The raw pushed handle, from d_j up to the waist of beta j."""
        return list(self.handles[j])

    def spine_path(self, z: ZPoint) -> list:
        return self.eights[z.beta].spine(z)

    def tine_walk(self, z: ZPoint) -> list:
        end = self.mids[z.tine]
        start = pt(z.x, Q0)
        if start == end:
            return [start]
        return [start, end]

    def spine_walk(self, z: ZPoint) -> list:
        end = self.mids[z.tine]
        if z.kind == "pair":
            start = self.events[z.crossing].point
        else:
            start = self.punctures[z.puncture]
        if start == end:
            return [start]
        return [start, end]

    # ------------------------------------------------------------------
    # clean tangent-turning path for the P grading

    def pstar_path(self, z: ZPoint) -> list:
        """Redrawn handle plus figure-eight prefix ending vertically at z.

        Arcs between consecutive tightened axis crossings are drawn as
        rounded rectangles, so each contributes exactly a half revolution
        of tangent turning; the wiggle of the raw curves (which is pure
        isotopy) never enters.  An embedded arc between two crossings
        turns by that half revolution no matter where the waist sits
        along it, so the junction between the last handle crossing and
        the first crossing of z's lobe is drawn as a single monotone hump
        and the waist abscissa never appears.  Self-crossings of the
        redrawn path are harmless since only its turning and winding are
        read."""
        j = z.beta
        u, ur = QQ(1, 2), QQ(3, 8)
        sw = self.waist_side[j]
        hev = self.handle_events[j]
        eight = self.eights[j]
        if z.hit not in eight.tight_pos:
            raise PlatFloerError("z point cancelled from the eight sequence")
        lobe_z = eight.raw_hits[z.hit].lobe
        block = [h for h in eight.tight_sequence if h.lobe == lobe_z]
        if not block:
            raise PlatFloerError("z point lobe missing from the eight sequence")
        first = block[0]
        if first.up != (sw == -1):
            raise PlatFloerError("eight leaves the waist on the wrong side")
        mj = self.mids[j][0]
        y1 = -(self.H - QQ(1, 2))
        path = [pt(mj, -self.H)]

        def add(p):
            if p != path[-1]:
                path.append(p)

        if hev:
            if not hev[0].up:
                raise PlatFloerError("handle first crosses the axis downward")
            # raw letters sit at their drawn abscissa; letters born from a
            # waist flip carry the midpoint of the pressed span, which lies
            # strictly inside the interval where the press happened.  Any
            # abscissa inside the right interval gives the same turning
            # because consecutive survivors never share an interval.
            drawn = [h.x for h in hev]
            add(pt(mj, y1))
            add(pt(drawn[0], y1))
            add(pt(drawn[0], Q0))
            for i2 in range(len(hev) - 1):
                a, b = hev[i2], hev[i2 + 1]
                s = 1 if a.up else -1
                if b.up != (s == -1):
                    raise PlatFloerError("handle crossings fail to alternate")
                add(pt(drawn[i2], s * u))
                add(pt(drawn[i2 + 1], s * u))
                add(pt(drawn[i2 + 1], Q0))
            s = 1 if hev[-1].up else -1
            if s != sw:
                raise PlatFloerError("handle lands on the wrong waist side")
            if drawn[-1] == first.x:
                raise DegenerateInput(
                    "handle tail shares its abscissa with an eight crossing"
                )
            add(pt(drawn[-1], sw * ur))
            add(pt(first.x, sw * ur))
            add(pt(first.x, Q0))
        else:
            if sw != -1:
                raise PlatFloerError("uncrossed handle above the axis")
            add(pt(mj, y1))
            add(pt(first.x, y1))
            add(pt(first.x, Q0))
        if first.hit == z.hit:
            return path
        for a, b in zip(block, block[1:]):
            s = 1 if a.up else -1
            if b.up != (s == -1):
                raise PlatFloerError("eight crossings fail to alternate")
            add(pt(a.x, s * u))
            add(pt(b.x, s * u))
            add(pt(b.x, Q0))
            if b.hit == z.hit:
                return path
        raise PlatFloerError("z point not found along its eight")


@dataclass
class EightHit:
    """One axis crossing of a figure-eight polyline."""

    hit: int
    seg: int
    t: QQ
    point: tuple
    up: bool
    lobe: int
    strand: str
    entry: tuple = ("", -1)

    @property
    def x(self):
        return self.point[0]


class Eight:
    """Offset double of one raw beta, pinched at its waist.

    pts is the closed traversal polyline starting and ending at the waist.
    raw_hits lists its axis crossings in traversal order; each is matched
    to a window around a raw beta crossing or a puncture and verified:
    the eight must cross exactly twice beside every crossing of its own
    beta (alive or cancelled), exactly twice around each of its endpoint
    punctures (once inside the adjacent span, once beyond in the gap), and
    nowhere else.  tight_sequence is assembled as the double of the
    tightened beta (see _assemble_sequence) out of surviving raw hits.
    """

    def __init__(self, fd: ForkDiagram, j: int, delta: QQ, entries: list):
        self.fd = fd
        self.beta = j
        self.delta = delta
        raw = fd.betas[j]
        w = fd.waists[j]
        self.raw = raw
        self.waist = w
        fwd = raw[w:]
        bwd = raw[: w + 1][::-1]
        lobes = {}
        for lobe, arc in ((1, fwd), (0, bwd)):
            out_side = "right" if (lobe == 1) == (CHIRALITY == 1) else "left"
            back_side = "left" if out_side == "right" else "right"
            out = geometry.offset_polyline(arc, out_side, delta)
            back = geometry.offset_polyline(arc, back_side, delta)[::-1]
            d = vsub(arc[-1], arc[-2])
            u = vscale(d, delta / (abs(d[0]) + abs(d[1])))
            cap = [vadd(out[-1], u), vadd(back[0], u)]
            lobes[lobe] = (out, cap, back)
        # The closed traversal lists both lobes, terminal-puncture lobe
        # first; nothing read off the eight depends on that order because
        # prefixes and spines stay inside the lobe of their endpoint.
        order = (1, 0)
        self.lobe_order = order
        pts = [raw[w]]
        tags = []
        lobe_of_seg = []
        self.lobe_start = {}

        def extend(block, tag, lobe):
            for p in block:
                pts.append(p)
                tags.append(tag)
                lobe_of_seg.append(lobe)

        for lobe in order:
            self.lobe_start[lobe] = len(pts) - 1  # pinch vertex index
            out, cap, back = lobes[lobe]
            extend(out, f"out{lobe}", lobe)
            extend(cap, f"cap{lobe}", lobe)
            extend(back, f"back{lobe}", lobe)
            extend([raw[w]], "pinch", lobe)
        self.pts = pts
        self.tags = tags  # tags[s] labels the segment pts[s] -> pts[s+1]
        self.lobe_of_seg = lobe_of_seg
        self._scan(entries)
        self._verify(entries)
        self._assemble_sequence()

    # ------------------------------------------------------------------

    def _scan(self, entries: list):
        fd = self.fd
        bounds = []
        for a, b in zip(entries, entries[1:]):
            bounds.append((a[2] + b[2]) / 2)
        hits = []
        for s in range(len(self.pts) - 1):
            p, q = self.pts[s], self.pts[s + 1]
            if p[1] == 0 or q[1] == 0:
                raise DegenerateInput("eight vertex on the axis")
            if (p[1] > 0) == (q[1] > 0):
                continue
            t = p[1] / (p[1] - q[1])
            x = p[0] + t * (q[0] - p[0])
            slot = None
            for k in range(len(entries)):
                wlo = bounds[k - 1] if k > 0 else QQ(0)
                whi = bounds[k] if k < len(bounds) else QQ(2 * fd.n + 1)
                if wlo < x < whi:
                    slot = k
                    break
                if x == wlo or x == whi or x == entries[k][2]:
                    raise DegenerateInput("eight hit at a window boundary")
            if slot is None:
                raise DegenerateInput("eight hit escaped every window")
            hits.append(
                EightHit(
                    hit=len(hits),
                    seg=s,
                    t=t,
                    point=pt(x, Q0),
                    up=p[1] < 0,
                    lobe=self.lobe_of_seg[s],
                    strand=self.tags[s],
                    entry=entries[slot][:2],
                )
            )
        self.raw_hits = hits

    def _expected_pair(self, e: AxisEvent):
        p, q = self.raw[e.seg], self.raw[e.seg + 1]
        d = vsub(q, p)
        scale = self.delta / (abs(d[0]) + abs(d[1]))
        v_out = (d[1] * scale, -d[0] * scale)
        shift = cross(v_out, d) / d[1]
        return {e.x + shift, e.x - shift}

    def _verify(self, entries: list):
        fd = self.fd
        by_entry = {}
        for h in self.raw_hits:
            by_entry.setdefault(h.entry, []).append(h)
        self.pair_hits = {}
        self.cap_hit = {}
        self.wrap_hits = {}
        own = set(fd.by_beta[self.beta])
        for kind, key, x in entries:
            got = by_entry.get((kind, key), [])
            if kind == "event":
                want = 2 if key in own else 0
            else:
                want = 2 if key in fd.beta_ends[self.beta] else 0
            if len(got) != want:
                raise DegenerateInput(
                    f"eight meets a window {len(got)} times, expected {want}"
                )
            if not got:
                continue
            got.sort(key=lambda h: (h.seg, h.t))
            if kind == "event":
                e = fd.events[key]
                if {h.x for h in got} != self._expected_pair(e):
                    raise DegenerateInput("eight pair strayed off prediction")
                if not (got[0].strand.startswith("out")
                        and got[1].strand.startswith("back")):
                    raise DegenerateInput("pair hits strayed off their strands")
                if e.alive:
                    self.pair_hits[key] = (got[0].hit, got[1].hit)
            else:
                lo, hi = sorted(got, key=lambda h: h.x)
                if not (lo.x < x < hi.x):
                    raise DegenerateInput("cap pair fails to flank its puncture")
                span_east = key % 2 == 0
                cap = hi if span_east else lo
                wrap = lo if span_east else hi
                if fd._interval_of(cap.x) % 2 != 1:
                    raise DegenerateInput("cap hit fell outside its span")
                if fd._interval_of(wrap.x) % 2 != 0:
                    raise DegenerateInput("wrap hit fell inside a span")
                self.cap_hit[key] = cap.hit
                self.wrap_hits[key] = (got[0].hit, got[1].hit)

    def _assemble_sequence(self):
        """Tightened hit sequence, built rather than reduced: per lobe the
        out-strand hits of the surviving crossings, the wrap pair at the
        endpoint puncture, then the back-strand hits in reverse.  The wrap
        pair keeps its raw positions and directions but its order is
        swapped whenever tightening changed the side the curve approaches
        the puncture from (an endpoint bigon flips that side).

        Each lobe is a based loop through the pinch and carries its own
        orientation: it is traversed winding counterclockwise around its
        endpoint puncture, so every surviving crossing is met first on the
        hit whose short return arc winds +1 (the unprimed point).  A lobe
        without surviving crossings reads the same winding off the arc
        between its two wrap hits.  A lobe drawn the other way around is
        re-read backwards, which reverses its block and flips every
        crossing direction in it."""
        fd = self.fd
        sw = fd.waist_side[self.beta]
        wpos = (self.waist, Q0)
        alive = [fd.events[ei] for ei in fd._alive_on_beta(self.beta)]
        before = [e for e in alive if e.bpos < wpos]
        after = [e for e in alive if e.bpos > wpos]
        seq = []
        for lobe in self.lobe_order:
            evs = after if lobe == 1 else before[::-1]
            r = fd.beta_ends[self.beta][lobe]
            out = [self.raw_hits[self.pair_hits[e.index][0]] for e in evs]
            back = [self.raw_hits[self.pair_hits[e.index][1]]
                    for e in reversed(evs)]
            if out:
                s_app = 1 if out[-1].up else -1
            else:
                s_app = sw
            w1, w2 = (self.raw_hits[h] for h in self.wrap_hits[r])
            wrap = [w1, w2] if w1.up == (s_app == -1) else [w2, w1]
            if wrap[0].up == wrap[1].up:
                raise PlatFloerError("wrap pair crosses one way twice")
            block = out + wrap + back
            for h in block:
                if h.lobe != lobe:
                    raise PlatFloerError("eight hit assembled into the wrong lobe")
            if evs:
                ends = set()
                for e in evs:
                    ha, hb = self.pair_hits[e.index]
                    w = self.short_arc_winding(ha, hb, e)
                    if w == 1:
                        ends.add("out")
                    elif w == -1:
                        ends.add("back")
                    else:
                        raise PlatFloerError(
                            f"short eight arc winds {w} around its puncture"
                        )
                if len(ends) != 1:
                    raise PlatFloerError(
                        "lobe crossings disagree on the unprimed strand"
                    )
                backwards = ends.pop() == "back"
            else:
                # tight lobe loop: leave the waist side, cross at the
                # first wrap hit, pass the puncture on the far side,
                # cross back; the drawn arc is useless here since a flip
                # can leave the raw pinch on the other side of the axis
                f, g = block
                base = sw * QQ(1, 4)
                rect = [pt(f.x, base), pt(f.x, -base),
                        pt(g.x, -base), pt(g.x, base)]
                w = winding_number(rect, fd.punctures[r])
                if w == 1:
                    backwards = False
                elif w == -1:
                    backwards = True
                else:
                    raise PlatFloerError(
                        f"wrap loop winds {w} around its puncture"
                    )
            if backwards:
                block = [replace(h, up=not h.up) for h in reversed(block)]
            ks = sorted(k for k, h in enumerate(block)
                        if h.hit in self.wrap_hits[r])
            if ks[1] != ks[0] + 1:
                raise PlatFloerError("wrap pair split by another hit")
            if block[0].up != (sw == -1) or block[-1].up != (sw == 1):
                raise PlatFloerError("eight block leaves the waist wrongly")
            for a, b in zip(block, block[1:]):
                if a.up == b.up:
                    raise PlatFloerError("assembled eight fails to alternate")
            seq.extend(block)
        self.tight_sequence = seq
        self.tight_pos = {h.hit: k for k, h in enumerate(seq)}

    def short_arc_winding(self, ha: int, hb: int, c: AxisEvent) -> int:
        """Winding of [eight arc between the two hits + chord return]
        around the puncture wrapped by the crossing's lobe.

        The chord stays clear of the puncture because a crossing's two
        hits sit within one offset width of each other; wrap hits flank
        their puncture and need the tight-loop reading instead."""
        a, b = self.raw_hits[ha], self.raw_hits[hb]
        if a.seg > b.seg:
            return -self.short_arc_winding(hb, ha, c)
        arc = [a.point] + self.pts[a.seg + 1 : b.seg + 1] + [b.point]
        lobe = 1 if c.seg >= self.waist else 0
        punc = self.fd.beta_ends[self.beta][lobe]
        return winding_number(arc, self.fd.punctures[punc])

    # ------------------------------------------------------------------

    def spine(self, z: ZPoint) -> list:
        """Raw beta route shadowing the eight arc from waist to z, staying
        inside the lobe containing z."""
        raw = self.raw
        w = self.waist
        last = len(raw) - 1

        def to_crossing(lobe: int, strand: str, c: AxisEvent) -> list:
            if lobe == 1:
                ahead = raw[w : c.seg + 1] + [c.point]
                around = raw[w:] + raw[c.seg + 1 : last][::-1] + [c.point]
            else:
                ahead = raw[c.seg + 1 : w + 1][::-1] + [c.point]
                around = raw[: w + 1][::-1] + raw[1 : c.seg + 1] + [c.point]
            return ahead if strand == "out" else around

        if z.kind == "cap":
            lobe = 1 if self.fd.beta_ends[self.beta][1] == z.puncture else 0
            return raw[w:] if lobe == 1 else raw[: w + 1][::-1]
        c = self.fd.events[z.crossing]
        lobe = 1 if c.seg >= self.waist else 0
        r = self.fd.beta_ends[self.beta][lobe]
        direct = self.tight_pos[z.hit] < self.tight_pos[self.cap_hit[r]]
        return to_crossing(lobe, "out" if direct else "back", c)
