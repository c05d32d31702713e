"""Exact piecewise-linear half twists.

The generator exchanging punctures k and k+1 is modelled on the disk of
radius 1 around c = (k + 1/2, 0):

  * a rigid octagonal core of radius 3/4 mapped by the point reflection
    z -> 2c - z (the two punctures, at distance 1/2 from c, swap exactly);
  * a damping annulus of four octagonal rings at radii 1, 15/16, 14/16,
    13/16, 3/4, where ring t is rotated by t vertex steps, with the
    quadrilaterals between rings triangulated and mapped affinely;
  * the identity outside radius 1.

Every cell map is an exact rational affine map, so segments map to
segments; a polyline is subdivided against the cell edges and pushed
cell by cell.  Twists centered two or more positions apart have disjoint
support interiors, so far commutation holds on the nose.
"""
from __future__ import annotations

from .errors import DegenerateInput
from .geometry import (Pt, cross, point_in_convex, prune_polyline,
                       seg_intersections, vsub)
from .rational import QQ

# Octagon template, counterclockwise, rotated half a step off the axes so
# that no vertex and no radial edge lies on the real axis (vertices there
# would push curve subdivision points exactly onto the axis, where the
# tine crossing scan cannot tell a crossing from a tangency).  (12,5,13)
# keeps the vertices exactly on the unit circle, and the set is symmetric
# under both the point reflection and the axis reflection.
_OCT = [
    (QQ(12, 13), QQ(5, 13)),
    (QQ(5, 13), QQ(12, 13)),
    (QQ(-5, 13), QQ(12, 13)),
    (QQ(-12, 13), QQ(5, 13)),
    (QQ(-12, 13), QQ(-5, 13)),
    (QQ(-5, 13), QQ(-12, 13)),
    (QQ(5, 13), QQ(-12, 13)),
    (QQ(12, 13), QQ(-5, 13)),
]
_RADII = [QQ(1), QQ(15, 16), QQ(14, 16), QQ(13, 16), QQ(3, 4)]


class AffineMap:
    """p -> (a x + b y + e, c x + d y + f), with exact rational entries."""

    __slots__ = ("a", "b", "c", "d", "e", "f")

    def __init__(self, a, b, c, d, e, f):
        self.a, self.b, self.c, self.d, self.e, self.f = a, b, c, d, e, f

    @classmethod
    def from_triangles(cls, src, dst):
        (ax, ay), (bx, by), (cx, cy) = src
        (px, py), (qx, qy), (rx, ry) = dst
        ux, uy = bx - ax, by - ay
        vx, vy = cx - ax, cy - ay
        det = ux * vy - uy * vx
        if det == 0:
            raise DegenerateInput("degenerate source triangle")
        upx, upy = qx - px, qy - py
        vpx, vpy = rx - px, ry - py
        a = (upx * vy - vpx * uy) / det
        b = (-upx * vx + vpx * ux) / det
        c = (upy * vy - vpy * uy) / det
        d = (-upy * vx + vpy * ux) / det
        e = px - a * ax - b * ay
        f = py - c * ax - d * ay
        return cls(a, b, c, d, e, f)

    def __call__(self, p: Pt) -> Pt:
        x, y = p
        return (self.a * x + self.b * y + self.e,
                self.c * x + self.d * y + self.f)

    def det(self):
        return self.a * self.d - self.b * self.c


class HalfTwist:
    """The counterclockwise half twist swapping punctures (k,0) and (k+1,0).

    The clockwise inverse is the conjugate by the reflection across the
    axis, which is also its exact pointwise inverse (the twist carries
    this triangulation onto its mirror image, on which the conjugate is
    affine cell by cell).
    """

    def __init__(self, k: int):
        self.k = k
        cx = QQ(2 * k + 1, 2)
        self.center = (cx, QQ(0))
        v = [[(cx + r * ux, r * uy) for (ux, uy) in _OCT] for r in _RADII]
        self.rings = v
        self.cells = []  # (triangle, AffineMap)
        for t in range(4):
            for j in range(8):
                j1 = (j + 1) % 8
                s = (j + t) % 8
                s1 = (j + 1 + t) % 8
                si = (j + t + 1) % 8
                si1 = (j + 1 + t + 1) % 8
                t1 = (v[t][j], v[t][j1], v[t + 1][j])
                t1_img = (v[t][s], v[t][s1], v[t + 1][si])
                t2 = (v[t][j1], v[t + 1][j1], v[t + 1][j])
                t2_img = (v[t][s1], v[t + 1][si1], v[t + 1][si])
                for tri, img in ((t1, t1_img), (t2, t2_img)):
                    m = AffineMap.from_triangles(tri, img)
                    if m.det() <= 0:
                        raise DegenerateInput("orientation-reversing cell map")
                    self.cells.append((tri, m))
        self.core = v[4]
        self.core_map = AffineMap(QQ(-1), QQ(0), QQ(0), QQ(-1),
                                  2 * cx, QQ(0))
        # unique subdivision edges: ring edges, radial edges, diagonals
        edges = set()
        for t in range(5):
            for j in range(8):
                edges.add((v[t][j], v[t][(j + 1) % 8]))
        for t in range(4):
            for j in range(8):
                edges.add((v[t][j], v[t + 1][j]))
                edges.add((v[t][(j + 1) % 8], v[t + 1][j]))
        self.edges = list(edges)

    def map_point(self, p: Pt) -> Pt:
        if not point_in_convex(p, self.rings[0]):
            return p
        if point_in_convex(p, self.core):
            return self.core_map(p)
        # locate the ring gap, then its triangle
        gap = 0
        for t in range(1, 4):
            if point_in_convex(p, self.rings[t]):
                gap = t
        for tri, m in self.cells[gap * 16:(gap + 1) * 16]:
            if point_in_convex(p, tri):
                return m(p)
        raise DegenerateInput("point location failed in twist support")

    def apply_polyline(self, pts: list, keep=(), sign: int = 1):
        """Map a polyline through the twist, subdividing against cell edges.

        Returns (new_pts, index_map) with index_map tracking old vertices.
        sign -1 applies the inverse twist (conjugate by the reflection
        across the axis).
        """
        if sign == -1:
            flipped = [(x, -y) for (x, y) in pts]
            out, fmap = self.apply_polyline(flipped, keep=keep, sign=1)
            return [(x, -y) for (x, y) in out], fmap
        sub = [pts[0]]
        src_index = [0]
        for i in range(len(pts) - 1):
            p, q = pts[i], pts[i + 1]
            params = set()
            box_lo_x = min(p[0], q[0])
            box_hi_x = max(p[0], q[0])
            box_lo_y = min(p[1], q[1])
            box_hi_y = max(p[1], q[1])
            cx, cy = self.center
            if not (box_hi_x < cx - 1 or box_lo_x > cx + 1
                    or box_hi_y < cy - 1 or box_lo_y > cy + 1):
                for a, b in self.edges:
                    for t in seg_intersections(p, q, a, b):
                        if 0 < t < 1:
                            params.add(t)
            for t in sorted(params):
                sub.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
                src_index.append(None)
            sub.append(q)
            src_index.append(i + 1)
        out = [self.map_point(r) for r in sub]
        index_map = [None] * len(pts)
        for j, si in enumerate(src_index):
            if si is not None:
                index_map[si] = j
        keep_new = {index_map[i] for i in keep}
        pruned, pmap = prune_polyline(out, keep=keep_new)
        final_map = [None] * len(pts)
        for i in range(len(pts)):
            j = index_map[i]
            if j is not None and pmap[j] is not None:
                final_map[i] = pmap[j]
        return pruned, final_map


_TWIST_CACHE: dict = {}


def _twist(k: int) -> HalfTwist:
    if k not in _TWIST_CACHE:
        _TWIST_CACHE[k] = HalfTwist(k)
    return _TWIST_CACHE[k]


def apply_word(pts: list, letters, keep=()):
    """Push a polyline through a braid word, first letter acting first.

    `keep` lists vertex indices that must be tracked; returns
    (new_pts, tracked_indices) in the same order as `keep`.
    """
    tracked = list(keep)
    for (k, s) in letters:
        pts, fmap = _twist(k).apply_polyline(pts, keep=tracked, sign=s)
        new_tracked = []
        for i in tracked:
            if fmap[i] is None:
                raise DegenerateInput("tracked vertex lost in twist")
            new_tracked.append(fmap[i])
        tracked = new_tracked
    return pts, tracked
