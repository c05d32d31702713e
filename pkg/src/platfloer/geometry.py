"""Exact piecewise-linear plane geometry.

Points are pairs of exact rationals.  Everything here is decided by sign
tests on rational arithmetic; no floats, no epsilons.  Winding numbers are
counted by ray crossings, turning numbers by signed quarter-sector
crossings of the direction vector, so curves whose initial and final
directions are axis-parallel get exact integer quarter-turn counts.
"""
from __future__ import annotations

from .errors import DegenerateInput
from .rational import QQ, Q0

Pt = tuple  # (QQ, QQ)


def pt(x, y) -> Pt:
    return (QQ(x), QQ(y))


def vsub(a: Pt, b: Pt) -> Pt:
    return (a[0] - b[0], a[1] - b[1])


def vadd(a: Pt, b: Pt) -> Pt:
    return (a[0] + b[0], a[1] + b[1])


def vscale(a: Pt, s) -> Pt:
    return (a[0] * s, a[1] * s)


def cross(a: Pt, b: Pt):
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Pt, b: Pt):
    return a[0] * b[0] + a[1] * b[1]


def orient(a: Pt, b: Pt, c: Pt):
    """Sign of the signed area of (a, b, c): + for counterclockwise."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p: Pt, a: Pt, b: Pt) -> bool:
    """True iff p lies on the closed segment [a, b]."""
    if cross(vsub(b, a), vsub(p, a)) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def seg_intersections(p: Pt, q: Pt, a: Pt, b: Pt):
    """Parameters t in [0,1] along [p,q] where it meets the segment [a,b].

    Proper transverse crossings give a single t.  Collinear overlap gives
    the parameter interval's endpoints.  Touching at isolated points gives
    their parameters.  Used for subdividing polylines against cell edges,
    so every incidence matters, not just transverse ones.
    """
    d1 = vsub(q, p)
    d2 = vsub(b, a)
    denom = cross(d1, d2)
    if denom != 0:
        t = cross(vsub(a, p), d2) / denom
        u = cross(vsub(a, p), d1) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return [t]
        return []
    # parallel
    if cross(d1, vsub(a, p)) != 0:
        return []  # parallel, not collinear
    # collinear: project onto the dominant axis of d1
    if d1 == (Q0, Q0):
        return [QQ(0)] if on_segment(p, a, b) else []
    axis = 0 if abs(d1[0]) >= abs(d1[1]) else 1
    ta = (a[axis] - p[axis]) / d1[axis]
    tb = (b[axis] - p[axis]) / d1[axis]
    lo, hi = min(ta, tb), max(ta, tb)
    out = []
    for t in (max(lo, QQ(0)), min(hi, QQ(1))):
        if 0 <= t <= 1 and lo <= t <= hi:
            out.append(t)
    return sorted(set(out))


def seg_cross_proper(p: Pt, q: Pt, a: Pt, b: Pt):
    """Strictly interior transverse crossing of [p,q] and [a,b], or None."""
    o1 = orient(p, q, a)
    o2 = orient(p, q, b)
    o3 = orient(a, b, p)
    o4 = orient(a, b, q)
    if o1 * o2 < 0 and o3 * o4 < 0:
        d1 = vsub(q, p)
        d2 = vsub(b, a)
        t = cross(vsub(a, p), d2) / cross(d1, d2)
        return t
    return None


def point_in_convex(p: Pt, poly: list) -> bool:
    """Closed membership in a convex CCW polygon."""
    n = len(poly)
    for i in range(n):
        if orient(poly[i], poly[(i + 1) % n], p) < 0:
            return False
    return True


def prune_polyline(pts: list, keep=()):
    """Drop repeated points and interior vertices collinear with same heading.

    `keep` is a set of indices that must survive.  Returns (new_pts, index_map)
    where index_map[i] is the new index of old vertex i (None if dropped).
    """
    keep = set(keep)
    n = len(pts)
    alive = [True] * n
    for i in range(1, n - 1):
        if pts[i] == pts[i - 1] and i not in keep:
            alive[i] = False
    # collapse duplicates first, then collinear runs, in one rebuild pass
    out = []
    index_map = [None] * n
    for i, p in enumerate(pts):
        if out and p == out[-1]:
            if i in keep:
                index_map[i] = len(out) - 1
            continue
        out.append(p)
        index_map[i] = len(out) - 1
    # collinear removal on the rebuilt list
    protected = {index_map[i] for i in keep if index_map[i] is not None}
    protected.add(0)
    protected.add(len(out) - 1)
    changed = True
    while changed:
        changed = False
        i = 1
        while i < len(out) - 1:
            if i not in protected:
                u = vsub(out[i], out[i - 1])
                v = vsub(out[i + 1], out[i])
                if cross(u, v) == 0 and dot(u, v) > 0:
                    del out[i]
                    for j, m in enumerate(index_map):
                        if m is None:
                            continue
                        if m == i:
                            index_map[j] = None
                        elif m > i:
                            index_map[j] = m - 1
                    protected = {(p - 1 if p > i else p) for p in protected}
                    changed = True
                    continue
            i += 1
    return out, index_map


def _sector(v: Pt) -> int:
    """Quarter sector of a nonzero direction: [0,90) -> 0, [90,180) -> 1, ..."""
    x, y = v
    if x == 0 and y == 0:
        raise DegenerateInput("zero direction vector")
    if x > 0 and y >= 0:
        return 0
    if y > 0 and x <= 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def sector_step(u: Pt, v: Pt) -> int:
    """Signed quarter-sector boundary crossings rotating u to v the short way.

    Negating both vectors shifts both sectors by two, so the step count is
    unchanged; sweeps may be accumulated on either sign of a difference."""
    su, sv = _sector(u), _sector(v)
    d = (sv - su) % 4
    if d == 0:
        return 0
    if d == 1:
        return 1
    if d == 3:
        return -1
    c = cross(u, v)
    if c > 0:
        return 2
    if c < 0:
        return -2
    raise DegenerateInput("direction reversal: turning angle of pi is ambiguous")


def quarter_turns(directions: list) -> int:
    """Net counterclockwise quarter turns along a direction sequence.

    The first and last directions must be axis-parallel; then the total
    turning angle is exactly (returned value) * 90 degrees.
    """
    if not directions:
        return 0
    for v in (directions[0], directions[-1]):
        if v[0] != 0 and v[1] != 0:
            raise DegenerateInput("turning count needs axis-parallel ends")
    total = 0
    prev = directions[0]
    for v in directions[1:]:
        if v[0] == 0 and v[1] == 0:
            raise DegenerateInput("zero direction vector")
        total += sector_step(prev, v)
        prev = v
    return total


def path_directions(pts: list) -> list:
    """Nonzero segment direction vectors of a polyline."""
    dirs = []
    for i in range(len(pts) - 1):
        d = vsub(pts[i + 1], pts[i])
        if d != (Q0, Q0):
            dirs.append(d)
    return dirs


def turning_quarters(pts: list) -> int:
    """Exact quarter-turn count of the tangent along a polyline."""
    return quarter_turns(path_directions(pts))


def winding_number(loop: list, center: Pt) -> int:
    """Winding of a closed polyline around a point not on it.

    Counts signed crossings of the downward ray from `center`, with the ray
    shifted infinitesimally to the left (smaller x) to break vertex ties
    deterministically.
    """
    cx, cy = center
    w = 0
    n = len(loop)
    for i in range(n):
        a = loop[i]
        b = loop[(i + 1) % n]
        if a == b:
            continue
        if a[0] < cx <= b[0]:
            s = 1  # eastbound
        elif b[0] < cx <= a[0]:
            s = -1  # westbound
        else:
            continue
        # y-coordinate where the segment crosses the vertical line x = cx
        t = (cx - a[0]) / (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        if y == cy:
            raise DegenerateInput("winding loop passes through the center")
        if y < cy:
            w += s
    return w


def sweep_half_turns(vectors: list) -> int:
    """Total sweep of a piecewise-linear moving vector, in half turns.

    `vectors` samples the difference of two synchronized paths at their
    merged event times.  Between events the difference moves along a
    straight segment; if that segment passes through the origin the paths
    collided and the sweep is undefined.
    The first and last vectors must be axis-parallel (so the total sweep is
    an exact multiple of a quarter turn); the result is required to be a
    whole number of half turns.
    """
    for i in range(len(vectors) - 1):
        u, v = vectors[i], vectors[i + 1]
        if u == (Q0, Q0) or v == (Q0, Q0):
            raise DegenerateInput("paths collide at an event time")
        if cross(u, v) == 0 and dot(u, v) < 0:
            raise DegenerateInput("paths collide between event times")
    q = quarter_turns(vectors)
    if q % 2 != 0:
        raise DegenerateInput(f"sweep is not a multiple of a half turn: {q}/4")
    return q // 2


def offset_polyline(pts: list, side: str, delta) -> list:
    """Push a polyline off itself on `side` ('left'/'right' of travel).

    The displacement is per-segment perpendicular with rational scale,
    bounded by `delta` in the max norm.  Corners are joined with bevel
    segments.  Endpoints are displaced copies of the original endpoints.
    """
    delta = QQ(delta)
    dirs = []
    for i in range(len(pts) - 1):
        d = vsub(pts[i + 1], pts[i])
        if d == (Q0, Q0):
            raise DegenerateInput("offset of a degenerate segment")
        dirs.append(d)
    offs = []
    for d in dirs:
        if side == "left":
            nx, ny = -d[1], d[0]
        else:
            nx, ny = d[1], -d[0]
        s = delta / (abs(nx) + abs(ny))
        offs.append((nx * s, ny * s))
    out = [vadd(pts[0], offs[0])]
    for i in range(1, len(pts) - 1):
        a = vadd(pts[i], offs[i - 1])
        b = vadd(pts[i], offs[i])
        if a != out[-1]:
            out.append(a)
        if b != a:
            out.append(b)
    out.append(vadd(pts[-1], offs[-1]))
    return out


def seg_axis_crossing(a: Pt, b: Pt):
    """Where the open segment (a,b) crosses the x-axis transversally.

    Returns the crossing abscissa, or None.  Endpoints on the axis do not
    count (callers treat those as degeneracies or handle them separately).
    """
    if (a[1] > 0 and b[1] < 0) or (a[1] < 0 and b[1] > 0):
        t = a[1] / (a[1] - b[1])
        return a[0] + t * (b[0] - a[0])
    return None


def dist2_point_seg(p: Pt, a: Pt, b: Pt):
    """Squared euclidean distance from p to the closed segment [a,b]."""
    d = vsub(b, a)
    if d == (Q0, Q0):
        w = vsub(p, a)
        return dot(w, w)
    t = dot(vsub(p, a), d) / dot(d, d)
    if t < 0:
        t = QQ(0)
    elif t > 1:
        t = QQ(1)
    c = vadd(a, vscale(d, t))
    w = vsub(p, c)
    return dot(w, w)
