"""Ground truth: the literal quadratic sweep, a flood-fill piercing oracle and graph checkers."""
from __future__ import annotations

import math

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .geometry import (
    Instance,
    LEdge,
    Rect,
    VSegment,
    edge_discretely_pierces_rect,
    is_nonpiercing_family,
    pierced_rect_matrix,
    validate_general_position,
)
from .support import BuildStats, SupportGraph

_NEG = np.iinfo(np.int64).min
_POS = np.iinfo(np.int64).max


class ValidationError(ValueError):
    def __init__(self, message: str, violations=(), pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.violations = list(violations)
        self.pair = pair


def require_valid(inst: Instance, nonpiercing: bool = True) -> None:
    violations = validate_general_position(inst)
    if violations:
        more = f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""
        raise ValidationError(f"not in general position: {violations[0]}{more}", violations)
    if nonpiercing:
        pair = is_nonpiercing_family(inst.rects)
        if pair is not None:
            raise ValidationError(f"rects {pair[0]} and {pair[1]} pierce each other", pair=pair)


class _EdgeArrays:
    """Growable column store of the L-edges added so far."""

    def __init__(self, capacity: int = 64):
        self.size = 0
        self.data = np.empty((6, capacity), dtype=np.int64)  # hy hx0 hx1 vx vy0 vy1

    def extend(self, qx: np.ndarray, qy: np.ndarray, px: int, py: int) -> None:
        k = len(qx)
        while self.size + k > self.data.shape[1]:
            self.data = np.concatenate([self.data, np.empty_like(self.data)], axis=1)
        cols = slice(self.size, self.size + k)
        self.data[0, cols] = qy
        self.data[1, cols] = qx
        self.data[2, cols] = px
        self.data[3, cols] = px
        self.data[4, cols] = np.minimum(qy, py)
        self.data[5, cols] = np.maximum(qy, py)
        self.size += k

    def crossed(self, qx: np.ndarray, qy: np.ndarray, px: int, py: int) -> np.ndarray:
        """Which of the edges q -> p properly cross a stored edge."""
        # stored edges arrive in sweep order, so their vertical x is sorted;
        # anything with vertical x left of every q misses all new edges
        start = int(np.searchsorted(self.data[3, : self.size], qx.min(), side="right"))
        if start == self.size:
            return np.zeros(len(qx), dtype=bool)
        hy, hx0, hx1, vx, vy0, vy1 = self.data[:, start : self.size]
        # new horizontal pieces against stored vertical pieces
        near = vx < px
        hit = (qx[:, None] < vx[near]) & (vy0[near] < qy[:, None]) & (qy[:, None] < vy1[near])
        hit = hit.any(axis=1)
        # new vertical pieces (all at px) against stored horizontal pieces
        over = (hx0 < px) & (px < hx1)
        if over.any():
            fy0, fy1 = np.minimum(qy, py)[:, None], np.maximum(qy, py)[:, None]
            hit |= ((fy0 < hy[over]) & (hy[over] < fy1)).any(axis=1)
        return hit


def _fan_crosses(qx: np.ndarray, qy: np.ndarray, px: int, py: int) -> bool:
    """Does any horizontal piece of the edges q -> p cross another one's vertical piece?"""
    lo, hi = np.minimum(qy, py), np.maximum(qy, py)
    hit = (qx[:, None] < px) & (px < px) & (lo[None, :] < qy[:, None]) & (qy[:, None] < hi[None, :])
    return bool(hit.any())


def _delaunay_candidates(inst: Instance, stats: BuildStats) -> list[np.ndarray]:
    """Per sweep position i, the earlier points q (decreasing x) with R(q p_i) empty.

    While scanning left, the nearest y above and below p_i among
    already-scanned points is tracked; q is a candidate iff it lies strictly
    between them.
    """
    ys, order = inst.ys, inst.x_order
    out = [np.empty(0, dtype=np.int64)]
    for i in range(1, inst.n):
        y = ys[order[i]]
        prev = order[i - 1 :: -1]
        py = ys[prev]
        below = np.maximum.accumulate(np.where(py < y, py, _NEG))
        above = np.minimum.accumulate(np.where(py > y, py, _POS))
        # state before visiting position j
        below = np.concatenate([[_NEG], below[:-1]])
        above = np.concatenate([[_POS], above[:-1]])
        out.append(prev[np.where(py < y, below < py, above > py)])
        stats.queries += len(prev)
    return out


def _pierce_free(inst: Instance, cands: list[np.ndarray], block: int = 1 << 21) -> list[np.ndarray]:
    """Drop candidate edges that discretely pierce some rect (batched over all points)."""
    order = inst.x_order
    src = np.concatenate(cands) if cands else np.empty(0, dtype=np.int64)
    dst = np.repeat(order, [len(c) for c in cands])
    keep = np.ones(len(src), dtype=bool)
    rows = max(1, block // max(1, inst.m))
    for start in range(0, len(src), rows):
        sl = slice(start, start + rows)
        keep[sl] = ~pierced_rect_matrix(src[sl], dst[sl], inst).any(axis=1)
    bounds = np.cumsum([0] + [len(c) for c in cands])
    return [c[keep[bounds[i] : bounds[i + 1]]] for i, c in enumerate(cands)]


def naive_build_support(
    inst: Instance, *, validate: bool = True, stats: BuildStats | None = None
) -> SupportGraph:
    """Add every valid Delaunay edge to earlier points, point by point in x order.

    An edge q -> p is valid iff R(qp) is empty, it pierces no rect and it
    crosses no edge added before it. Only the crossing test depends on
    earlier choices, so emptiness and piercing are evaluated for all pairs
    up front and the sequential pass applies the crossing test. Edges sharing
    the new point cannot cross each other (their horizontal pieces end on its
    vertical line), so testing against earlier points' edges gives the same
    set as the one-at-a-time reading; this is asserted.
    """
    if validate:
        require_valid(inst)
    stats = stats if stats is not None else BuildStats()
    xs, ys = inst.xs, inst.ys
    order = inst.x_order
    stats.inserts = inst.n
    cands = _pierce_free(inst, _delaunay_candidates(inst, stats))
    added = _EdgeArrays()
    pairs = []
    for i in range(1, inst.n):
        cand = cands[i]
        if len(cand) == 0:
            continue
        pid = int(order[i])
        px, py = int(xs[pid]), int(ys[pid])
        qx, qy = xs[cand], ys[cand]
        acc = cand[~added.crossed(qx, qy, px, py)]
        if len(acc) > 1:
            assert not _fan_crosses(xs[acc], ys[acc], px, py), "edges at one point cross"
        added.extend(xs[acc], ys[acc], px, py)
        pairs.extend((int(q), pid) for q in acc)
    stats.edges = len(pairs)
    return SupportGraph.from_pairs(inst, pairs)


# --------------------------------------------------------------------------
# flood fill


def _axis_segments(poly: LEdge | VSegment, r: Rect) -> list[tuple[int, int, int, int]]:
    if isinstance(poly, LEdge):
        hy, hx0, hx1 = poly.h_segment
        vx, vy0, vy1 = poly.v_segment
        return [(hx0, hy, hx1, hy), (vx, vy0, vx, vy1)]
    y0 = r.y_lo - 1 if poly.y_lo == -math.inf else int(poly.y_lo)
    y1 = r.y_hi + 1 if poly.y_hi == math.inf else int(poly.y_hi)
    return [(poly.x, y0, poly.x, y1)]


def floodfill_discretely_pierces(poly: LEdge | VSegment, r: Rect, inst: Instance) -> bool:
    """Rasterise r minus the polyline on the compressed grid and count point-bearing faces.

    Grid index 2k is the k-th distinct coordinate, odd indices the open gaps
    between them, so 4-connectivity over the free cells is the topology of
    the open region.
    """
    segs = _axis_segments(poly, r)
    ids = [i for i in range(inst.n) if r.contains(inst.points[i].x, inst.points[i].y)]
    xs = {r.x_lo, r.x_hi} | {inst.points[i].x for i in ids}
    ys = {r.y_lo, r.y_hi} | {inst.points[i].y for i in ids}
    clipped = []
    for x0, y0, x1, y1 in segs:
        x0, x1 = max(x0, r.x_lo), min(x1, r.x_hi)
        y0, y1 = max(y0, r.y_lo), min(y1, r.y_hi)
        if x0 > x1 or y0 > y1:
            continue
        clipped.append((x0, y0, x1, y1))
        xs.update((x0, x1))
        ys.update((y0, y1))
    xi = {c: 2 * k for k, c in enumerate(sorted(xs))}
    yi = {c: 2 * k for k, c in enumerate(sorted(ys))}
    w, h = 2 * len(xi) - 1, 2 * len(yi) - 1
    free = np.ones((w, h), dtype=bool)
    free[0, :] = free[-1, :] = False
    free[:, 0] = free[:, -1] = False
    for x0, y0, x1, y1 in clipped:
        free[xi[x0] : xi[x1] + 1, yi[y0] : yi[y1] + 1] = False
    labels, count = ndimage.label(free)
    if count != 2:
        return False
    bearing = {labels[xi[inst.points[i].x], yi[inst.points[i].y]] for i in ids}
    bearing.discard(0)
    return len(bearing) == 2


# --------------------------------------------------------------------------
# checkers; each returns None when the property holds, else a witness


def check_support(g: SupportGraph) -> int | None:
    """First rect whose contained points do not induce a connected subgraph."""
    inst = g.instance
    if inst.m == 0 or inst.n == 0:
        return None
    edges = g.pair_array
    chunk = max(1, 4_000_000 // max(1, inst.n + len(edges)))
    for start in range(0, inst.m, chunk):
        bad = _disconnected_rects(inst, edges, range(start, min(inst.m, start + chunk)))
        if bad is not None:
            return bad
    return None


def _disconnected_rects(inst: Instance, edges: np.ndarray, rect_ids: range) -> int | None:
    member = np.zeros((len(rect_ids), inst.n), dtype=bool)
    for k, r in enumerate(rect_ids):
        member[k, inst.contained(r)] = True
    node = np.cumsum(member.ravel()).reshape(member.shape) - 1
    total = int(member.sum())
    if total == 0:
        return None
    if len(edges):
        a, b = edges[:, 0], edges[:, 1]
        rr, ee = np.nonzero(member[:, a] & member[:, b])
        u, v = node[rr, a[ee]], node[rr, b[ee]]
    else:
        u = v = np.empty(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(total, total))
    _, labels = connected_components(graph, directed=False)
    owner = np.nonzero(member)[0]  # block (rect) of each node, in node order
    per_rect = np.zeros(len(rect_ids), dtype=np.int64)
    first_of_label = np.unique(labels, return_index=True)[1]
    np.add.at(per_rect, owner[first_of_label], 1)
    bad = np.flatnonzero(per_rect > 1)
    return rect_ids[int(bad[0])] if len(bad) else None


def _orient(ax, ay, bx, by, cx, cy):
    return np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _segments_conflict(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Closed segments s[k], t[k] (rows x0 y0 x1 y1) meet somewhere other than a shared endpoint."""
    ax, ay, bx, by = s.T
    cx, cy, dx, dy = t.T
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)

    def on_seg(px, py, qx, qy, rx, ry):  # r within bbox of pq
        return (np.minimum(px, qx) <= rx) & (rx <= np.maximum(px, qx)) & (
            np.minimum(py, qy) <= ry
        ) & (ry <= np.maximum(py, qy))

    meet = (o1 * o2 < 0) & (o3 * o4 < 0)
    meet |= (o1 == 0) & on_seg(ax, ay, bx, by, cx, cy)
    meet |= (o2 == 0) & on_seg(ax, ay, bx, by, dx, dy)
    meet |= (o3 == 0) & on_seg(cx, cy, dx, dy, ax, ay)
    meet |= (o4 == 0) & on_seg(cx, cy, dx, dy, bx, by)

    # a shared endpoint alone is fine; collinear overlap past it is not
    same = {}
    for name, (px, py), (qx, qy) in (
        ("ac", (ax, ay), (cx, cy)),
        ("ad", (ax, ay), (dx, dy)),
        ("bc", (bx, by), (cx, cy)),
        ("bd", (bx, by), (dx, dy)),
    ):
        same[name] = (px == qx) & (py == qy)
    shared = same["ac"] | same["ad"] | same["bc"] | same["bd"]
    # the far endpoints relative to the shared one
    ux = np.where(same["ac"] | same["ad"], bx, ax)
    uy = np.where(same["ac"] | same["ad"], by, ay)
    sx = np.where(same["ac"] | same["ad"], ax, bx)
    sy = np.where(same["ac"] | same["ad"], ay, by)
    wx = np.where(same["ac"] | same["bc"], dx, cx)
    wy = np.where(same["ac"] | same["bc"], dy, cy)
    collinear = _orient(sx, sy, ux, uy, wx, wy) == 0
    forward = (ux - sx) * (wx - sx) + (uy - sy) * (wy - sy) > 0
    both = (same["ac"] & same["bd"]) | (same["ad"] & same["bc"])
    return np.where(shared, both | (collinear & forward), meet)


def _coord_dtype(inst: Instance):
    big = 0
    if inst.n:
        big = max(int(np.abs(inst.xs).max()), int(np.abs(inst.ys).max()))
    return np.int64 if big < 2**30 else object


def check_planarity(g: SupportGraph) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """First pair of edges whose straight diagonals meet away from a shared endpoint."""
    k = len(g)
    if k < 2:
        return None
    inst = g.instance
    a, b = g.pair_array[:, 0], g.pair_array[:, 1]
    seg_i = np.stack([inst.xs[a], inst.ys[a], inst.xs[b], inst.ys[b]], axis=1)
    segs = seg_i.astype(_coord_dtype(inst))
    seg64 = seg_i.astype(np.float64)
    bx_lo = np.minimum(seg64[:, 0], seg64[:, 2])
    srt = np.argsort(bx_lo, kind="stable")
    bx_lo = bx_lo[srt]
    bx_hi = np.maximum(seg64[srt, 0], seg64[srt, 2])
    by_lo = np.minimum(seg64[srt, 1], seg64[srt, 3])
    by_hi = np.maximum(seg64[srt, 1], seg64[srt, 3])
    segs = segs[srt]
    block = 256
    for start in range(0, k, block):
        stop = min(k, start + block)
        rows = np.arange(start, stop)
        # only segments starting before this block's rightmost end can overlap it
        end = int(np.searchsorted(bx_lo, bx_hi[start:stop].max(), side="right"))
        cols = np.arange(start, end)
        # bbox overlap prefilter (float bounds are only a filter, the exact test follows)
        ov = (bx_lo[cols][None, :] <= bx_hi[rows, None]) & (by_lo[rows, None] <= by_hi[cols][None, :])
        ov &= (by_lo[cols][None, :] <= by_hi[rows, None])
        ov &= rows[:, None] < cols[None, :]
        ii, jj = np.nonzero(ov)
        if len(ii) == 0:
            continue
        hit = _segments_conflict(segs[rows[ii]], segs[cols[jj]])
        if hit.any():
            f = int(np.flatnonzero(hit)[0])
            return g.pair(srt[rows[ii[f]]]), g.pair(srt[cols[jj[f]]])
    return None


def check_noncrossing(g: SupportGraph) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """First pair of L-edges where a horizontal piece properly crosses a vertical piece."""
    k = len(g)
    if k < 2:
        return None
    h, v = g.segments()
    v_order = np.argsort(v[:, 0], kind="stable")
    v_sorted = v[v_order]
    h_order = np.argsort(h[:, 1], kind="stable")
    h_sorted = h[h_order]
    block = 128
    for start in range(0, k, block):
        hb = h_sorted[start : start + block]
        lo = int(np.searchsorted(v_sorted[:, 0], hb[:, 1].min(), side="right"))
        hi = int(np.searchsorted(v_sorted[:, 0], hb[:, 2].max(), side="left"))
        if lo >= hi:
            continue
        hy, hx0, hx1 = (c[:, None] for c in hb.T)
        vx, vy0, vy1 = v_sorted[lo:hi].T
        hit = (hx0 < vx) & (vx < hx1) & (vy0 < hy) & (hy < vy1)
        ii, jj = np.nonzero(hit)
        if len(ii):
            return g.pair(h_order[start + ii[0]]), g.pair(v_order[lo + jj[0]])
    return None


def check_delaunay(g: SupportGraph) -> tuple[int, int] | None:
    """First edge whose spanned rectangle has a point strictly inside."""
    inst = g.instance
    if len(g) == 0:
        return None
    xs, ys = inst.xs, inst.ys
    pa = g.pair_array
    block = max(1, 2_000_000 // max(1, inst.n))
    for start in range(0, len(pa), block):
        a, b = pa[start : start + block, 0], pa[start : start + block, 1]
        x_lo, x_hi = np.minimum(xs[a], xs[b]), np.maximum(xs[a], xs[b])
        y_lo, y_hi = np.minimum(ys[a], ys[b]), np.maximum(ys[a], ys[b])
        inside = (xs > x_lo[:, None]) & (xs < x_hi[:, None]) & (ys > y_lo[:, None]) & (ys < y_hi[:, None])
        bad = np.flatnonzero(inside.any(axis=1))
        if len(bad):
            return g.pair(start + bad[0])
    return None


def check_edges_nonpiercing(g: SupportGraph) -> tuple[tuple[int, int], int] | None:
    """First (edge, rect) where the edge discretely pierces the rect.

    Only pairs where the polyline enters the rect's interior and both
    endpoints lie outside can be pierced; those go to the scalar predicate.
    """
    inst = g.instance
    if len(g) == 0 or inst.m == 0:
        return None
    counts = np.array([len(inst.contained(r)) for r in range(inst.m)])
    live = np.flatnonzero(counts >= 2)  # each region needs its own point
    if len(live) == 0:
        return None
    rx_lo, ry_lo, rx_hi, ry_hi = (np.ascontiguousarray(c) for c in inst.rect_array[live].T)
    h, v = g.segments()
    pa = g.pair_array
    xs, ys = inst.xs, inst.ys
    block = max(1, (1 << 21) // len(live))
    for start in range(0, len(pa), block):
        sl = slice(start, start + block)
        # bounding box of the polyline against the rect interior
        bx0, bx1 = h[sl, 1], h[sl, 2]
        by0, by1 = v[sl, 1], v[sl, 2]
        near = (rx_lo[None, :] < bx1[:, None]) & (bx0[:, None] < rx_hi[None, :])
        near &= (ry_lo[None, :] < by1[:, None]) & (by0[:, None] < ry_hi[None, :])
        ei, ri = np.nonzero(near)
        if len(ei) == 0:
            continue
        x_lo, y_lo, x_hi, y_hi = rx_lo[ri], ry_lo[ri], rx_hi[ri], ry_hi[ri]
        hy, hx0, hx1 = (c[ei] for c in h[sl].T)
        vx, vy0, vy1 = (c[ei] for c in v[sl].T)
        h_hits = (y_lo < hy) & (hy < y_hi) & (hx0 < x_hi) & (hx1 > x_lo)
        v_hits = (x_lo < vx) & (vx < x_hi) & (vy0 < y_hi) & (vy1 > y_lo)
        a, b = pa[sl, 0][ei], pa[sl, 1][ei]
        a_in = (x_lo < xs[a]) & (xs[a] < x_hi) & (y_lo < ys[a]) & (ys[a] < y_hi)
        b_in = (x_lo < xs[b]) & (xs[b] < x_hi) & (y_lo < ys[b]) & (ys[b] < y_hi)
        for k in np.flatnonzero((h_hits | v_hits) & ~a_in & ~b_in):
            e = g.edge(start + ei[k])
            r = int(live[ri[k]])
            if edge_discretely_pierces_rect(e, inst.rects[r], inst):
                return e.ids, r
    return None


def check_edge_bound(g: SupportGraph) -> bool:
    n = g.instance.n
    return n < 3 or len(g) <= 3 * n - 6


def verify_graph(g: SupportGraph) -> dict[str, object]:
    """Run every checker; value None means the property holds."""
    return {
        "support": check_support(g),
        "planarity": check_planarity(g),
        "noncrossing": check_noncrossing(g),
        "delaunay": check_delaunay(g),
        "nonpiercing": check_edges_nonpiercing(g),
        "edge_bound": None if check_edge_bound(g) else len(g),
    }


def first_divergence(a: SupportGraph, b: SupportGraph) -> dict | None:
    """Earliest point (in sweep order) whose left edges differ between two builds."""
    sa, sb = set(a.pairs), set(b.pairs)
    if sa == sb:
        return None
    inst = a.instance
    rank = np.empty(inst.n, dtype=np.int64)
    rank[inst.x_order] = np.arange(inst.n)
    diff = sorted(sa ^ sb, key=lambda e: (rank[e[1]], e))
    point = diff[0][1]
    return {
        "point": int(point),
        "only_first": sorted(e for e in sa - sb if e[1] == point),
        "only_second": sorted(e for e in sb - sa if e[1] == point),
    }

