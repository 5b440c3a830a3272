"""Slab and strip analysis around a point of a rectangle, used to test the support builders.

For a rect R and a point p inside it, the swept part of R is
``piece = [x_lo(R), x(p)] x [y_lo(R), y_hi(R)]``. The rects that this piece
discretely pierces above and below p (the piercing barriers) cut it down to
the slab. The slab is then split into horizontal strips, each with a
rightmost point. Nothing here is used by the builders; the checks assert
structural facts about their output:

* the points of every slab induce a connected subgraph;
* the strips lie in the slab, cover it and overlap on points of P;
* every strip lies between the lower and upper barrier of its rightmost point;
* at the rightmost point of R there are no piercing barriers;
* left neighbours of p inside R lie in the sub-slab bounded by p's barriers.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import asdict, dataclass
from typing import IO

import numpy as np

from .geometry import Instance, Point, Rect, VSegment
from .support import SupportGraph


@dataclass(frozen=True)
class Barriers:
    """Upper/lower barrier rect ids at a point (None when absent) and their bounding y."""

    ub: int | None
    lb: int | None
    upper: float  # y_hi(ub), +inf when absent
    lower: float  # y_lo(lb), -inf when absent


@dataclass(frozen=True)
class SlabDescriptor:
    rect: int
    point: int
    y_top: int
    y_bot: int
    x_left: int
    x_right: int
    upb: int | None = None
    lpb: int | None = None

    def contains(self, x: int, y: int) -> bool:
        # the right side is the sweep line through p, which only p touches
        return self.x_left < x <= self.x_right and self.y_bot < y < self.y_top


@dataclass(frozen=True)
class Strip:
    index: int
    y_lo: int
    y_hi: int
    point: int  # rightmost point of P in the strip


@dataclass(frozen=True)
class StripDecomposition:
    slab: SlabDescriptor
    strips: tuple[Strip, ...]  # increasing index, -t..k

    def __iter__(self):
        return iter(self.strips)

    def __len__(self) -> int:
        return len(self.strips)

    def strip(self, i: int) -> Strip:
        return self.strips[i - self.strips[0].index]


class StripConstructionError(AssertionError):
    """A strip came out with no point of P in it."""


@dataclass(frozen=True)
class SlabViolation:
    rect: int
    point: int
    check: str
    detail: str = ""

    def __str__(self) -> str:
        return f"rect {self.rect}, point {self.point}: {self.check} {self.detail}".rstrip()


def _rect_id(inst: Instance, r) -> int:
    return r.id if isinstance(r, Rect) else int(r)


def _point(inst: Instance, p) -> Point:
    return p if isinstance(p, Point) else inst.points[int(p)]


def _straddled(inst: Instance, x) -> np.ndarray:
    """Rects whose contained points lie on both sides of the vertical line at x."""
    ext = inst.rect_extents
    return (ext[:, 0] < x) & (x < ext[:, 2])


def active_mask(inst: Instance, seg: VSegment) -> np.ndarray:
    """Boolean mask over rects that are active at the open vertical segment."""
    if inst.m == 0:
        return np.zeros(0, dtype=bool)
    ra = inst.rect_array
    x = seg.x
    # the segment cuts the rect in two and each side holds a point
    spans = (seg.y_lo < ra[:, 1]) & (ra[:, 3] < seg.y_hi)
    cut = spans & _straddled(inst, x)
    on_seg = np.flatnonzero((inst.xs == x) & (seg.y_lo < inst.ys) & (inst.ys < seg.y_hi))
    for i in on_seg:
        qx, qy = int(inst.xs[i]), int(inst.ys[i])
        cut |= (ra[:, 0] < qx) & (qx < ra[:, 2]) & (ra[:, 1] < qy) & (qy < ra[:, 3])
    return cut


def active_rects(inst: Instance, seg: VSegment) -> set[int]:
    return {int(r) for r in np.flatnonzero(active_mask(inst, seg))}


def line_sets(inst: Instance, p) -> dict[str, set[int]]:
    """Active rects of the line through p split into contain / above / below."""
    p = _point(inst, p)
    act = active_mask(inst, VSegment.line_through(p))
    ra = inst.rect_array
    inside = (ra[:, 0] < p.x) & (p.x < ra[:, 2]) & (ra[:, 1] < p.y) & (p.y < ra[:, 3])
    return {
        "active": {int(r) for r in np.flatnonzero(act)},
        "contain": {int(r) for r in np.flatnonzero(act & inside)},
        "above": {int(r) for r in np.flatnonzero(act & (ra[:, 1] > p.y))},
        "below": {int(r) for r in np.flatnonzero(act & (ra[:, 3] < p.y))},
    }


def _argbest(ids: np.ndarray, keys: np.ndarray, lowest: bool) -> int | None:
    if len(ids) == 0:
        return None
    k = keys[ids]
    return int(ids[np.argmin(k) if lowest else np.argmax(k)])


def compute_barriers(inst: Instance, p) -> Barriers:
    p = _point(inst, p)
    if inst.m == 0:
        return Barriers(None, None, math.inf, -math.inf)
    ra = inst.rect_array
    act = active_mask(inst, VSegment.line_through(p))
    ub = _argbest(np.flatnonzero(act & (ra[:, 1] > p.y)), ra[:, 3], lowest=True)
    lb = _argbest(np.flatnonzero(act & (ra[:, 3] < p.y)), ra[:, 1], lowest=False)
    return Barriers(
        ub,
        lb,
        math.inf if ub is None else int(ra[ub, 3]),
        -math.inf if lb is None else int(ra[lb, 1]),
    )


def piece_pierces(inst: Instance, piece: tuple[int, int, int, int]) -> np.ndarray:
    """Mask of rects discretely pierced by the box ``piece`` = (x_lo, y_lo, x_hi, y_hi).

    The rect minus the box splits into left/right or top/bottom parts, and
    each part must hold a point.
    """
    x0, y0, x1, y1 = piece
    ra = inst.rect_array
    ext = inst.rect_extents
    across = (ra[:, 0] < x0) & (x1 < ra[:, 2]) & (y0 < ra[:, 1]) & (ra[:, 3] < y1)
    across &= (ext[:, 0] < x0) & (ext[:, 2] > x1)
    along = (x0 < ra[:, 0]) & (ra[:, 2] < x1) & (ra[:, 1] < y0) & (y1 < ra[:, 3])
    along &= (ext[:, 1] < y0) & (ext[:, 3] > y1)
    return across | along


def compute_slab(inst: Instance, r, p) -> SlabDescriptor:
    rid = _rect_id(inst, r)
    rect = inst.rects[rid]
    p = _point(inst, p)
    if not rect.contains(p.x, p.y):
        raise ValueError(f"point {p.id} is not inside rect {rid}")
    ra = inst.rect_array
    act = active_mask(inst, VSegment.line_through(p))
    pierced = act & piece_pierces(inst, (rect.x_lo, rect.y_lo, p.x, rect.y_hi))
    upb = _argbest(np.flatnonzero(pierced & (ra[:, 1] > p.y)), ra[:, 3], lowest=True)
    lpb = _argbest(np.flatnonzero(pierced & (ra[:, 3] < p.y)), ra[:, 1], lowest=False)
    return SlabDescriptor(
        rect=rid,
        point=p.id,
        y_top=rect.y_hi if upb is None else int(ra[upb, 3]),
        y_bot=rect.y_lo if lpb is None else int(ra[lpb, 1]),
        x_left=rect.x_lo,
        x_right=p.x,
        upb=upb,
        lpb=lpb,
    )


def slab_points(inst: Instance, slab: SlabDescriptor) -> np.ndarray:
    xs, ys = inst.xs, inst.ys
    mask = (slab.x_left < xs) & (xs <= slab.x_right) & (slab.y_bot < ys) & (ys < slab.y_top)
    return np.flatnonzero(mask)


STRIP_RULES = ("anchored", "verbatim")


def compute_strips(inst: Instance, slab: SlabDescriptor, rule: str = "anchored") -> StripDecomposition:
    """Peel strips upward and downward from the one holding p.

    Strip 0 runs from the highest bottom among active rects below p to the
    lowest top R_0 among those above. Each later upward strip starts at the
    lowest remaining bottom and ends at the lowest top among rects starting
    above it; rects starting below that one are then dropped.

    ``rule="verbatim"`` drops R_0 (and its lower twin) outright after strip 0.
    That can leave strip 0 disjoint from strip 1 or the top of the slab
    uncovered. The default "anchored" rule instead applies the later-strip
    drop rule with R_0 as the anchor, so strip 1 starts at y_lo(R_0).

    Raises StripConstructionError when a strip has no point of P.
    """
    if rule not in STRIP_RULES:
        raise ValueError(f"unknown strip rule {rule!r}")
    p = inst.points[slab.point]
    ra = inst.rect_array
    ids = slab_points(inst, slab)
    sx, sy = inst.xs[ids], inst.ys[ids]

    def rightmost(lo, hi, index) -> int:
        sel = np.flatnonzero((lo < sy) & (sy < hi))
        if len(sel) == 0:
            raise StripConstructionError(
                f"strip {index} of slab (rect {slab.rect}, point {p.id}) y in ({lo}, {hi}) holds no point"
            )
        return int(ids[sel[np.argmax(sx[sel])]])

    if inst.m:
        up = np.flatnonzero(active_mask(inst, VSegment(p.x, p.y, slab.y_top)))
        down = np.flatnonzero(active_mask(inst, VSegment(p.x, slab.y_bot, p.y)))
    else:
        up = down = np.empty(0, dtype=np.int64)
    up_set = [int(r) for r in up[np.argsort(ra[up, 3])]]  # by top, increasing
    down_set = [int(r) for r in down[np.argsort(-ra[down, 1])]]  # by bottom, decreasing

    hi0 = int(ra[up_set[0], 3]) if up_set else slab.y_top
    lo0 = int(ra[down_set[0], 1]) if down_set else slab.y_bot
    strips = [Strip(0, lo0, hi0, p.id)]
    if rule == "verbatim":
        up_set = up_set[1:]
        down_set = down_set[1:]
    else:
        # keep R_0 and R'_0 so the next strips start inside strip 0
        if up_set:
            up_set = [r for r in up_set if not ra[r, 1] < ra[up_set[0], 1]]
        if down_set:
            down_set = [r for r in down_set if not ra[r, 3] > ra[down_set[0], 3]]

    i = 0
    while up_set:
        i += 1
        s_i = min(up_set, key=lambda r: ra[r, 1])
        y_lo = int(ra[s_i, 1])
        higher = [r for r in up_set if ra[r, 1] > y_lo]
        r_i = min(higher, key=lambda r: ra[r, 3]) if higher else None
        y_hi = slab.y_top if r_i is None else min(slab.y_top, int(ra[r_i, 3]))
        strips.append(Strip(i, y_lo, y_hi, rightmost(y_lo, y_hi, i)))
        up_set = [] if r_i is None else [r for r in up_set if not ra[r, 1] < ra[r_i, 1]]

    i = 0
    while down_set:
        i -= 1
        s_i = max(down_set, key=lambda r: ra[r, 3])
        y_hi = int(ra[s_i, 3])
        lower = [r for r in down_set if ra[r, 3] < y_hi]
        r_i = max(lower, key=lambda r: ra[r, 1]) if lower else None
        y_lo = slab.y_bot if r_i is None else max(slab.y_bot, int(ra[r_i, 1]))
        strips.append(Strip(i, y_lo, y_hi, rightmost(y_lo, y_hi, i)))
        down_set = [] if r_i is None else [r for r in down_set if not ra[r, 3] > ra[r_i, 3]]

    strips.sort(key=lambda s: s.index)
    return StripDecomposition(slab, tuple(strips))


# --------------------------------------------------------------------------
# checks; each returns None or a short description of what failed


def check_strip_conditions(inst: Instance, dec: StripDecomposition) -> str | None:
    """Strips lie in the slab, cover it, and consecutive ones share a point of P."""
    slab = dec.slab
    for s in dec:
        if not (slab.y_bot <= s.y_lo < s.y_hi <= slab.y_top):
            return f"strip {s.index} [{s.y_lo}, {s.y_hi}] leaves slab [{slab.y_bot}, {slab.y_top}]"
    reach = slab.y_bot
    for s in sorted(dec, key=lambda s: s.y_lo):
        if s.y_lo > reach:
            return f"gap ({reach}, {s.y_lo}) not covered by strips"
        reach = max(reach, s.y_hi)
    if reach < slab.y_top:
        return f"gap ({reach}, {slab.y_top}) not covered by strips"
    ids = slab_points(inst, slab)
    sy = inst.ys[ids]
    strips = dec.strips
    for a, b in zip(strips, strips[1:]):
        lo, hi = max(a.y_lo, b.y_lo), min(a.y_hi, b.y_hi)
        if not ((lo < sy) & (sy < hi)).any():
            return f"strips {a.index} and {b.index} share no point of P"
    return None


def check_strip_barriers(inst: Instance, dec: StripDecomposition) -> str | None:
    """Each strip lies between the lower and upper barrier of its rightmost point."""
    for s in dec:
        b = compute_barriers(inst, s.point)
        if not (b.lower <= s.y_lo < s.y_hi <= b.upper):
            return (
                f"strip {s.index} [{s.y_lo}, {s.y_hi}] outside barriers "
                f"[{b.lower}, {b.upper}] of point {s.point}"
            )
    return None


def check_line_partition(inst: Instance, p) -> str | None:
    sets = line_sets(inst, p)
    parts = (sets["contain"], sets["above"], sets["below"])
    if sum(len(s) for s in parts) != len(sets["active"]) or set().union(*parts) != sets["active"]:
        return f"active rects {sorted(sets['active'])} are not split by contain/above/below"
    return None


def check_barrier_order(inst: Instance, slab: SlabDescriptor, b: Barriers) -> str | None:
    ra = inst.rect_array
    if slab.upb is not None and ra[slab.upb, 3] < b.upper:
        return f"upper piercing barrier {slab.upb} tops out below upper barrier {b.ub}"
    if slab.lpb is not None and ra[slab.lpb, 1] > b.lower:
        return f"lower piercing barrier {slab.lpb} bottoms out above lower barrier {b.lb}"
    return None


def _connected(ids: np.ndarray, adjacency: list[list[int]]) -> bool:
    if len(ids) <= 1:
        return True
    members = set(ids.tolist())
    start = next(iter(members))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v in members and v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(members)


@dataclass
class _Report:
    label: str
    rect: int
    point: int
    y_bot: int
    y_top: int
    upb: int | None
    lpb: int | None
    strips: int
    verdict: str = "ok"
    check: str | None = None
    detail: str | None = None


def _emit(sink, rec: _Report) -> None:
    if sink is None:
        return
    data = asdict(rec)
    if isinstance(sink, list):
        sink.append(data)
    else:
        sink.write(json.dumps(data) + "\n")


def analyze_point(
    inst: Instance,
    rid: int,
    p: Point,
    adjacency: list[list[int]],
    rank: np.ndarray,
    strip_checks: bool = True,
    strip_rule: str = "anchored",
) -> tuple[SlabDescriptor, int, SlabViolation | None]:
    """Run every slab check for one (rect, point) pair; returns (slab, strips, violation)."""

    def fail(check, detail):
        return SlabViolation(rid, p.id, check, detail)

    slab = compute_slab(inst, rid, p)
    ids = slab_points(inst, slab)
    if not _connected(ids, adjacency):
        return slab, 0, fail("slab-connectivity", f"points {sorted(ids.tolist())} are not connected")
    b = compute_barriers(inst, p)
    msg = check_barrier_order(inst, slab, b)
    if msg:
        return slab, 0, fail("barrier-order", msg)
    contained = inst.contained(rid)
    if p.id == int(contained[-1]) and (slab.upb is not None or slab.lpb is not None):
        return slab, 0, fail("rightmost-single-slab", f"upb={slab.upb} lpb={slab.lpb}")
    rect = inst.rects[rid]
    for q in adjacency[p.id]:
        qq = inst.points[q]
        if rank[q] < rank[p.id] and rect.contains(qq.x, qq.y):
            if not (slab.contains(qq.x, qq.y) and b.lower < qq.y < b.upper):
                return slab, 0, fail("subslab-neighbour", f"left neighbour {q} lies outside the sub-slab")
    if not strip_checks:
        return slab, 0, None
    try:
        dec = compute_strips(inst, slab, strip_rule)
    except StripConstructionError as exc:
        return slab, 0, fail("strip-point", str(exc))
    msg = check_strip_conditions(inst, dec)
    if msg:
        return slab, len(dec), fail("strip-conditions", msg)
    msg = check_strip_barriers(inst, dec)
    if msg:
        return slab, len(dec), fail("strip-barriers", msg)
    return slab, len(dec), None


def assert_slab_connectivity(
    inst: Instance,
    graph: SupportGraph | None = None,
    *,
    report: list | IO[str] | None = None,
    strip_checks: bool = True,
    strip_rule: str = "anchored",
    stop_at_first: bool = True,
) -> SlabViolation | None:
    """Check every slab of every (rect, point) pair against ``graph``.

    ``graph`` defaults to the naive build. Points are visited in sweep order.
    An edge whose endpoints both lie left of the sweep line through p was
    added no later than p, so the subgraph induced by a slab after p equals
    the one induced by the final graph. ``report`` receives one JSON record
    per pair. Returns the first violation, or None.
    """
    if graph is None:
        from .oracle import naive_build_support

        graph = naive_build_support(inst, validate=False)
    adjacency = graph.adjacency
    rank = np.empty(inst.n, dtype=np.int64)
    rank[inst.x_order] = np.arange(inst.n)
    members: list[list[int]] = [[] for _ in range(inst.n)]
    for rid in range(inst.m):
        for q in inst.contained(rid):
            members[int(q)].append(rid)
    first: SlabViolation | None = None
    for pid in inst.x_order:
        p = inst.points[int(pid)]
        if members[p.id]:
            msg = check_line_partition(inst, p)
            if msg:
                bad = SlabViolation(members[p.id][0], p.id, "line-partition", msg)
                first = first or bad
                if stop_at_first:
                    return first
        for rid in members[p.id]:
            slab, k, bad = analyze_point(inst, rid, p, adjacency, rank, strip_checks, strip_rule)
            rec = _Report(inst.label, rid, p.id, slab.y_bot, slab.y_top, slab.upb, slab.lpb, k)
            if bad is not None:
                rec.verdict, rec.check, rec.detail = "fail", bad.check, bad.detail
            _emit(report, rec)
            if bad is not None:
                first = first or bad
                if stop_at_first:
                    return first
    return first


def rightmost_slabs_single(inst: Instance) -> list[tuple[int, int]]:
    """(rect, point) pairs where the rect's rightmost point still has a piercing barrier."""
    bad = []
    for rid in range(inst.m):
        ids = inst.contained(rid)
        if len(ids) == 0:
            continue
        slab = compute_slab(inst, rid, int(ids[-1]))
        if slab.upb is not None or slab.lpb is not None:
            bad.append((rid, int(ids[-1])))
    return bad


__all__ = [
    "STRIP_RULES",
    "Barriers",
    "SlabDescriptor",
    "SlabViolation",
    "Strip",
    "StripConstructionError",
    "StripDecomposition",
    "active_mask",
    "active_rects",
    "analyze_point",
    "assert_slab_connectivity",
    "check_barrier_order",
    "check_line_partition",
    "check_strip_barriers",
    "check_strip_conditions",
    "compute_barriers",
    "compute_slab",
    "compute_strips",
    "line_sets",
    "piece_pierces",
    "rightmost_slabs_single",
    "slab_points",
]
