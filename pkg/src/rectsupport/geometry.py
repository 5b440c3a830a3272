"""Exact integer primitives and predicates for points, rectangles and L-edges.

All coordinates are Python ints and every predicate is a chain of exact
comparisons. Instances are expected to be in general position (see
:func:`validate_general_position`); :func:`perturb_to_general_position`
repairs raw data by a rank remap.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# int64 headroom for the vectorised paths (differences and small products)
COORD_LIMIT = 2**62


class InstanceError(ValueError):
    """Raised for malformed instance data (wrong shape, non-integers, degenerate rects)."""


@dataclass(frozen=True)
class Point:
    id: int
    x: int
    y: int


@dataclass(frozen=True)
class Rect:
    id: int
    x_lo: int
    y_lo: int
    x_hi: int
    y_hi: int

    def __post_init__(self) -> None:
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise InstanceError(f"rect {self.id} is degenerate: {self.as_list()}")

    def contains(self, x: int, y: int) -> bool:
        """Strict containment; general position keeps points off boundaries."""
        return self.x_lo < x < self.x_hi and self.y_lo < y < self.y_hi

    def as_list(self) -> list[int]:
        return [self.x_lo, self.y_lo, self.x_hi, self.y_hi]


@dataclass(frozen=True)
class LEdge:
    """L-shaped edge: horizontal at the older point's y, vertical at the newer point's x."""

    src: Point  # older, smaller x
    dst: Point  # newer, larger x

    def __post_init__(self) -> None:
        if not self.src.x < self.dst.x:
            raise ValueError("LEdge requires x(src) < x(dst)")

    @classmethod
    def between(cls, a: Point, b: Point) -> "LEdge":
        return cls(a, b) if a.x < b.x else cls(b, a)

    @property
    def h_segment(self) -> tuple[int, int, int]:
        """(y, x_from, x_to)"""
        return self.src.y, self.src.x, self.dst.x

    @property
    def v_segment(self) -> tuple[int, int, int]:
        """(x, y_from, y_to) with y_from < y_to"""
        lo, hi = sorted((self.src.y, self.dst.y))
        return self.dst.x, lo, hi

    @property
    def corner(self) -> tuple[int, int]:
        return self.dst.x, self.src.y

    @property
    def shape(self) -> str:
        return "left-up" if self.dst.y > self.src.y else "up-left"

    @property
    def ids(self) -> tuple[int, int]:
        return self.src.id, self.dst.id


@dataclass(frozen=True)
class Instance:
    points: tuple[Point, ...]
    rects: tuple[Rect, ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "rects", tuple(self.rects))
        for i, p in enumerate(self.points):
            if p.id != i:
                raise InstanceError(f"point ids must be 0..n-1, got {p.id} at {i}")
        for i, r in enumerate(self.rects):
            if r.id != i:
                raise InstanceError(f"rect ids must be 0..m-1, got {r.id} at {i}")

    @classmethod
    def from_coords(
        cls,
        points: Iterable[Sequence[int]],
        rects: Iterable[Sequence[int]] = (),
        label: str = "",
    ) -> "Instance":
        pts = []
        for i, p in enumerate(points):
            if len(p) != 2:
                raise InstanceError(f"point {i} must have 2 coordinates")
            pts.append(Point(i, _as_coord(p[0]), _as_coord(p[1])))
        rs = []
        for i, r in enumerate(rects):
            if len(r) != 4:
                raise InstanceError(f"rect {i} must be [x_lo, y_lo, x_hi, y_hi]")
            x_lo, y_lo, x_hi, y_hi = (_as_coord(c) for c in r)
            rs.append(Rect(i, x_lo, y_lo, x_hi, y_hi))
        return cls(tuple(pts), tuple(rs), str(label))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.rects)

    # cached array views; cached_property writes to __dict__ directly so it
    # works on the frozen dataclass and is ignored by __eq__
    @cached_property
    def xs(self) -> np.ndarray:
        return np.fromiter((p.x for p in self.points), dtype=np.int64, count=self.n)

    @cached_property
    def ys(self) -> np.ndarray:
        return np.fromiter((p.y for p in self.points), dtype=np.int64, count=self.n)

    @cached_property
    def rect_array(self) -> np.ndarray:
        """(m, 4) int64 array of [x_lo, y_lo, x_hi, y_hi]."""
        arr = np.array([r.as_list() for r in self.rects], dtype=np.int64)
        return arr.reshape(self.m, 4)

    @cached_property
    def x_order(self) -> np.ndarray:
        return np.argsort(self.xs, kind="stable")

    @cached_property
    def _contained(self) -> list[np.ndarray]:
        order = self.x_order
        xs_sorted = self.xs[order]
        ys_sorted = self.ys[order]
        out = []
        for x_lo, y_lo, x_hi, y_hi in self.rect_array:
            lo = np.searchsorted(xs_sorted, x_lo, side="right")
            hi = np.searchsorted(xs_sorted, x_hi, side="left")
            ys_slab = ys_sorted[lo:hi]
            sel = np.flatnonzero((ys_slab > y_lo) & (ys_slab < y_hi))
            out.append(order[lo + sel])
        return out

    def contained(self, rect_id: int) -> np.ndarray:
        """Ids of points strictly inside the rect, in increasing x."""
        return self._contained[rect_id]

    @cached_property
    def rect_extents(self) -> np.ndarray:
        """(m, 4) bounding box [min x, min y, max x, max y] of contained points.

        Empty rects get [+big, +big, -big, -big] so every witness test fails.
        """
        big = np.iinfo(np.int64).max
        ext = np.empty((self.m, 4), dtype=np.int64)
        ext[:, :2] = big
        ext[:, 2:] = -big
        for i, ids in enumerate(self._contained):
            if len(ids):
                xs, ys = self.xs[ids], self.ys[ids]
                ext[i] = xs.min(), ys.min(), xs.max(), ys.max()
        return ext

    def with_rects(self, rect_ids: Sequence[int], label: str | None = None) -> "Instance":
        """Same points, a subset of rects renumbered densely (order kept)."""
        rs = tuple(
            Rect(i, *self.rects[j].as_list()) for i, j in enumerate(rect_ids)
        )
        return Instance(self.points, rs, self.label if label is None else label)

    def to_dict(self) -> dict:
        return {
            "points": [[p.x, p.y] for p in self.points],
            "rects": [r.as_list() for r in self.rects],
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        if not isinstance(data, dict):
            raise InstanceError("instance JSON must be an object")
        unknown = set(data) - {"points", "rects", "label"}
        if unknown:
            raise InstanceError(f"unknown instance keys: {sorted(unknown)}")
        return cls.from_coords(
            data.get("points", []), data.get("rects", []), data.get("label", "")
        )


def _as_coord(value) -> int:
    # bool is an int subclass; reject it along with floats
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InstanceError(f"coordinates must be integers, got {value!r}")
    value = int(value)
    if abs(value) >= COORD_LIMIT:
        raise InstanceError(f"coordinate {value} out of range (|c| < 2**62)")
    return value


def dumps_instance(inst: Instance) -> str:
    return json.dumps(inst.to_dict(), separators=(",", ":")) + "\n"


def loads_instance(text: str) -> Instance:
    """Parse canonical instance JSON; json.JSONDecodeError propagates."""
    return Instance.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# general position


@dataclass(frozen=True)
class Violation:
    kind: str  # point-x-tie | point-y-tie | side-tie | point-on-boundary
    axis: str
    value: int
    first: tuple[str, int]
    second: tuple[str, int]
    detail: str = field(default="", compare=False)

    def __str__(self) -> str:
        a, b = self.first, self.second
        return f"{self.kind}: {a[0]} {a[1]} and {b[0]} {b[1]} share {self.axis}={self.value} {self.detail}".rstrip()


def _axis_entries(inst: Instance, axis: str) -> list[tuple[int, str, int]]:
    entries = []
    lo, hi = ("x_lo", "x_hi") if axis == "x" else ("y_lo", "y_hi")
    for p in inst.points:
        entries.append((getattr(p, axis), "point", p.id))
    for r in inst.rects:
        entries.append((getattr(r, lo), f"rect.{lo}", r.id))
        entries.append((getattr(r, hi), f"rect.{hi}", r.id))
    return entries


def validate_general_position(inst: Instance) -> list[Violation]:
    """Every coordinate coincidence that breaks general position; empty means ok."""
    out: list[Violation] = []
    for axis, col in (("x", 0), ("y", 1)):
        coords = inst.xs if axis == "x" else inst.ys
        values = np.concatenate([coords, inst.rect_array[:, col], inst.rect_array[:, col + 2]])
        srt = np.sort(values)
        dup = np.unique(srt[1:][srt[1:] == srt[:-1]])
        if len(dup) == 0:
            continue
        tied = set(dup.tolist())
        entries = sorted(e for e in _axis_entries(inst, axis) if e[0] in tied)
        for value in sorted(tied):
            group = [e for e in entries if e[0] == value]
            for a in range(len(group)):
                for b in range(a + 1, len(group)):
                    out.append(_classify(axis, group[a], group[b]))
    return out


def _classify(axis: str, a: tuple, b: tuple) -> Violation:
    value, kind_a, id_a = a
    _, kind_b, id_b = b
    first = ("point" if kind_a == "point" else "rect", id_a)
    second = ("point" if kind_b == "point" else "rect", id_b)
    if kind_a == "point" and kind_b == "point":
        return Violation(f"point-{axis}-tie", axis, value, first, second)
    if kind_a != "point" and kind_b != "point":
        return Violation("side-tie", axis, value, first, second, f"({kind_a} vs {kind_b})")
    side = kind_b if kind_a == "point" else kind_a
    if kind_a != "point":
        first, second = second, first
    return Violation("point-on-boundary", axis, value, first, second, f"(point {axis} equals {side})")


def perturb_to_general_position(inst: Instance, seed: int = 0) -> Instance:
    """Rank-remap x and y (points and sides jointly) to distinct integers.

    Equal values are ordered lower sides, then points, then upper sides, so a
    point on a boundary moves inside and touching rectangles come to overlap
    (closed-rectangle reading). Remaining ties within one kind follow a
    seeded permutation of ids.
    """
    rng = np.random.default_rng(seed)
    n, m = inst.n, inst.m
    kind_rank = {"rect.x_lo": 0, "rect.y_lo": 0, "point": 1, "rect.x_hi": 2, "rect.y_hi": 2}
    prio = {"point": rng.permutation(n).tolist(), "rect": rng.permutation(m).tolist()}
    new: dict[str, dict[tuple[str, int], int]] = {}
    for axis in ("x", "y"):
        entries = _axis_entries(inst, axis)
        entries.sort(
            key=lambda e: (e[0], kind_rank[e[1]], prio["point" if e[1] == "point" else "rect"][e[2]])
        )
        new[axis] = {(kind, i): rank for rank, (_, kind, i) in enumerate(entries)}
    points = tuple(Point(p.id, new["x"][("point", p.id)], new["y"][("point", p.id)]) for p in inst.points)
    rects = tuple(
        Rect(
            r.id,
            new["x"][("rect.x_lo", r.id)],
            new["y"][("rect.y_lo", r.id)],
            new["x"][("rect.x_hi", r.id)],
            new["y"][("rect.y_hi", r.id)],
        )
        for r in inst.rects
    )
    return Instance(points, rects, inst.label)


# --------------------------------------------------------------------------
# predicates


def _proper_subinterval(a_lo: int, a_hi: int, b_lo: int, b_hi: int) -> bool:
    return b_lo < a_lo and a_hi < b_hi


def rect_pierces(a: Rect, b: Rect) -> bool:
    """Geometric piercing: the projections nest in opposite directions (symmetric)."""
    if _proper_subinterval(a.x_lo, a.x_hi, b.x_lo, b.x_hi) and _proper_subinterval(
        b.y_lo, b.y_hi, a.y_lo, a.y_hi
    ):
        return True
    return _proper_subinterval(b.x_lo, b.x_hi, a.x_lo, a.x_hi) and _proper_subinterval(
        a.y_lo, a.y_hi, b.y_lo, b.y_hi
    )


def piercing_pairs(rects: Sequence[Rect]) -> np.ndarray:
    """All (i, j), i < j, with rect_pierces true, in lexicographic order."""
    m = len(rects)
    if m < 2:
        return np.empty((0, 2), dtype=np.int64)
    arr = np.array([r.as_list() for r in rects], dtype=np.int64)
    x_lo, y_lo, x_hi, y_hi = arr.T
    # x(i) inside x(j) strictly and y(j) inside y(i) strictly
    xin = (x_lo[None, :] < x_lo[:, None]) & (x_hi[:, None] < x_hi[None, :])
    yin = (y_lo[:, None] < y_lo[None, :]) & (y_hi[None, :] < y_hi[:, None])
    rel = xin & yin
    sym = np.triu(rel | rel.T, k=1)
    return np.argwhere(sym)


def is_nonpiercing_family(rects: Sequence[Rect]) -> tuple[int, int] | None:
    """None when no pair pierces, else the first violating pair (by index order)."""
    pairs = piercing_pairs(rects)
    if len(pairs) == 0:
        return None
    i, j = pairs[0]
    return int(i), int(j)


def is_delaunay(p: Point, q: Point, inst: Instance) -> bool:
    """True iff no point of inst lies strictly inside the rectangle spanned by p and q."""
    x_lo, x_hi = sorted((p.x, q.x))
    y_lo, y_hi = sorted((p.y, q.y))
    xs, ys = inst.xs, inst.ys
    inside = (xs > x_lo) & (xs < x_hi) & (ys > y_lo) & (ys < y_hi)
    return not bool(inside.any())


def _h_crosses_v(h: tuple[int, int, int], v: tuple[int, int, int]) -> bool:
    hy, hx0, hx1 = h
    vx, vy0, vy1 = v
    return hx0 < vx < hx1 and vy0 < hy < vy1


def edges_cross(e1: LEdge, e2: LEdge) -> bool:
    """Proper interior crossing of a horizontal piece with the other edge's vertical piece."""
    return _h_crosses_v(e1.h_segment, e2.v_segment) or _h_crosses_v(e2.h_segment, e1.v_segment)


def edge_discretely_pierces_rect(e: LEdge, r: Rect, inst: Instance) -> bool:
    """Does removing the L-polyline split r into two parts that both hold points?

    An L can only cut an axis-parallel rectangle in two ways: one of its
    segments runs clean across it, or the corner sits inside with each
    segment leaving through a different side.
    """
    q, p = e.src, e.dst
    inside = inst.contained(r.id)
    if len(inside) == 0:
        return False
    xs, ys = inst.xs[inside], inst.ys[inside]
    y_min, y_max = min(q.y, p.y), max(q.y, p.y)
    # vertical piece spans r: left part vs right part
    if r.x_lo < p.x < r.x_hi and y_min < r.y_lo and r.y_hi < y_max:
        return bool((xs < p.x).any() and (xs > p.x).any())
    # horizontal piece spans r: bottom part vs top part
    if q.x < r.x_lo and r.x_hi < p.x and r.y_lo < q.y < r.y_hi:
        return bool((ys < q.y).any() and (ys > q.y).any())
    # corner inside, h enters through the left side, v leaves through top/bottom
    if q.x < r.x_lo < p.x < r.x_hi and r.y_lo < q.y < r.y_hi and not (r.y_lo < p.y < r.y_hi):
        if p.y < r.y_lo:
            pocket = (xs < p.x) & (ys < q.y)
        else:
            pocket = (xs < p.x) & (ys > q.y)
        return bool(pocket.any() and (~pocket).any())
    return False


def pierced_rect_matrix(src_ids, dst_ids, inst: Instance) -> np.ndarray:
    """(k, m) mask: does the L-edge src_ids[i] -> dst_ids[i] pierce rect j?

    Sources must lie left of their destinations.
    """
    src_ids = np.asarray(src_ids, dtype=np.int64).reshape(-1)
    dst_ids = np.broadcast_to(np.asarray(dst_ids, dtype=np.int64), src_ids.shape)
    hit = np.zeros((len(src_ids), inst.m), dtype=bool)
    if inst.m == 0 or len(src_ids) == 0:
        return hit
    qx, qy = inst.xs[src_ids], inst.ys[src_ids]
    px, py = inst.xs[dst_ids], inst.ys[dst_ids]
    y_min, y_max = np.minimum(qy, py), np.maximum(qy, py)
    ra, ext = inst.rect_array, inst.rect_extents
    x_lo, y_lo, x_hi, y_hi = (np.ascontiguousarray(c) for c in ra.T)
    # the polyline's bounding box must overlap the rect's interior
    near = (x_lo[None, :] < px[:, None]) & (qx[:, None] < x_hi[None, :])
    near &= (y_lo[None, :] < y_max[:, None]) & (y_min[:, None] < y_hi[None, :])
    ii, jj = np.nonzero(near)
    if len(ii) == 0:
        return hit
    qx, qy, px, py = qx[ii], qy[ii], px[ii], py[ii]
    y_min, y_max = y_min[ii], y_max[ii]
    x_lo, y_lo, x_hi, y_hi = x_lo[jj], y_lo[jj], x_hi[jj], y_hi[jj]
    min_x, min_y, max_x, max_y = (c[jj] for c in ext.T)
    p_in_x = (x_lo < px) & (px < x_hi)
    q_in_y = (y_lo < qy) & (qy < y_hi)
    span_v = p_in_x & (y_min < y_lo) & (y_hi < y_max)
    span_h = (qx < x_lo) & (x_hi < px) & q_in_y
    corner = (qx < x_lo) & p_in_x & q_in_y & ~((y_lo < py) & (py < y_hi))
    sub = span_v & (min_x < px) & (px < max_x)
    sub |= span_h & (min_y < qy) & (qy < max_y)
    # the corner case needs the pocket test; rare enough to go scalar
    pts = inst.points
    for k in np.flatnonzero(corner & (min_x < px)):
        e = LEdge(pts[int(src_ids[ii[k]])], pts[int(dst_ids[ii[k]])])
        sub[k] = edge_discretely_pierces_rect(e, inst.rects[jj[k]], inst)
    hit[ii, jj] = sub
    return hit


def pierced_rect_mask(e: LEdge, inst: Instance) -> np.ndarray:
    """Vectorised :func:`edge_discretely_pierces_rect` over every rect of inst."""
    return pierced_rect_matrix([e.src.id], [e.dst.id], inst)[0]


@dataclass(frozen=True)
class VSegment:
    """Open vertical segment; y bounds may be +-inf for a full line."""

    x: int
    y_lo: float
    y_hi: float

    @classmethod
    def line_through(cls, p: Point) -> "VSegment":
        return cls(p.x, -math.inf, math.inf)
