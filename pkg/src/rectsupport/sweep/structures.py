"""Pure-Python sweep structures: barrier intervals, candidate staircase, occlusion set.

Every structure is built over a key universe known up front (the sweep is
offline), so the balanced trees are flat segment trees over sorted keys.
Each structure counts the tree nodes / bitset words it touches in
``steps``.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from typing import Iterator, Sequence

from ..geometry import Point

BELOW_LEFT = "below-left"
ABOVE_LEFT = "above-left"


class _Tree:
    """Flat segment tree with an associative ``op`` and threshold searches."""

    def __init__(self, n: int, op, identity):
        size = 1
        while size < n:
            size *= 2
        self.size = size
        self.op = op
        self.identity = identity
        self.t = [identity] * (2 * size)
        self.steps = 0

    def __getitem__(self, i: int):
        return self.t[self.size + i]

    def set(self, i: int, value) -> None:
        t, op = self.t, self.op
        i += self.size
        t[i] = value
        i >>= 1
        while i:
            t[i] = op(t[2 * i], t[2 * i + 1])
            i >>= 1
            self.steps += 1

    def fold(self, lo: int, hi: int):
        t, op = self.t, self.op
        res = self.identity
        lo += self.size
        hi += self.size
        while lo < hi:
            if lo & 1:
                res = op(res, t[lo])
                lo += 1
            if hi & 1:
                hi -= 1
                res = op(res, t[hi])
            lo >>= 1
            hi >>= 1
            self.steps += 1
        return res

    def _cover(self, lo: int, hi: int) -> tuple[list[int], list[int]]:
        left: list[int] = []
        right: list[int] = []
        lo += self.size
        hi += self.size
        while lo < hi:
            if lo & 1:
                left.append(lo)
                lo += 1
            if hi & 1:
                hi -= 1
                right.append(hi)
            lo >>= 1
            hi >>= 1
            self.steps += 1
        return left, right

    # the two searches assume op is max
    def rightmost_greater(self, lo: int, hi: int, thr) -> int:
        """Largest i in [lo, hi) with value > thr, or -1."""
        t, size = self.t, self.size
        left, right = self._cover(lo, hi)
        for node in right + left[::-1]:
            self.steps += 1
            if t[node] > thr:
                while node < size:
                    self.steps += 1
                    node = 2 * node + 1 if t[2 * node + 1] > thr else 2 * node
                return node - size
        return -1

    def leftmost_greater(self, lo: int, hi: int, thr) -> int:
        """Smallest i in [lo, hi) with value > thr, or -1."""
        t, size = self.t, self.size
        left, right = self._cover(lo, hi)
        for node in left + right[::-1]:
            self.steps += 1
            if t[node] > thr:
                while node < size:
                    self.steps += 1
                    node = 2 * node if t[2 * node] > thr else 2 * node + 1
                return node - size
        return -1


class BarrierIndex:
    """y-intervals of barrier-active rectangles.

    ``upper_barrier(y)`` is the lowest top among active intervals lying wholly
    above y; ``lower_barrier(y)`` the highest bottom among those wholly below.
    """

    def __init__(self, intervals: Sequence[tuple[int, int]]):
        m = len(intervals)
        self._lo = [lo for lo, _ in intervals]
        self._hi = [hi for _, hi in intervals]
        by_lo = sorted(range(m), key=lambda r: self._lo[r])
        by_hi = sorted(range(m), key=lambda r: self._hi[r])
        self._lo_keys = [self._lo[r] for r in by_lo]
        self._hi_keys = [self._hi[r] for r in by_hi]
        self._lo_pos = [0] * m
        self._hi_pos = [0] * m
        for pos, r in enumerate(by_lo):
            self._lo_pos[r] = pos
        for pos, r in enumerate(by_hi):
            self._hi_pos[r] = pos
        self._up = _Tree(m, min, math.inf)  # keyed by bottom, holds top
        self._down = _Tree(m, max, -math.inf)  # keyed by top, holds bottom
        self.active: set[int] = set()

    @property
    def steps(self) -> int:
        return self._up.steps + self._down.steps

    def insert(self, rid: int) -> None:
        self.active.add(rid)
        self._up.set(self._lo_pos[rid], self._hi[rid])
        self._down.set(self._hi_pos[rid], self._lo[rid])

    def remove(self, rid: int) -> None:
        self.active.discard(rid)
        self._up.set(self._lo_pos[rid], math.inf)
        self._down.set(self._hi_pos[rid], -math.inf)

    def upper_barrier(self, y) -> float:
        return self._up.fold(bisect_right(self._lo_keys, y), len(self._lo_keys))

    def lower_barrier(self, y) -> float:
        return self._down.fold(0, bisect_left(self._hi_keys, y))


def upper_barrier(idx: BarrierIndex, y) -> float:
    return idx.upper_barrier(y)


def lower_barrier(idx: BarrierIndex, y) -> float:
    return idx.lower_barrier(y)


class CandidateIndex:
    """Alive points left of the sweep, slotted by y, with max-x staircase search.

    Staircase queries assume every stored point lies left of the query
    corner, which the sweep guarantees.
    """

    def __init__(self, ys: Sequence[int]):
        self._ys = sorted(ys)
        self._slot = {y: i for i, y in enumerate(self._ys)}
        self._tree = _Tree(len(self._ys), max, -math.inf)
        self._points: list[Point | None] = [None] * len(self._ys)
        self.size = 0
        self.queries = 0

    @property
    def steps(self) -> int:
        return self._tree.steps

    def __contains__(self, p: Point) -> bool:
        s = self._slot.get(p.y)
        return s is not None and self._points[s] == p

    def __len__(self) -> int:
        return self.size

    def points(self) -> list[Point]:
        return [p for p in self._points if p is not None]

    def insert(self, p: Point) -> None:
        s = self._slot[p.y]
        if self._points[s] is None:
            self.size += 1
        self._points[s] = p
        self._tree.set(s, p.x)

    def delete(self, p: Point) -> None:
        s = self._slot[p.y]
        if self._points[s] is not None:
            self.size -= 1
        self._points[s] = None
        self._tree.set(s, -math.inf)

    def staircase(self, corner: Point, y_lo, y_hi, orientation: str = BELOW_LEFT) -> list[Point]:
        """Maximal stored points in the open y-range on the given side of the corner.

        Reported walking away from the corner: decreasing y for below-left,
        increasing y for above-left.
        """
        lo = bisect_right(self._ys, y_lo)
        hi = bisect_left(self._ys, y_hi)
        tree, pts = self._tree, self._points
        out: list[Point] = []
        if orientation == BELOW_LEFT:
            hi = min(hi, bisect_left(self._ys, corner.y))
            self.queries += 1
            s = tree.rightmost_greater(lo, hi, -math.inf)
            while s >= 0:
                out.append(pts[s])
                self.queries += 1
                s = tree.rightmost_greater(lo, s, pts[s].x)
        elif orientation == ABOVE_LEFT:
            lo = max(lo, bisect_right(self._ys, corner.y))
            self.queries += 1
            s = tree.leftmost_greater(lo, hi, -math.inf)
            while s >= 0:
                out.append(pts[s])
                self.queries += 1
                s = tree.leftmost_greater(s + 1, hi, pts[s].x)
        else:
            raise ValueError(f"unknown orientation {orientation!r}")
        return out


def staircase_query(idx: CandidateIndex, corner: Point, y_range, orientation: str) -> list[Point]:
    y_lo, y_hi = y_range
    return idx.staircase(corner, y_lo, y_hi, orientation)


def _ctz(word: int) -> int:
    return (word & -word).bit_length() - 1


class _BitSet:
    """64-ary summary bitset over 0..n-1: add, discard, successor."""

    def __init__(self, n: int):
        self.levels: list[list[int]] = []
        size = max(1, n)
        while True:
            words = (size + 63) >> 6
            self.levels.append([0] * words)
            if words == 1:
                break
            size = words
        self.steps = 0

    def add(self, i: int) -> None:
        for lvl in self.levels:
            w = i >> 6
            was = lvl[w]
            lvl[w] = was | (1 << (i & 63))
            self.steps += 1
            if was:
                break
            i = w

    def discard(self, i: int) -> None:
        for lvl in self.levels:
            w = i >> 6
            lvl[w] &= ~(1 << (i & 63))
            self.steps += 1
            if lvl[w]:
                break
            i = w

    def next(self, i: int) -> int:
        """Smallest element >= i, or -1."""
        levels = self.levels
        d = 0
        while d < len(levels):
            w = i >> 6
            if w >= len(levels[d]):
                return -1
            self.steps += 1
            word = levels[d][w] >> (i & 63)
            if word:
                i += _ctz(word)
                while d > 0:
                    d -= 1
                    self.steps += 1
                    i = (i << 6) + _ctz(levels[d][i])
                return i
            i = w + 1
            d += 1
        return -1


class OcclusionIndex:
    """Alive points keyed by y; open-range report for bulk deletion."""

    def __init__(self, ys: Sequence[int]):
        self._ys = sorted(ys)
        self._slot = {y: i for i, y in enumerate(self._ys)}
        self._bits = _BitSet(len(self._ys))
        self._points: list[Point | None] = [None] * len(self._ys)
        self.queries = 0

    @property
    def steps(self) -> int:
        return self._bits.steps

    def insert(self, p: Point) -> None:
        s = self._slot[p.y]
        self._points[s] = p
        self._bits.add(s)

    def delete(self, p: Point) -> None:
        s = self._slot[p.y]
        self._points[s] = None
        self._bits.discard(s)

    def in_range(self, y_lo, y_hi) -> Iterator[Point]:
        """Stored points with y_lo < y < y_hi, increasing y (safe to delete while iterating)."""
        s = bisect_right(self._ys, y_lo)
        end = bisect_left(self._ys, y_hi)
        while True:
            self.queries += 1
            s = self._bits.next(s)
            if s < 0 or s >= end:
                return
            yield self._points[s]
            s += 1

    def points(self) -> list[Point]:
        return [p for p in self._points if p is not None]


def occlude(cand: CandidateIndex, occ: OcclusionIndex, y_span, sink: list | None = None) -> int:
    """Delete every alive point strictly inside the y-span from both indexes.

    Removed points are appended to ``sink`` when given.
    """
    y_lo, y_hi = y_span
    removed = 0
    for q in occ.in_range(y_lo, y_hi):
        cand.delete(q)
        occ.delete(q)
        removed += 1
        if sink is not None:
            sink.append(q)
    return removed
