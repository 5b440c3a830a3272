"""Split a rectangle family into non-piercing classes and build one support per class.

Piercing pairs are exactly the comparable pairs of the order

    a < b  iff  x(a) is strictly inside x(b) and y(b) is strictly inside y(a),

so the piercing graph is a comparability graph. Colouring every rect by the
length of the longest chain ending at it is then a proper colouring with as
many colours as the largest clique.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .geometry import Instance, Rect, rect_pierces
from .support import SupportGraph


def _rect_arr(rects: Sequence[Rect]) -> np.ndarray:
    return np.array([r.as_list() for r in rects], dtype=np.int64).reshape(len(rects), 4)


@dataclass(frozen=True)
class PiercingOrder:
    """Strict order over rect indices; ``matrix[a, b]`` means a precedes b."""

    matrix: np.ndarray

    @classmethod
    def from_rects(cls, rects: Sequence[Rect]) -> "PiercingOrder":
        x_lo, y_lo, x_hi, y_hi = _rect_arr(rects).T
        xin = (x_lo[None, :] < x_lo[:, None]) & (x_hi[:, None] < x_hi[None, :])
        yout = (y_lo[:, None] < y_lo[None, :]) & (y_hi[None, :] < y_hi[:, None])
        mat = xin & yout
        mat.setflags(write=False)
        return cls(mat)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    def less(self, a: int, b: int) -> bool:
        return bool(self.matrix[a, b])

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in np.argwhere(self.matrix)]

    def comparability(self) -> set[tuple[int, int]]:
        return {(min(a, b), max(a, b)) for a, b in self.pairs}


def build_piercing_graph(rects: Sequence[Rect]) -> list[tuple[int, int]]:
    """Pairs (i, j), i < j, of geometrically piercing rects (pairwise scalar checks)."""
    return [(i, j) for i, j in combinations(range(len(rects)), 2) if rect_pierces(rects[i], rects[j])]


def verify_comparability(rects: Sequence[Rect]) -> tuple | None:
    """None when the order is strict and its comparability equals the piercing graph.

    Otherwise a witness: ("reflexive", a), ("antisymmetric", a, b),
    ("transitivity", a, b, c) or ("mismatch", a, b).
    """
    order = PiercingOrder.from_rects(rects)
    mat = order.matrix
    diag = np.flatnonzero(np.diag(mat))
    if len(diag):
        return ("reflexive", int(diag[0]))
    both = np.argwhere(mat & mat.T)
    if len(both):
        return ("antisymmetric", int(both[0][0]), int(both[0][1]))
    m = order.m
    if m:
        via = mat.astype(np.int64) @ mat.astype(np.int64)
        gaps = np.argwhere((via > 0) & ~mat)
        if len(gaps):
            a, c = (int(v) for v in gaps[0])
            b = int(np.flatnonzero(mat[a] & mat[:, c])[0])
            return ("transitivity", a, b, c)
    diff = sorted(order.comparability() ^ set(build_piercing_graph(rects)))
    if diff:
        return ("mismatch", *diff[0])
    return None


@dataclass(frozen=True)
class ColoredPartition:
    colors: tuple[int, ...]  # 1-based colour per rect
    num_colors: int

    @property
    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {c: [] for c in range(1, self.num_colors + 1)}
        for rid, c in enumerate(self.colors):
            out[c].append(rid)
        return out

    def to_json(self) -> str:
        return json.dumps({"colors": list(self.colors), "num_colors": self.num_colors}) + "\n"


def min_color(rects: Sequence[Rect]) -> ColoredPartition:
    """Colour each rect by the longest chain of the piercing order ending at it."""
    m = len(rects)
    if m == 0:
        return ColoredPartition((), 0)
    mat = PiercingOrder.from_rects(rects).matrix
    arr = _rect_arr(rects)
    # a < b forces width(a) < width(b), so increasing width is a linear extension
    color = np.zeros(m, dtype=np.int64)
    for b in np.argsort(arr[:, 2] - arr[:, 0], kind="stable"):
        below = np.flatnonzero(mat[:, b])
        color[b] = 1 + (int(color[below].max()) if len(below) else 0)
    return ColoredPartition(tuple(int(c) for c in color), int(color.max()))


def max_clique_size(m: int, edges) -> int:
    """Exhaustive maximum clique (branch on vertices in index order); small graphs only."""
    adj = [0] * m
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    best = 0

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + bin(cand).count("1") <= best:
            return
        while cand:
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            grow(size + 1, cand & adj[v])
            if size + bin(cand).count("1") <= best:
                return

    grow(0, (1 << m) - 1)
    return best


def layered_support(inst: Instance, *, backend: str | None = None) -> list[SupportGraph]:
    """One support per colour class, each over the full point set and that class's rects."""
    from .sweep import fast_build_support

    part = min_color(inst.rects)
    if part.num_colors == 0:
        return [fast_build_support(inst, backend=backend)]
    layers = []
    for c, ids in part.classes.items():
        sub = inst.with_rects(ids, label=f"{inst.label}#{c}")
        layers.append(fast_build_support(sub, backend=backend))
    return layers


def union_graph(inst: Instance, layers: Sequence[SupportGraph]) -> SupportGraph:
    """Union of layer edges as a graph over the full instance."""
    parts = [g.pair_array for g in layers if len(g)]
    pairs = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return SupportGraph.from_pairs(inst, pairs)


__all__ = [
    "ColoredPartition",
    "PiercingOrder",
    "build_piercing_graph",
    "layered_support",
    "max_clique_size",
    "min_color",
    "union_graph",
    "verify_comparability",
]
