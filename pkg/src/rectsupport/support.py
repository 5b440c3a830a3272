from __future__ import annotations

from dataclasses import dataclass, fields
from functools import cached_property
from typing import Iterable

import numpy as np

from .geometry import Instance, LEdge


class EdgeFileError(ValueError):
    pass


@dataclass
class BuildStats:
    """Operation counters collected by a builder run."""

    inserts: int = 0
    deletes: int = 0
    queries: int = 0
    occlusions: int = 0
    steps: int = 0  # tree nodes / words touched inside index operations
    edges: int = 0

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class SupportGraph:
    """Points of an instance plus L-edges, stored as a sorted (k, 2) array of
    (older id, newer id) rows; LEdge objects are built on demand."""

    __slots__ = ("instance", "pair_array", "__dict__")

    def __init__(self, instance: Instance, pairs: np.ndarray):
        self.instance = instance
        self.pair_array = pairs
        pairs.flags.writeable = False

    @classmethod
    def from_pairs(cls, inst: Instance, pairs) -> "SupportGraph":
        """Orient each pair older-first, drop duplicates and sort by id pair."""
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if len(arr):
            if (arr < 0).any() or (arr >= inst.n).any() or (arr[:, 0] == arr[:, 1]).any():
                raise ValueError("edge endpoints must be distinct point ids")
            xs = inst.xs
            swap = xs[arr[:, 0]] > xs[arr[:, 1]]
            arr = np.where(swap[:, None], arr[:, ::-1], arr)
            arr = np.unique(arr, axis=0)
        return cls(inst, np.ascontiguousarray(arr))

    @classmethod
    def from_edges(cls, inst: Instance, edges: Iterable[LEdge]) -> "SupportGraph":
        return cls.from_pairs(inst, [e.ids for e in edges])

    @cached_property
    def edges(self) -> tuple[LEdge, ...]:
        pts = self.instance.points
        return tuple(LEdge(pts[a], pts[b]) for a, b in self.pair_array.tolist())

    def edge(self, i: int) -> LEdge:
        a, b = self.pair_array[i]
        pts = self.instance.points
        return LEdge(pts[int(a)], pts[int(b)])

    def pair(self, i: int) -> tuple[int, int]:
        a, b = self.pair_array[i]
        return int(a), int(b)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.pair_array.tolist()]

    def __len__(self) -> int:
        return len(self.pair_array)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """(k, 3) arrays: horizontal pieces (y, x0, x1) and vertical pieces (x, y0, y1)."""
        xs, ys = self.instance.xs, self.instance.ys
        a, b = self.pair_array[:, 0], self.pair_array[:, 1]
        h = np.stack([ys[a], xs[a], xs[b]], axis=1)
        v = np.stack([xs[b], np.minimum(ys[a], ys[b]), np.maximum(ys[a], ys[b])], axis=1)
        return h.reshape(-1, 3), v.reshape(-1, 3)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.instance.n)]
        for a, b in self.pair_array.tolist():
            adj[a].append(b)
            adj[b].append(a)
        for lst in adj:
            lst.sort()
        return adj

    def diagonals(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Straight-segment embedding: each edge drawn as the diagonal of its rectangle."""
        return [((e.src.x, e.src.y), (e.dst.x, e.dst.y)) for e in self.edges]

    def without(self, pair: tuple[int, int]) -> "SupportGraph":
        keep = ~((self.pair_array[:, 0] == pair[0]) & (self.pair_array[:, 1] == pair[1]))
        return SupportGraph(self.instance, self.pair_array[keep].copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SupportGraph):
            return NotImplemented
        return self.instance == other.instance and np.array_equal(self.pair_array, other.pair_array)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SupportGraph(label={self.instance.label!r}, n={self.instance.n}, edges={len(self)})"


def dumps_edges(g: SupportGraph) -> str:
    """One "fromId toId" line per edge (older point first), sorted by id pair."""
    return "".join(f"{a} {b}\n" for a, b in g.pair_array.tolist())


def loads_edges(text: str, inst: Instance) -> SupportGraph:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeFileError(f"line {lineno}: expected 'fromId toId', got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeFileError(f"line {lineno}: ids must be integers") from None
        if not (0 <= a < inst.n and 0 <= b < inst.n) or a == b:
            raise EdgeFileError(f"line {lineno}: bad point ids {a} {b} for n={inst.n}")
        pairs.append((a, b))
    return SupportGraph.from_pairs(inst, pairs)
