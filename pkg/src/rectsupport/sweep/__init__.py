"""Fast support builder: left-to-right sweep with barrier, staircase and occlusion indexes.

Two interchangeable kernels run the sweep loop. The compiled one (Cython) is
used when the extension is importable; otherwise the pure-Python one. Set
``RECTSUPPORT_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import IO

import numpy as np

from ..geometry import Instance, LEdge, edges_cross, edge_discretely_pierces_rect, is_delaunay
from ..oracle import first_divergence, naive_build_support, require_valid
from ..support import BuildStats, SupportGraph
from . import _kernel_py
from .structures import (
    ABOVE_LEFT,
    BELOW_LEFT,
    BarrierIndex,
    CandidateIndex,
    OcclusionIndex,
    lower_barrier,
    occlude,
    staircase_query,
    upper_barrier,
)

try:
    from . import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

HAVE_COMPILED = _kernel_c is not None
BACKENDS = ("compiled", "python")


def default_backend() -> str:
    forced = os.environ.get("RECTSUPPORT_BACKEND", "").strip().lower()
    if forced in BACKENDS:
        if forced == "compiled" and not HAVE_COMPILED:
            raise RuntimeError("RECTSUPPORT_BACKEND=compiled but the extension is not built")
        return forced
    return "compiled" if HAVE_COMPILED else "python"


class DivergenceError(RuntimeError):
    """Fast and naive builders disagree; ``report`` locates the first differing point."""

    def __init__(self, report: dict):
        super().__init__(
            f"fast/naive divergence at point {report['point']}: "
            f"naive only {report['only_first']}, fast only {report['only_second']}"
        )
        self.report = report


class SweepInvariantError(AssertionError):
    pass


@dataclass(frozen=True)
class BarrierEvent:
    x: int
    kind: str  # "insert" takes effect after the point at x, "delete" before it
    rect: int
    point: int


def _rect_spans(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """Sweep positions of each rect's first and last contained point (-1 if < 2 points)."""
    pos = np.empty(inst.n, dtype=np.int64)
    pos[inst.x_order] = np.arange(inst.n)
    first = np.full(inst.m, -1, dtype=np.int64)
    last = np.full(inst.m, -1, dtype=np.int64)
    for r in range(inst.m):
        ids = inst.contained(r)
        if len(ids) >= 2:
            first[r] = pos[ids[0]]
            last[r] = pos[ids[-1]]
    return first, last


def barrier_events(inst: Instance) -> list[BarrierEvent]:
    """Insert/delete events keeping a rect active strictly between its outermost points."""
    first, last = _rect_spans(inst)
    order = inst.x_order
    xs = inst.xs
    events = []
    for r in np.flatnonzero(first >= 0):
        a, b = int(order[first[r]]), int(order[last[r]])
        events.append(BarrierEvent(int(xs[a]), "insert", int(r), a))
        events.append(BarrierEvent(int(xs[b]), "delete", int(r), b))
    events.sort(key=lambda e: (e.x, e.kind != "delete", e.rect))
    return events


def _event_lists(inst: Instance):
    first, last = _rect_spans(inst)
    ins: list[list[int]] = [[] for _ in range(inst.n)]
    dels: list[list[int]] = [[] for _ in range(inst.n)]
    for r in np.flatnonzero(first >= 0):
        ins[first[r]].append(int(r))
        dels[last[r]].append(int(r))
    return ins, dels


def _csr(groups: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Rect ids grouped by sweep position; groups[r] = -1 drops rect r."""
    keep = np.flatnonzero(groups >= 0)
    idx = keep[np.argsort(groups[keep], kind="stable")].astype(np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(groups[keep], minlength=n), out=ptr[1:])
    return ptr, idx


def _run_compiled(inst: Instance) -> tuple[np.ndarray, dict[str, int]]:
    n, m = inst.n, inst.m
    order = inst.x_order
    ys_sorted = np.sort(inst.ys)
    yrank = np.searchsorted(ys_sorted, inst.ys[order]).astype(np.int64)
    ra = inst.rect_array
    lo_rank = np.searchsorted(ys_sorted, ra[:, 1]).astype(np.int64)
    hi_rank = np.searchsorted(ys_sorted, ra[:, 3]).astype(np.int64)
    by_lo = np.argsort(ra[:, 1], kind="stable")
    by_hi = np.argsort(ra[:, 3], kind="stable")
    lo_pos = np.empty(m, dtype=np.int64)
    hi_pos = np.empty(m, dtype=np.int64)
    lo_pos[by_lo] = np.arange(m)
    hi_pos[by_hi] = np.arange(m)
    # rects lying wholly above / below each point, as prefix and suffix of the key orders
    ustart = np.searchsorted(lo_rank[by_lo], yrank, side="right").astype(np.int64)
    lend = np.searchsorted(hi_rank[by_hi], yrank, side="right").astype(np.int64)
    first, last = _rect_spans(inst)
    ins_ptr, ins_idx = _csr(first, n)
    del_ptr, del_idx = _csr(last, n)
    local, counters = _kernel_c.run(
        yrank, ustart, lend, lo_pos, hi_pos, lo_rank, hi_rank, ins_ptr, ins_idx, del_ptr, del_idx
    )
    return order[local], counters


def _run_python(inst: Instance, trace: list | None):
    ins, dels = _event_lists(inst)
    order = [int(i) for i in inst.x_order]
    return _kernel_py.run(inst, order, ins, dels, trace)


def _revalidate(g: SupportGraph) -> None:
    """Debug mode: re-check every edge with the exact predicates, in insertion order."""
    inst = g.instance
    rank = np.empty(inst.n, dtype=np.int64)
    rank[inst.x_order] = np.arange(inst.n)
    done: list[LEdge] = []
    for e in sorted(g.edges, key=lambda e: (rank[e.dst.id], -rank[e.src.id])):
        if not is_delaunay(e.src, e.dst, inst):
            raise SweepInvariantError(f"edge {e.ids} is not Delaunay")
        for f in done:
            if edges_cross(e, f):
                raise SweepInvariantError(f"edge {e.ids} crosses {f.ids}")
        for r in inst.rects:
            if edge_discretely_pierces_rect(e, r, inst):
                raise SweepInvariantError(f"edge {e.ids} discretely pierces rect {r.id}")
        done.append(e)


def fast_build_support(
    inst: Instance,
    *,
    validate: bool = True,
    backend: str | None = None,
    stats: BuildStats | None = None,
    trace: list | IO[str] | None = None,
    debug: bool = False,
    diagnostic: bool = False,
) -> SupportGraph:
    """Build the support with the sweep.

    ``trace`` (a list, or a text stream receiving JSON lines) records barriers,
    reported candidates and occluded points per point; it forces the Python
    kernel. ``debug`` re-validates every edge; ``diagnostic`` compares with the
    naive builder and raises DivergenceError on the first difference.
    """
    if validate:
        require_valid(inst)
    backend = backend or default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    records = None if trace is None else []
    if records is not None or backend == "python":
        pairs, counters = _run_python(inst, records)
    else:
        if not HAVE_COMPILED:
            raise RuntimeError("compiled sweep kernel is not available")
        pairs, counters = _run_compiled(inst)
    g = SupportGraph.from_pairs(inst, pairs)
    if stats is not None:
        for key, value in counters.items():
            setattr(stats, key, int(value))
        stats.edges = len(g)
    if records is not None:
        if isinstance(trace, list):
            trace.extend(records)
        else:
            for rec in records:
                trace.write(json.dumps(rec) + "\n")
    if debug:
        _revalidate(g)
    if diagnostic:
        report = first_divergence(naive_build_support(inst, validate=False), g)
        if report is not None:
            raise DivergenceError(report)
    return g


__all__ = [
    "ABOVE_LEFT",
    "BELOW_LEFT",
    "BACKENDS",
    "BarrierEvent",
    "BarrierIndex",
    "CandidateIndex",
    "DivergenceError",
    "HAVE_COMPILED",
    "OcclusionIndex",
    "SweepInvariantError",
    "barrier_events",
    "default_backend",
    "fast_build_support",
    "lower_barrier",
    "occlude",
    "staircase_query",
    "upper_barrier",
]
