"""Pure-Python sweep loop over the structures in ``structures``."""
from __future__ import annotations

import math
from typing import Sequence

from ..geometry import Instance
from .structures import ABOVE_LEFT, BELOW_LEFT, BarrierIndex, CandidateIndex, OcclusionIndex, occlude


def _finite(v):
    return None if math.isinf(v) else int(v)


def run(
    inst: Instance,
    order: Sequence[int],
    insertions: Sequence[Sequence[int]],
    removals: Sequence[Sequence[int]],
    trace: list | None = None,
) -> tuple[list[tuple[int, int]], dict[str, int]]:
    """Sweep points in ``order``; rect events are indexed by sweep position.

    Returns (edges as (older id, newer id), counters).
    """
    pts = inst.points
    ys = [p.y for p in pts]
    barrier = BarrierIndex([(r.y_lo, r.y_hi) for r in inst.rects])
    cand = CandidateIndex(ys)
    occ = OcclusionIndex(ys)
    inserts = deletes = occlusions = 0
    barrier_queries = 0
    edges: list[tuple[int, int]] = []

    for k, pid in enumerate(order):
        p = pts[pid]
        for r in removals[k]:
            barrier.remove(r)
            deletes += 1
        upper = barrier.upper_barrier(p.y)
        lower = barrier.lower_barrier(p.y)
        barrier_queries += 2

        below = cand.staircase(p, lower, p.y, BELOW_LEFT)
        above = cand.staircase(p, p.y, upper, ABOVE_LEFT)
        for q in below:
            edges.append((q.id, p.id))
        for q in above:
            edges.append((q.id, p.id))

        # the reported points are the extremes of the union of vertical spans
        lo_y = below[-1].y if below else p.y
        hi_y = above[-1].y if above else p.y
        gone: list = []
        for span in ((lo_y, p.y), (p.y, hi_y)):
            n_removed = occlude(cand, occ, span, gone)
            deletes += n_removed
            occlusions += n_removed

        cand.insert(p)
        occ.insert(p)
        inserts += 1
        for r in insertions[k]:
            barrier.insert(r)
            inserts += 1

        if trace is not None:
            trace.append({
                "point": p.id,
                "upper": _finite(upper),
                "lower": _finite(lower),
                "below": [q.id for q in below],
                "above": [q.id for q in above],
                "occluded": [q.id for q in gone],
            })

    counters = {
        "inserts": inserts,
        "deletes": deletes,
        "queries": barrier_queries + cand.queries + occ.queries,
        "occlusions": occlusions,
        "steps": barrier.steps + cand.steps + occ.steps,
    }
    return edges, counters
