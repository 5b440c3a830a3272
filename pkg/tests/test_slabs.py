import io
import json
import math

import pytest
from hypothesis import given

from rectsupport.generators import handcrafted
from rectsupport.geometry import VSegment
from rectsupport.oracle import floodfill_discretely_pierces, naive_build_support
from rectsupport.slabs import (
    STRIP_RULES,
    SlabDescriptor,
    StripConstructionError,
    active_rects,
    assert_slab_connectivity,
    check_strip_barriers,
    check_strip_conditions,
    compute_barriers,
    compute_slab,
    compute_strips,
    line_sets,
    piece_pierces,
    rightmost_slabs_single,
)
from rectsupport.sweep import fast_build_support
from tests.strategies import make, nonpiercing_instances

LINE = (-math.inf, math.inf)


# active rects


def test_line_between_two_points_activates_rect():
    inst = make([(2, 1), (7, 3)], [(0, 0, 10, 4)])
    assert active_rects(inst, VSegment(5, *LINE)) == {0}


def test_point_free_rect_is_never_active():
    inst = make([(20, 1)], [(0, 0, 10, 4)])
    assert active_rects(inst, VSegment(5, *LINE)) == set()


def test_point_on_segment_activates_its_rect():
    inst = make([(5, 2), (20, 30)], [(0, 0, 10, 4)])
    assert active_rects(inst, VSegment.line_through(inst.points[0])) == {0}


def test_short_segment_does_not_cut():
    inst = make([(2, 1), (7, 3)], [(0, 0, 10, 4)])
    assert active_rects(inst, VSegment(5, 1, 9)) == set()


@given(nonpiercing_instances(max_n=20, max_m=8))
def test_active_rects_match_flood_fill(inst):
    for p in inst.points[:6]:
        seg = VSegment.line_through(p)
        expect = {
            r.id
            for r in inst.rects
            if r.contains(p.x, p.y) or floodfill_discretely_pierces(seg, r, inst)
        }
        assert active_rects(inst, seg) == expect


@given(nonpiercing_instances(max_n=40, max_m=20))
def test_active_set_splits_into_contain_above_below(inst):
    for p in inst.points:
        sets = line_sets(inst, p)
        parts = [sets["contain"], sets["above"], sets["below"]]
        assert set().union(*parts) == sets["active"]
        assert sum(map(len, parts)) == len(sets["active"])


# barriers and slabs on the handcrafted instances


def test_barrier_instance_barriers():
    inst = handcrafted("slab-barriers")
    b = compute_barriers(inst, 0)
    assert (b.ub, b.lb, b.upper, b.lower) == (1, 3, 69, 31)


def test_barrier_instance_slab():
    inst = handcrafted("slab-barriers")
    slab = compute_slab(inst, 0, 0)
    assert slab == SlabDescriptor(0, 0, y_top=85, y_bot=11, x_left=0, x_right=60, upb=2, lpb=4)
    assert slab.y_bot < inst.points[0].y < slab.y_top


def test_barrier_instance_piercing_by_flood_fill():
    """Rects 2 and 4 are cut into two point-bearing parts by the swept piece; 1 and 3 are not."""
    inst = handcrafted("slab-barriers")
    r, p = inst.rects[0], inst.points[0]
    piece = make([(q.x, q.y) for q in inst.points], [(r.x_lo, r.y_lo, p.x, r.y_hi)])
    cut = {
        other.id
        for other in inst.rects[1:]
        if _box_splits(inst, (r.x_lo, r.y_lo, p.x, r.y_hi), other)
    }
    assert cut == {2, 4}
    assert set(piece_pierces(inst, (r.x_lo, r.y_lo, p.x, r.y_hi)).nonzero()[0]) == {2, 4}


def _box_splits(inst, box, rect):
    """Remove the box from the rect on a unit grid and count point-bearing components."""
    from scipy import ndimage
    import numpy as np

    x0, y0, x1, y1 = rect.x_lo, rect.y_lo, rect.x_hi, rect.y_hi
    free = np.ones((x1 - x0 + 1, y1 - y0 + 1), dtype=bool)
    free[[0, -1], :] = False
    free[:, [0, -1]] = False
    bx0, by0, bx1, by1 = box
    free[max(bx0, x0) - x0 : min(bx1, x1) - x0 + 1, max(by0, y0) - y0 : min(by1, y1) - y0 + 1] = False
    labels, count = ndimage.label(free)
    owners = {labels[q.x - x0, q.y - y0] for q in inst.points if rect.contains(q.x, q.y)}
    owners.discard(0)
    return count == 2 and len(owners) == 2


def test_unpierced_piece_is_whole_slab():
    inst = make([(2, 3), (5, 6)], [(0, 0, 10, 10)])
    slab = compute_slab(inst, 0, 1)
    assert (slab.y_bot, slab.y_top, slab.upb, slab.lpb) == (0, 10, None, None)


def test_slab_rejects_outside_point():
    inst = make([(2, 3), (50, 6)], [(0, 0, 10, 10)])
    with pytest.raises(ValueError):
        compute_slab(inst, 0, 1)


def test_rightmost_point_has_single_slab():
    inst = handcrafted("slab-barriers")
    last = int(inst.contained(0)[-1])
    slab = compute_slab(inst, 0, last)
    assert slab.upb is None and slab.lpb is None
    assert rightmost_slabs_single(inst) == []


# strips


def test_no_active_rects_gives_one_strip():
    inst = make([(2, 3), (5, 6)], [(0, 0, 10, 10)])
    dec = compute_strips(inst, compute_slab(inst, 0, 1))
    assert [(s.index, s.y_lo, s.y_hi, s.point) for s in dec] == [(0, 0, 10, 1)]


def test_strip_instance_nesting():
    inst = handcrafted("strip-nesting")
    dec = compute_strips(inst, compute_slab(inst, 0, 0))
    assert [(s.index, s.y_lo, s.y_hi, s.point) for s in dec] == [
        (0, 0, 30, 0),
        (1, 20, 70, 1),
        (2, 45, 100, 5),
    ]
    assert check_strip_conditions(inst, dec) is None
    assert check_strip_barriers(inst, dec) is None


def test_strip_instance_verbatim_rule_also_gives_three_strips():
    inst = handcrafted("strip-nesting")
    dec = compute_strips(inst, compute_slab(inst, 0, 0), rule="verbatim")
    assert [(s.y_lo, s.y_hi) for s in dec] == [(0, 30), (15, 70), (45, 100)]


def test_verbatim_rule_can_leave_slab_uncovered():
    # dropping the first lower rect outright loses the band between the slab
    # bottom and strip 0
    inst = handcrafted("slab-barriers")
    slab = compute_slab(inst, 0, 0)
    dec = compute_strips(inst, slab, rule="verbatim")
    assert check_strip_conditions(inst, dec) == "gap (11, 31) not covered by strips"
    anchored = compute_strips(inst, slab)
    assert [(s.y_lo, s.y_hi) for s in anchored] == [(11, 39), (31, 69), (61, 85)]
    assert check_strip_conditions(inst, anchored) is None


def test_missing_strip_point_is_loud():
    inst = make([(1, 50), (9, 50 + 1)], [(0, 0, 10, 100)])
    bogus = SlabDescriptor(0, 0, y_top=100, y_bot=0, x_left=0, x_right=1)
    # a fake active rect above p with no points between it and the slab top
    inst = make([(5, 10), (2, 60), (8, 61)], [(0, 0, 10, 100), (1, 55, 9, 70)])
    slab = SlabDescriptor(0, 0, y_top=100, y_bot=0, x_left=3, x_right=5)
    with pytest.raises(StripConstructionError):
        compute_strips(inst, slab)
    assert bogus.contains(1, 50)


def test_unknown_rule_rejected():
    inst = make([(2, 3)], [(0, 0, 10, 10)])
    with pytest.raises(ValueError):
        compute_strips(inst, compute_slab(inst, 0, 0), rule="other")


@given(nonpiercing_instances(max_n=60, max_m=25))
def test_strip_conditions_hold(inst):
    for r in range(inst.m):
        for p in inst.contained(r):
            dec = compute_strips(inst, compute_slab(inst, r, int(p)))
            assert check_strip_conditions(inst, dec) is None
            assert check_strip_barriers(inst, dec) is None


# connectivity


@pytest.mark.parametrize("name", ["slab-barriers", "strip-nesting"])
def test_handcrafted_instances_pass(name):
    assert assert_slab_connectivity(handcrafted(name)) is None


@given(nonpiercing_instances(max_n=60, max_m=25))
def test_slab_connectivity_holds(inst):
    assert assert_slab_connectivity(inst) is None
    assert rightmost_slabs_single(inst) == []


@given(nonpiercing_instances(max_n=40, max_m=15))
def test_fast_graph_passes_slab_checks(inst):
    assert assert_slab_connectivity(inst, fast_build_support(inst)) is None


def test_deleted_edge_is_caught():
    inst = handcrafted("slab-barriers")
    g = naive_build_support(inst)
    caught = []
    for pair in g.pairs:
        bad = assert_slab_connectivity(inst, g.without(pair))
        if bad is not None:
            caught.append((pair, bad))
    assert caught
    pair, bad = caught[0]
    assert bad.check == "slab-connectivity"
    assert inst.rects[bad.rect].contains(inst.points[bad.point].x, inst.points[bad.point].y)


def test_report_lines():
    inst = handcrafted("slab-barriers")
    stream = io.StringIO()
    assert assert_slab_connectivity(inst, report=stream) is None
    recs = [json.loads(line) for line in stream.getvalue().splitlines()]
    total = sum(len(inst.contained(r)) for r in range(inst.m))
    assert len(recs) == total
    first = next(r for r in recs if r["rect"] == 0 and r["point"] == 0)
    assert first["verdict"] == "ok" and first["upb"] == 2 and first["y_top"] == 85
    assert first["strips"] == 3 and first["label"] == "slab-barriers"


def test_rules_listed():
    assert STRIP_RULES == ("anchored", "verbatim")
