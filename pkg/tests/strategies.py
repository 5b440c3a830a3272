"""Hypothesis strategies shared by the property tests."""
from hypothesis import strategies as st

from rectsupport.generators import generate
from rectsupport.geometry import Instance, perturb_to_general_position

coord = st.integers(-40, 40)


def make(points, rects=(), label="t"):
    return Instance.from_coords(points, rects, label)


@st.composite
def raw_instances(draw, max_n=12, max_m=6):
    """Small integer instances, ties allowed, repaired by the rank remap."""
    pts = draw(st.lists(st.tuples(coord, coord), min_size=0, max_size=max_n))
    rects = []
    for _ in range(draw(st.integers(0, max_m))):
        x0, x1 = sorted(draw(st.lists(coord, min_size=2, max_size=2, unique=True)))
        y0, y1 = sorted(draw(st.lists(coord, min_size=2, max_size=2, unique=True)))
        rects.append((x0, y0, x1, y1))
    inst = Instance.from_coords(pts, rects, "hyp")
    return perturb_to_general_position(inst, draw(st.integers(0, 3)))


@st.composite
def nonpiercing_instances(draw, max_n=60, max_m=25, kinds=("squares", "filtered")):
    kind = draw(st.sampled_from(kinds))
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(0, max_m))
    return generate(kind, n, m, draw(st.integers(0, 2**31 - 1)))
