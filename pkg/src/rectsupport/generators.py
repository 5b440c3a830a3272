"""Instance generators. Every output is in general position; squares and filtered are non-piercing."""
from __future__ import annotations

import numpy as np

from .geometry import Instance, is_nonpiercing_family, perturb_to_general_position, validate_general_position

KINDS = ("squares", "filtered", "piercing-chain", "grid", "random")
SPAN = 1 << 24


def _tied_owners(pts: np.ndarray, rects: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Masks of points / rects owning a coordinate that some other owner shares."""
    n, m = len(pts), len(rects)
    bad_p = np.zeros(n, dtype=bool)
    bad_r = np.zeros(m, dtype=bool)
    owner = np.concatenate([np.arange(n), n + np.arange(m), n + np.arange(m)])
    for col in (0, 1):
        values = np.concatenate([pts[:, col], rects[:, col], rects[:, col + 2]])
        order = np.argsort(values, kind="stable")
        srt = values[order]
        dup = np.zeros(len(srt), dtype=bool)
        eq = srt[1:] == srt[:-1]
        dup[1:] |= eq
        dup[:-1] |= eq
        hit = owner[order[dup]]
        bad_p[hit[hit < n]] = True
        bad_r[hit[hit >= n] - n] = True
    return bad_p, bad_r


def _untie(pts, rects, redraw_points, redraw_rects, max_rounds: int = 200) -> None:
    """Redraw colliding points/rects in place until all coordinates are distinct."""
    for _ in range(max_rounds):
        bad_p, bad_r = _tied_owners(pts, rects)
        if not bad_p.any() and not bad_r.any():
            return
        if bad_p.any():
            pts[bad_p] = redraw_points(int(bad_p.sum()))
        if bad_r.any():
            rects[bad_r] = redraw_rects(np.flatnonzero(bad_r))
    raise RuntimeError("could not reach general position; coordinate span too small")


def _finish(pts: np.ndarray, rects: np.ndarray, label: str) -> Instance:
    inst = Instance.from_coords(pts.tolist(), rects.tolist(), label)
    # order-preserving on tie-free data; compacts coordinates to ranks
    inst = perturb_to_general_position(inst)
    assert not validate_general_position(inst)
    return inst


def _uniform_points(rng, k: int, span: int) -> np.ndarray:
    return rng.integers(0, span, size=(k, 2), dtype=np.int64)


def squares(n: int, m: int, seed: int = 0, *, size_range: tuple[float, float] | None = None) -> Instance:
    """Random points plus squares of pairwise distinct side lengths (never piercing)."""
    rng = np.random.default_rng(seed)
    span = SPAN
    if size_range is None:
        hi = rng.uniform(0.05, 0.35)
        size_range = (hi / 4, hi)
    lo_s, hi_s = int(size_range[0] * span), int(size_range[1] * span)
    sides = np.empty(0, dtype=np.int64)
    while len(sides) < m:
        sides = np.unique(np.concatenate([sides, rng.integers(max(lo_s, 2), max(hi_s, 3), size=m)]))
    sides = rng.permutation(sides)[:m]

    def place(idx):
        s = sides[idx]
        x = rng.integers(-s // 2, span - s // 2, dtype=np.int64)
        y = rng.integers(-s // 2, span - s // 2, dtype=np.int64)
        return np.stack([x, y, x + s, y + s], axis=1)

    pts = _uniform_points(rng, n, span)
    rects = place(np.arange(m)) if m else np.empty((0, 4), dtype=np.int64)
    _untie(pts, rects, lambda k: _uniform_points(rng, k, span), place)
    return _finish(pts, rects, f"squares-n{n}-m{m}-s{seed}")


def _random_rects(rng, k: int, span: int, max_frac: float) -> np.ndarray:
    w = rng.integers(2, max(3, int(max_frac * span)), size=k)
    h = rng.integers(2, max(3, int(max_frac * span)), size=k)
    x = rng.integers(-w // 2, span - w // 2)
    y = rng.integers(-h // 2, span - h // 2)
    return np.stack([x, y, x + w, y + h], axis=1).astype(np.int64)


def random_rects(n: int, m: int, seed: int = 0, *, max_frac: float | None = None) -> Instance:
    """Random points and independent random rectangles; piercing pairs are allowed."""
    rng = np.random.default_rng(seed)
    span = SPAN
    frac = rng.uniform(0.1, 0.6) if max_frac is None else max_frac
    pts = _uniform_points(rng, n, span)
    rects = _random_rects(rng, m, span, frac)
    _untie(pts, rects, lambda k: _uniform_points(rng, k, span), lambda idx: _random_rects(rng, len(idx), span, frac))
    return _finish(pts, rects, f"random-n{n}-m{m}-s{seed}")


def filtered(n: int, m: int, seed: int = 0, *, attempts: int | None = None) -> Instance:
    """Random rectangles kept greedily when they pierce none kept so far.

    Stops at m rectangles or after ``attempts`` candidates (default 20 m).
    """
    rng = np.random.default_rng(seed)
    span = SPAN
    frac = rng.uniform(0.1, 0.6)
    pool_size = attempts if attempts is not None else 20 * m
    pts = _uniform_points(rng, n, span)
    pool = _random_rects(rng, pool_size, span, frac)
    _untie(pts, pool, lambda k: _uniform_points(rng, k, span), lambda idx: _random_rects(rng, len(idx), span, frac))
    kept: list[int] = []
    for i in range(pool_size):
        if len(kept) == m:
            break
        if kept:
            a = pool[i]
            b = pool[kept]
            # a inside b horizontally and b inside a vertically, or the reverse
            p1 = (b[:, 0] < a[0]) & (a[2] < b[:, 2]) & (a[1] < b[:, 1]) & (b[:, 3] < a[3])
            p2 = (a[0] < b[:, 0]) & (b[:, 2] < a[2]) & (b[:, 1] < a[1]) & (a[3] < b[:, 3])
            if (p1 | p2).any():
                continue
        kept.append(i)
    inst = _finish(pts, pool[kept].reshape(-1, 4), f"filtered-n{n}-m{m}-s{seed}")
    assert is_nonpiercing_family(inst.rects) is None
    return inst


def piercing_chain(k: int, n: int = 0, seed: int = 0) -> Instance:
    """k pairwise piercing rectangles around the origin plus witness points.

    Rect i has width decreasing and height increasing in i. Each rect gets a
    point in its left and right margins beyond the narrower rects and in its
    top and bottom margins beyond the shorter ones, so every pair pierces
    with points on both sides. Extra random points fill up to n.
    """
    s = 8 * k + 8
    rects = [[-s * (k - i), -s * (i + 1) - 2, s * (k - i) + 1, s * (i + 1) + 3] for i in range(k)]
    pts = []
    for i in range(k):
        pts.append([-s * (k - i) + 3, 4 * i + 1 - 2 * k])
        pts.append([s * (k - i) - 3, 4 * i + 3 - 2 * k])
        pts.append([4 * i + 1 - 2 * k, s * (i + 1) - 1])
        pts.append([4 * i + 3 - 2 * k, -s * (i + 1) + 1])
    p_arr = np.array(pts, dtype=np.int64).reshape(-1, 2)
    r_arr = np.array(rects, dtype=np.int64).reshape(-1, 4)
    extra = max(0, n - len(p_arr))
    if extra:
        rng = np.random.default_rng(seed)
        lim = s * (k + 2) + 4 * n  # room for n distinct x and y values
        base = len(p_arr)
        p_arr = np.concatenate([p_arr, rng.integers(-lim, lim, size=(extra, 2))])

        def redraw(count):
            return rng.integers(-lim, lim, size=(count, 2))

        # only extra points may move; witnesses and sides are tie-free by construction
        for _ in range(200):
            bad_p, _ = _tied_owners(p_arr, r_arr)
            bad_p[:base] = False
            if not bad_p.any():
                break
            p_arr[bad_p] = redraw(int(bad_p.sum()))
        else:
            raise RuntimeError("could not place extra points")
    return _finish(p_arr, r_arr, f"piercing-chain-k{k}-n{len(p_arr)}")


def grid(n: int, m: int, seed: int = 0) -> Instance:
    """Deterministic sheared lattice of ~n points and m distinct-size squares (seed unused)."""
    g = 1
    while g * g < n:
        g += 1
    ij = [(i, j) for i in range(g) for j in range(g)][:n]
    # shear so that no two points share a coordinate; multiples of 4 keep
    # points off rect sides, which are 1 or 3 mod 4
    pts = np.array([[4 * (i * g + j), 4 * (j * g + i)] for i, j in ij], dtype=np.int64).reshape(-1, 2)
    extent = g * g
    step = max(1, extent // max(m, 1))
    base = 3 * step
    rects = []
    for t in range(m):
        side = base + t
        cx = t * step
        cy = ((t * 7919) % max(m, 1)) * step
        rects.append([4 * cx + 1, 4 * cy + 1, 4 * (cx + side) + 3, 4 * (cy + side) + 3])
    r_arr = np.array(rects, dtype=np.int64).reshape(-1, 4)
    # y sides must be distinct too: cy repeats only if 7919 shares a factor with m
    _, bad_r = _tied_owners(np.empty((0, 2), dtype=np.int64), r_arr)
    r_arr = r_arr[~bad_r]
    return _finish(pts, r_arr, f"grid-n{n}-m{len(r_arr)}")


def generate(kind: str, n: int, m: int, seed: int = 0) -> Instance:
    if n < 0 or m < 0:
        raise ValueError("n and m must be non-negative")
    if kind == "squares":
        return squares(n, m, seed)
    if kind == "filtered":
        return filtered(n, m, seed)
    if kind == "piercing-chain":
        return piercing_chain(m, n, seed)
    if kind == "grid":
        return grid(n, m, seed)
    if kind == "random":
        return random_rects(n, m, seed)
    raise ValueError(f"unknown generator kind {kind!r}; expected one of {', '.join(KINDS)}")


# Small hand-built regression instances. Coordinates are pairwise distinct
# by construction, so no perturbation is applied.

_SLAB_BARRIERS = {
    # rect 0 holds p = point 0; rect 1 bounds p from above (upper barrier),
    # rect 2 crosses rect 0's left side above p (upper piercing barrier),
    # rects 3 and 4 mirror them below
    "points": [
        [60, 50],
        [55, 65], [66, 67],
        [-10, 80], [73, 82],
        [48, 35], [72, 36],
        [-25, 15], [86, 16],
        [20, 52], [30, 90], [10, 5], [40, 58], [95, 45],
    ],
    "rects": [
        [0, 0, 100, 100],
        [51, 61, 71, 69],
        [-21, 75, 81, 85],
        [46, 31, 76, 39],
        [-31, 11, 91, 19],
    ],
}

_STRIP_NESTING = {
    # p = point 0 near the bottom right of rect 0; rects 1..3 stack above p
    # and overlap in y, giving three strips
    "points": [
        [90, 10],
        [83, 25], [93, 26],
        [73, 40], [96, 44],
        [63, 60], [92, 65],
        [10, 80], [30, 35], [50, 90], [40, 5],
    ],
    "rects": [
        [0, 0, 100, 100],
        [81, 20, 95, 30],
        [71, 15, 97, 50],
        [61, 45, 94, 70],
    ],
}

HANDCRAFTED = {"slab-barriers": _SLAB_BARRIERS, "strip-nesting": _STRIP_NESTING}


def handcrafted(name: str) -> Instance:
    data = HANDCRAFTED[name]
    inst = Instance.from_coords(data["points"], data["rects"], name)
    assert not validate_general_position(inst), name
    assert is_nonpiercing_family(inst.rects) is None, name
    return inst
