"""Deterministic SVG rendering of an instance, a support and optional slab overlays.

Drawing uses the instance's own integer coordinates (y flipped by negation),
so equal inputs give byte-identical files.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .geometry import Instance
from .slabs import compute_slab, compute_strips
from .support import SupportGraph

EDGE_MODES = ("lshapes", "diagonals")


def parse_slab_spec(text: str, inst: Instance) -> tuple[int, int]:
    """'rect:point' -> (rect id, point id); the point must lie in the rect."""
    try:
        r_text, p_text = text.split(":")
        rid, pid = int(r_text), int(p_text)
    except ValueError:
        raise ValueError(f"slab spec must be 'rect:point', got {text!r}") from None
    if not (0 <= rid < inst.m and 0 <= pid < inst.n):
        raise ValueError(f"unknown rect:point {text!r}")
    p = inst.points[pid]
    if not inst.rects[rid].contains(p.x, p.y):
        raise ValueError(f"point {pid} is not inside rect {rid}")
    return rid, pid


def _bounds(inst: Instance) -> tuple[int, int, int, int]:
    xs = [p.x for p in inst.points] + [c for r in inst.rects for c in (r.x_lo, r.x_hi)]
    ys = [p.y for p in inst.points] + [c for r in inst.rects for c in (r.y_lo, r.y_hi)]
    if not xs:
        return 0, 0, 1, 1
    return min(xs), min(ys), max(xs), max(ys)


def _box(cls: str, x0, y0, x1, y1) -> str:
    return f'<rect class="{cls}" x="{x0}" y="{-y1}" width="{x1 - x0}" height="{y1 - y0}"/>'


def _line(cls: str, x0, y0, x1, y1) -> str:
    return f'<line class="{cls}" x1="{x0}" y1="{-y0}" x2="{x1}" y2="{-y1}"/>'


def render_svg(
    inst: Instance,
    graph: SupportGraph | None = None,
    *,
    edges: str = "lshapes",
    slabs: Iterable[tuple[int, int]] = (),
    width: int = 800,
) -> str:
    if edges not in EDGE_MODES:
        raise ValueError(f"edge mode must be one of {EDGE_MODES}")
    x0, y0, x1, y1 = _bounds(inst)
    span = max(x1 - x0, y1 - y0, 1)
    pad = max(1, span // 20)
    vx, vy = x0 - pad, -(y1 + pad)
    vw, vh = x1 - x0 + 2 * pad, y1 - y0 + 2 * pad
    height = max(1, round(width * vh / vw))
    radius = max(1, span // 150)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{vx} {vy} {vw} {vh}">',
        "<style>",
        "line, rect { vector-effect: non-scaling-stroke; }",
        ".rect { fill: none; stroke: #1f77b4; stroke-width: 1; }",
        ".slab { fill: #999999; fill-opacity: 0.35; stroke: none; }",
        ".strip { fill: none; stroke: #d62728; stroke-width: 1; stroke-dasharray: 4 2; }",
        ".edge, .edge-h, .edge-v { stroke: #333333; stroke-width: 1; }",
        ".point { fill: #000000; }",
        "</style>",
    ]
    for rid, pid in slabs:
        slab = compute_slab(inst, rid, pid)
        out.append(f'<g class="overlay" data-rect="{rid}" data-point="{pid}">')
        out.append(_box("slab", slab.x_left, slab.y_bot, slab.x_right, slab.y_top))
        for s in compute_strips(inst, slab):
            out.append(_box("strip", slab.x_left, s.y_lo, slab.x_right, s.y_hi))
        out.append("</g>")
    out.append('<g class="rects">')
    for r in inst.rects:
        out.append(_box("rect", r.x_lo, r.y_lo, r.x_hi, r.y_hi))
    out.append("</g>")
    if graph is not None:
        out.append('<g class="edges">')
        pts = inst.points
        for a, b in graph.pair_array.tolist():
            q, p = pts[a], pts[b]
            if edges == "diagonals":
                out.append(_line("edge", q.x, q.y, p.x, p.y))
            else:
                out.append(_line("edge-h", q.x, q.y, p.x, q.y))
                out.append(_line("edge-v", p.x, q.y, p.x, p.y))
        out.append("</g>")
    out.append('<g class="points">')
    for p in inst.points:
        out.append(f'<circle class="point" cx="{p.x}" cy="{-p.y}" r="{radius}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["EDGE_MODES", "parse_slab_spec", "render_svg"]
