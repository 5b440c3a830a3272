"""Command-line interface: gen, build, check, partition, render, bench.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 property check
failed, 5 fast/naive divergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bench import run_bench, summarize, write_csv
from .geometry import InstanceError, dumps_instance, loads_instance, perturb_to_general_position
from .generators import KINDS, generate
from .oracle import ValidationError, naive_build_support, require_valid, verify_graph
from .partition import layered_support, min_color
from .render import parse_slab_spec, render_svg
from .support import EdgeFileError, dumps_edges, loads_edges
from .sweep import BACKENDS, DivergenceError, fast_build_support

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_PROPERTY = 4
EXIT_DIVERGENCE = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _default_seed() -> int:
    raw = os.environ.get("RECTSUPPORT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(EXIT_PARSE, f"RECTSUPPORT_SEED must be an integer, got {raw!r}") from None


def _read_bytes(path: str) -> bytes:
    try:
        return sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc.strerror}") from None


def load_instance(path: str, *, perturb: bool = False, seed: int = 0):
    data = _read_bytes(path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: invalid UTF-8 at byte offset {exc.start}") from None
    try:
        inst = loads_instance(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise CliError(EXIT_PARSE, f"{path}: malformed JSON at byte offset {offset}: {exc.msg}") from None
    except InstanceError as exc:
        raise CliError(EXIT_VALIDATION, f"{path}: {exc}") from None
    return perturb_to_general_position(inst, seed) if perturb else inst


def load_edges(path: str, inst):
    try:
        return loads_edges(_read_bytes(path).decode("utf-8", errors="strict"), inst)
    except (EdgeFileError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _validate(inst, nonpiercing: bool = True) -> None:
    try:
        require_valid(inst, nonpiercing=nonpiercing)
    except ValidationError as exc:
        raise CliError(EXIT_VALIDATION, str(exc)) from None


def cmd_gen(args) -> int:
    if args.n < 0 or args.m < 0:
        raise CliError(EXIT_VALIDATION, "n and m must be non-negative")
    _write(args.out, dumps_instance(generate(args.kind, args.n, args.m, args.seed)))
    return EXIT_OK


def cmd_build(args) -> int:
    inst = load_instance(args.input, perturb=args.perturb, seed=args.seed)
    _validate(inst)
    if args.engine == "naive":
        g = naive_build_support(inst, validate=False)
    else:
        try:
            g = fast_build_support(inst, validate=False, backend=args.backend, diagnostic=args.diagnostic)
        except DivergenceError as exc:
            print(json.dumps(exc.report), file=sys.stderr)
            raise CliError(EXIT_DIVERGENCE, str(exc)) from None
    _write(args.out, dumps_edges(g))
    return EXIT_OK


def _describe(name: str, witness) -> str:
    if name == "support":
        return f"rect {witness} is not connected"
    if name in ("planarity", "noncrossing"):
        return f"edges {witness[0]} and {witness[1]} cross"
    if name == "delaunay":
        return f"edge {witness} spans a non-empty rectangle"
    if name == "nonpiercing":
        return f"edge {witness[0]} discretely pierces rect {witness[1]}"
    return f"{witness} edges exceed 3n - 6"


def cmd_check(args) -> int:
    inst = load_instance(args.instance, perturb=args.perturb, seed=args.seed)
    _validate(inst, nonpiercing=False)
    g = load_edges(args.edges, inst)
    failed = False
    lines = []
    for name, witness in verify_graph(g).items():
        if witness is None:
            lines.append(f"{name}: pass")
        else:
            failed = True
            lines.append(f"{name}: FAIL ({_describe(name, witness)})")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_partition(args) -> int:
    inst = load_instance(args.instance, perturb=args.perturb, seed=args.seed)
    _validate(inst, nonpiercing=False)
    part = min_color(inst.rects)
    _write(args.out, part.to_json())
    if args.layers:
        for color, g in enumerate(layered_support(inst, backend=args.backend), 1):
            Path(f"{args.layers}.{color}.edges").write_text(dumps_edges(g))
    return EXIT_OK


def cmd_render(args) -> int:
    inst = load_instance(args.instance, perturb=args.perturb, seed=args.seed)
    g = load_edges(args.edges, inst) if args.edges else None
    slabs = []
    for spec in args.slabs or ():
        try:
            slabs.append(parse_slab_spec(spec, inst))
        except ValueError as exc:
            raise CliError(EXIT_VALIDATION, str(exc)) from None
    svg = render_svg(inst, g, edges="diagonals" if args.diagonals else "lshapes", slabs=slabs)
    _write(args.out, svg)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(v, 0) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_bench(args) -> int:
    kinds = [k for k in args.kinds.split(",") if k]
    for k in kinds:
        if k not in KINDS:
            raise CliError(EXIT_PARSE, f"unknown kind {k!r}")
    records = run_bench(
        args.sizes,
        kinds,
        m=args.m,
        seed=args.seed,
        naive_max_n=args.naive_max_n,
        repeat=args.repeat,
        backend=args.backend,
    )
    _write(args.out, write_csv(records))
    for kind in kinds:
        own = [r for r in records if r.label.startswith(kind + "-")]
        for engine in ("fast", "naive"):
            s = summarize(own, engine)
            print(
                f"{kind} {engine}: wall doubling ratio {s['wall_ratio_mean']:.3f}, "
                f"op doubling ratio {s['ops_ratio_mean']:.3f}",
                file=sys.stderr,
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rectsupport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, *, out=True, perturb=True):
        p.add_argument("--seed", type=int, default=None, help="default: $RECTSUPPORT_SEED or 0")
        if out:
            p.add_argument("--out", "-o", default=None, help="output path (default stdout)")
        if perturb:
            p.add_argument("--perturb", action="store_true", help="rank-remap the instance on load")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=50, help="rect count (k for piercing-chain)")
    common(p, perturb=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build a support and write its edge file")
    p.add_argument("input")
    p.add_argument("--engine", choices=("naive", "fast"), default="fast")
    p.add_argument("--backend", choices=BACKENDS, default=None)
    p.add_argument("--diagnostic", action="store_true", help="compare with the naive build")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="verify an edge file against an instance")
    p.add_argument("instance")
    p.add_argument("edges")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("partition", help="colour rects into non-piercing classes")
    p.add_argument("instance")
    p.add_argument("--layers", metavar="PREFIX", help="also write PREFIX.<color>.edges per class")
    p.add_argument("--backend", choices=BACKENDS, default=None)
    common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("render", help="draw an instance and its support as SVG")
    p.add_argument("instance")
    p.add_argument("edges", nargs="?")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--diagonals", action="store_true")
    mode.add_argument("--lshapes", action="store_true")
    p.add_argument("--slabs", action="append", metavar="RECT:POINT")
    common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="time naive and fast builders over a size grid")
    p.add_argument("--sizes", type=_int_list, default=[1 << k for k in range(12, 18)])
    p.add_argument("--kinds", default="squares")
    p.add_argument("--m", type=int, default=256)
    p.add_argument("--naive-max-n", type=int, default=1 << 13)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--backend", choices=BACKENDS, default=None)
    common(p, perturb=False)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except CliError as exc:
        print(f"rectsupport {args.verb}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
