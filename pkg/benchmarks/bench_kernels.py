"""Compare the compiled and pure-Python sweep kernels on the same instances.

    python3 benchmarks/bench_kernels.py --sizes 4096,16384,65536 --m 256

Prints one CSV row per (n, backend) and the compiled speedup per size. Both
kernels must return the same edge set and counters; a mismatch aborts.
"""
import argparse
import csv
import sys

from rectsupport.bench import time_build
from rectsupport.generators import generate
from rectsupport.support import dumps_edges
from rectsupport.sweep import HAVE_COMPILED, fast_build_support


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4096,16384,65536")
    parser.add_argument("--m", type=int, default=256)
    parser.add_argument("--kind", default="squares")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if not HAVE_COMPILED:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "m", "backend", "ms", "edges", "speedup"])
    for n in (int(v) for v in args.sizes.split(",")):
        inst = generate(args.kind, n, args.m, args.seed)
        if dumps_edges(fast_build_support(inst, backend="compiled")) != dumps_edges(
            fast_build_support(inst, backend="python")
        ):
            print(f"kernels disagree at n={n}", file=sys.stderr)
            return 2
        recs = {b: time_build(inst, "fast", backend=b, repeat=args.repeat) for b in ("python", "compiled")}
        counters = {b: (r.inserts, r.deletes, r.queries, r.occlusions, r.steps) for b, r in recs.items()}
        if counters["python"] != counters["compiled"]:
            print(f"counters disagree at n={n}: {counters}", file=sys.stderr)
            return 2
        speedup = recs["python"].ms / recs["compiled"].ms
        for b, r in recs.items():
            out.writerow([n, inst.m, b, f"{r.ms:.1f}", r.edges, f"{speedup:.2f}" if b == "compiled" else ""])
    return 0


if __name__ == "__main__":
    sys.exit(main())
