"""Compare the compiled and pure kernel backends on the three hot loops.

Usage: python benchmarks/bench_kernels.py [--nodes N] [--repeats R]

Both backends consume the same uniform stream, so their outputs are
byte-identical; this script reports wall time and the speedup ratio.
"""

import argparse
import time

import numpy as np

from biaswalk import _kernels
from biaswalk.graph import build_graph, largest_component
from biaswalk.netgen import degree_sequence
from biaswalk.transport import build_plan


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=100_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    names = _kernels.available()
    if "compiled" not in names:
        print("compiled backend not built; timing the pure backend only")

    deg = degree_sequence(args.nodes, 1.3)
    ref = _kernels.get("pure")
    edges, _ = ref.generate_edges(deg.copy(), -0.75, seed=0)
    g, _ = largest_component(build_graph(edges, node_count=args.nodes))
    plan = build_plan(g, "weighted")
    x = np.full(g.node_count, 1.0 / g.node_count)
    out = np.empty_like(x)
    attempts = 10 * len(edges)

    cases = {
        "generate_edges": lambda k: k.generate_edges(deg.copy(), -0.75,
                                                     seed=0),
        "shuffle_edges": lambda k: k.shuffle_edges(edges.copy(),
                                                   args.nodes, attempts,
                                                   seed=1),
        "transport_step x100": lambda k: [
            k.transport_step(plan.in_ptr, plan.in_src, plan.in_dst,
                             plan.gval, plan.wsum, x, 0.0, out)
            for _ in range(100)],
    }

    print(f"nodes={args.nodes} edges={len(edges)} "
          f"component={g.node_count} repeats={args.repeats}")
    header = f"{'kernel':22s}" + "".join(f"{n:>12s}" for n in names)
    print(header + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases.items():
        row = f"{label:22s}"
        secs = []
        for name in names:
            kern = _kernels.get(name)
            secs.append(best_of(args.repeats, lambda: fn(kern)))
            row += f"{secs[-1] * 1e3:10.1f}ms"
        if len(secs) == 2:
            row += f"{secs[1] / secs[0]:11.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
