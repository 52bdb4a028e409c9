"""Time the Sturm-bisection oracle under both kernel backends.

The backend is fixed at import, so each one runs in its own subprocess:

    python3 benchmarks/bench_sturm.py [--sizes 10000 100000] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from kgdecomp.grid import RadialGrid
from kgdecomp.oracle import BACKEND, count_below, eigen_smallest, schrodinger_fd
from kgdecomp.oracle.solvers import fd_system

sizes, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
out = {"backend": BACKEND, "rows": []}
# warm-up keeps numba compilation out of the timings
schrodinger_fd(lambda r: r * r, RadialGrid.origin_anchored(1.0, 0.1))
for n in sizes:
    h = 14.0 / n
    grid = RadialGrid.origin_anchored(14.0, h)
    sys_ = fd_system(grid.nodes**2, h)
    best = {}
    for name, fn in (("count", lambda: count_below(sys_, 3.0)),
                     ("lowest", lambda: eigen_smallest(sys_, 1)),
                     ("lowest3", lambda: eigen_smallest(sys_, 3))):
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            val = fn()
            times.append(time.perf_counter() - t0)
        best[name] = min(times)
    out["rows"].append({"n": grid.n_nodes, **best, "e0": float(eigen_smallest(sys_, 1)[0])})
print(json.dumps(out))
"""


def run_backend(backend, sizes, repeat):
    env = dict(os.environ, KGDECOMP_BACKEND=backend)
    proc = subprocess.run([sys.executable, "-c", WORKER, json.dumps(sizes), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    results = {b: run_backend(b, args.sizes, args.repeat) for b in ("numba", "numpy")}
    if results["numba"]["backend"] != "numba":
        print("numba unavailable; both runs used the numpy kernels")
    print(f"{'n':>8} {'op':>8} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for fast, slow in zip(results["numba"]["rows"], results["numpy"]["rows"]):
        for op in ("count", "lowest", "lowest3"):
            print(f"{fast['n']:>8} {op:>8} {fast[op]:>10.4f} {slow[op]:>10.4f} "
                  f"{slow[op] / fast[op]:>8.1f}")
        # both backends bisect to the same tolerance, so they must agree
        diff = abs(fast["e0"] - slow["e0"])
        print(f"{'':>8} {'|dE0|':>8} {diff:>10.2e}")


if __name__ == "__main__":
    main()
