"""Compare the numba and pure-numpy kernel backends.

Each backend runs in a fresh interpreter (the flag is read at import), and
does one warm-up pass so numba compilation time is excluded.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from onereg import _accel
from onereg.families import c_pm1, theorem_family
from onereg.graphs import Graph, circulant
from onereg.symmetry import aut_group, brute, canonical_form
from onereg.symmetry.partition import OrderedPartition, refine

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)

def random_graph(n, p):
    A = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_edges(n, np.argwhere(A))

refine_inputs = [random_graph(400, 0.02) for _ in range(10)]
brute_input = random_graph(8, 0.4)
brute_perms = brute.all_permutations(8)
brute_adj = brute_input.adjacency_matrix()

def w_refine():
    for X in refine_inputs:
        base = OrderedPartition.unit(X.n)
        for v in range(0, X.n, 40):
            base.individualize(X, v)

def w_brute():
    brute.filter_kernel()(brute_adj, brute_perms)

def w_aut():
    aut_group(theorem_family(13, 1))
    aut_group(c_pm1(11))

def w_canon():
    canonical_form(circulant(245, [1, 244, 99, 146]))

out = {"backend": _accel.backend_name()}
for name, fn in [("refine", w_refine), ("brute_filter_n8", w_brute),
                 ("aut_group", w_aut), ("canonical_form", w_canon)]:
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable:
        env["ONEREG_DISABLE_NUMBA"] = "1"
    else:
        env.pop("ONEREG_DISABLE_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    print(f"{'workload':<18}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<18}{fast[key]:>11.4f}s{slow[key]:>11.4f}s{slow[key] / fast[key]:>9.1f}x")


if __name__ == "__main__":
    main()
