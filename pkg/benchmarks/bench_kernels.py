"""Time the hot kernels under numba and under the pure-Python fallback.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``SATPHASE_DISABLE_NUMBA``. Compile time is excluded: every
workload runs once before the timed repetitions.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from satphase import backend, build_graph, generate, solve
from satphase.generators import RichSpec, UniformSpec
from satphase.network import path_length_sums

repeat = int(sys.argv[1])
hard = generate(UniformSpec(50, 3, 4.3), 11)
big = UniformSpec(2000, 3, 4.3)
graph = build_graph(generate(UniformSpec(400, 3, 4.3), 3))
workloads = {
    "dpll v=50 g=4.3": lambda: solve(hard),
    "sample uniform v=2000": lambda: generate(big, 1),
    "sample rich v=2000": lambda: generate(RichSpec(2000, 3, 4.3), 1),
    "bfs all pairs n=400": lambda: path_length_sums(graph),
}
times = {}
for name, fn in workloads.items():
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    times[name] = best
print(json.dumps({"backend": backend(), "times": times}))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("SATPHASE_DISABLE_NUMBA", None)
    if disable:
        env["SATPHASE_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if fast["backend"] != "numba":
        print("numba is unavailable; both columns use the Python fallback")
    print(f"{'workload':<24}{'numba s':>12}{'python s':>12}{'speedup':>10}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:<24}{t_fast:>12.4f}{t_slow:>12.4f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
