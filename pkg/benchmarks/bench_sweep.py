"""Benchmark the compiled sweep kernels against the pure-Python fallback.

Runs Metropolis sweeps on a periodic square lattice with both backends and
reports sweeps per second plus the speedup ratio.  The two backends share
one RNG stream definition, so the benchmark also cross-checks that their
trajectories stay bitwise identical.

Usage: python benchmarks/bench_sweep.py [--side 32] [--sweeps 200]
"""

import argparse
import math
import time

import numpy as np

from exchange_competition.lattice import LatticeSpec, build
from exchange_competition.mc import KERNEL_BACKEND
from exchange_competition.mc import _kernels_py
from exchange_competition.mc.core import DEFAULT_CONE_HALF_ANGLE, adjacency_csr, random_config


def run_backend(kern, graph, model, n_sweeps, seed):
    neighbors, offsets = adjacency_csr(graph)
    state = np.array([kern.seed_state(seed)], dtype=np.uint64)
    config = random_config(graph, model, state)
    j = 2.0 * 1.0  # couplings (1, 0)
    cone_cos = math.cos(DEFAULT_CONE_HALF_ANGLE)
    start = time.perf_counter()
    for _ in range(n_sweeps):
        if model == "ising":
            kern.ising_sweep(config.values, neighbors, offsets, j, 2.0, state)
        else:
            kern.vector_sweep(config.values, neighbors, offsets, j, 2.0, cone_cos, state)
    elapsed = time.perf_counter() - start
    return n_sweeps / elapsed, config.values.copy()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--side", type=int, default=32, help="square lattice side")
    parser.add_argument("--sweeps", type=int, default=200, help="sweeps per backend")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    if KERNEL_BACKEND != "cython":
        parser.exit(1, "compiled kernel not available; nothing to compare\n")
    from exchange_competition.mc import _kernels_c

    graph = build(LatticeSpec("square", (args.side, args.side)))
    print(f"square {args.side}x{args.side} ({graph.n_sites} sites), "
          f"{args.sweeps} sweeps per backend")
    for model in ("ising", "vector3"):
        rate_c, values_c = run_backend(_kernels_c, graph, model, args.sweeps, args.seed)
        rate_py, values_py = run_backend(_kernels_py, graph, model, args.sweeps, args.seed)
        identical = np.array_equal(values_c, values_py)
        print(f"  {model:8s} compiled {rate_c:10.1f} sweeps/s   "
              f"python {rate_py:8.1f} sweeps/s   "
              f"speedup {rate_c / rate_py:6.1f}x   "
              f"trajectories {'identical' if identical else 'DIVERGED'}")
        if not identical:
            raise SystemExit("backend trajectories diverged")


if __name__ == "__main__":
    main()
