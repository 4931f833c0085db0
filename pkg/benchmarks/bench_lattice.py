"""Compare the compiled and numpy lattice kernels.

Usage: python3 benchmarks/bench_lattice.py [--max-k 5] [--repeat 3]

Times ``order_matrix`` and ``cover_pairs`` on the inputs the lattice
constructor feeds them, and checks both backends return identical output.
"""
import argparse
import time

import numpy as np

from pidlattice import _lattice_py
from pidlattice.lattice import _enumerate_masks, _node_bits, _popcount, _up_bits

try:
    from pidlattice import _lattice_core
except ImportError:
    _lattice_core = None


def kernel_inputs(k):
    raw = _enumerate_masks(k)
    nb = np.array([_node_bits(m) for m in raw], dtype=np.uint32)
    ub = np.array([_up_bits(m, k) for m in raw], dtype=np.uint32)
    lin = np.argsort(-np.array([_popcount(int(u)) for u in ub]), kind="stable")
    return nb[lin], ub[lin]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-k", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {"python": _lattice_py}
    if _lattice_core is not None:
        backends["compiled"] = _lattice_core
    else:
        print("compiled extension not built; timing the numpy kernels only")

    print(f"{'k':>2} {'nodes':>6} {'backend':>9} {'order_matrix':>13} {'cover_pairs':>12} {'edges':>7}")
    for k in range(2, args.max_k + 1):
        nb, ub = kernel_inputs(k)
        results = {}
        for name, mod in backends.items():
            t_le, le = best_of(lambda: mod.order_matrix(nb, ub), args.repeat)
            t_cv, cv = best_of(lambda: mod.cover_pairs(le), args.repeat)
            results[name] = (le, cv)
            print(f"{k:>2} {len(nb):>6} {name:>9} {t_le:>12.4f}s {t_cv:>11.4f}s {len(cv[0]):>7}")
        if len(results) == 2:
            (le_a, cv_a), (le_b, cv_b) = results.values()
            same = np.array_equal(le_a, le_b) and set(zip(*map(np.ndarray.tolist, cv_a))) == set(
                zip(*map(np.ndarray.tolist, cv_b))
            )
            print(f"   backends agree: {same}")


if __name__ == "__main__":
    main()
