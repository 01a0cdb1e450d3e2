"""Benchmark the Jacobi triple scan: compiled kernel versus pure Python.

The scan walks all n**3 ordered basis triples over an integer-packed
structure table.  Both backends run on identical arrays, so the timing
difference is purely the kernel implementation.

Usage:
    python3 benchmarks/bench_jacobi.py [--basis extended] [--repeats 3]
"""

import argparse
import time

from quaplectic import _scan_py, kernels
from quaplectic.algebra import (
    StructureTable,
    commutator,
    element,
    extended_basis,
    quaplectic_basis,
    sp8_basis,
)

BASES = {
    "quaplectic": quaplectic_basis,
    "extended": extended_basis,
    "sp8": sp8_basis,
}


def best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        checked, bad = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, checked, len(bad)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--basis", choices=sorted(BASES), default="extended")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    basis = BASES[args.basis]()
    table = StructureTable(basis, lambda a, b: commutator(element(a), element(b)))
    packed = (table.indptr, table.gen_idx, table.num_re, table.num_im, table.n)

    print(f"basis: {args.basis} ({table.n} generators, {table.n ** 3} triples)")
    print(f"selected backend: {kernels.BACKEND}")

    t_sel, checked, bad = best_of(kernels.scan_jacobi, packed, args.repeats)
    print(f"selected  : {t_sel * 1e3:9.2f} ms  ({checked} triples, {bad} violations)")

    t_py, checked, bad = best_of(_scan_py.scan_jacobi, packed, args.repeats)
    print(f"pure python: {t_py * 1e3:9.2f} ms  ({checked} triples, {bad} violations)")

    if kernels.BACKEND == "compiled":
        print(f"speedup: {t_py / t_sel:.1f}x")
    else:
        print("speedup: n/a (compiled kernel not available, both runs are pure)")


if __name__ == "__main__":
    main()
