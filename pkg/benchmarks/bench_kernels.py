"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import importlib
import timeit

import numpy as np

from qrec import _fallback
from qrec.quiver import Quiver, Rep, flat_layout
from qrec.homology import _hom_flat
from qrec.backend import INJ


def workloads(rng):
    mats = [rng.integers(0, 2, size=(40, 60)) for _ in range(20)]
    q = Quiver(["x", "y"], [("a", "x", "y")])
    # Hom(S_x^5, S_x^3) has 15 dimensions and no injective element: a full scan of 2^15
    m, n = Rep(q, 2, {"x": 5, "y": 0}), Rep(q, 2, {"x": 3, "y": 0})
    basis, layout = _hom_flat(m, n), flat_layout(m, n)
    return mats, basis, layout


def run(kern, mats, basis, layout):
    def rref():
        for a in mats:
            kern.rref_inplace(a.copy(), 2)

    def span():
        assert kern.span_search(basis, layout, 2, INJ) is None

    return rref, span


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    mats, basis, layout = workloads(np.random.default_rng(0))
    backends = {"python": _fallback}
    try:
        backends["cython"] = importlib.import_module("qrec._kernels")
    except ImportError:
        print("compiled kernels not built; timing the fallback only")
    results = {}
    for name, kern in backends.items():
        rref, span = run(kern, mats, basis, layout)
        results[name] = (min(timeit.repeat(rref, number=1, repeat=args.repeat)),
                         min(timeit.repeat(span, number=1, repeat=args.repeat)))
    print(f"{'backend':<8} {'rref 20x(40x60)':>16} {'span scan 2^15':>16}")
    for name, (a, b) in results.items():
        print(f"{name:<8} {a * 1e3:>14.1f}ms {b * 1e3:>14.1f}ms")
    if len(results) == 2:
        (pa, pb), (ca, cb) = results["python"], results["cython"]
        print(f"speedup  {pa / ca:>15.1f}x {pb / cb:>15.1f}x")


if __name__ == "__main__":
    main()
