"""Compare the compiled and pure-numpy symbol kernels.

Run: python3 benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from sdwave import _backend


def _cases(size: int):
    rng = np.random.default_rng(0)
    r = np.sort(rng.uniform(0.0, 4.0, size))
    return [
        ("symbols", lambda k: k.symbols(50.0, r)),
        ("expansion_terms K=0", lambda k: k.expansion_terms(1, 0, 1e3, r)),
        ("expansion_terms K=3", lambda k: k.expansion_terms(1, 3, 1e3, r)),
        ("expansion_terms K=8", lambda k: k.expansion_terms(0, 8, 1e3, r)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    compiled = _backend.get("cython") if "cython" in _backend.available() else None
    python = _backend.get("python")
    if compiled is None:
        print("compiled kernels unavailable; timing the numpy fallback only")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}{'max |diff|':>12}")
    for name, fn in _cases(args.size):
        tp = min(timeit.repeat(lambda: fn(python), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<22}{tp:>12.2f}")
            continue
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        a, b = np.asarray(fn(python)), np.asarray(fn(compiled))
        print(f"{name:<22}{tp:>12.2f}{tc:>13.2f}{tp / tc:>8.1f}x{np.max(np.abs(a - b)):>12.1e}")


if __name__ == "__main__":
    main()
