"""Compare the pure-Python and compiled enumeration kernels.

Usage: python benchmarks/bench_engine.py [repeats]
"""

import sys
import time

from welwitt.floor import _engine as pure

try:
    from welwitt.floor import _engine_cy as compiled
except ImportError:
    compiled = None

CASES = [
    ((4, 0, 0, 0), 5),
    ((4, 0, 0, 0), 0),
    ((7, 4, 3, 0), 0),
    ((7, 5, 2, 0), 6),
]


def timed(module, klass, s, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = module.enumerate_marked_raw(klass, s)
        best = min(best, time.perf_counter() - t0)
    return best, len(result)


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    print(f"{'class':>14} {'s':>2} {'classes':>8} {'pure':>9} {'compiled':>9} {'speedup':>8}")
    for klass, s in CASES:
        t_pure, n = timed(pure, klass, s, repeats)
        if compiled is not None:
            t_comp, n2 = timed(compiled, klass, s, repeats)
            assert n == n2, "kernels disagree"
            print(
                f"{str(klass):>14} {s:>2} {n:>8} {t_pure:>8.3f}s {t_comp:>8.3f}s "
                f"{t_pure / t_comp:>7.2f}x"
            )
        else:
            print(f"{str(klass):>14} {s:>2} {n:>8} {t_pure:>8.3f}s {'-':>9} {'-':>8}")
    if compiled is None:
        print("compiled kernel not built; install with `pip install -e .` to compare")


if __name__ == "__main__":
    main()
