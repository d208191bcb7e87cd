"""Compare the compiled and pure-Python reflection-word ball enumeration.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ellwk import weyl
from ellwk._kernels import _fallback
from ellwk._linalg import to_complex
from ellwk.rootsys import build_system

try:
    from ellwk._kernels import _core
except ImportError:
    _core = None

CASES = [("A", 1, 6), ("A", 1, 8), ("A", 2, 5), ("A", 2, 6)]


def generators(sys) -> np.ndarray:
    return np.array([to_complex(weyl.reflect(sys, r).matrix).real.astype(np.int64)
                     for r in weyl.generating_roots(sys)])


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':<10}{'elements':>10}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for base, l, depth in CASES:
        gens = generators(build_system(base, l))
        count = len(_fallback.bfs_ball(gens, depth)[0])
        slow = best_of(lambda: _fallback.bfs_ball(gens, depth), args.repeat)
        if _core is None:
            print(f"{base}{l} L{depth:<5}{count:>10}{slow:>12.3f}{'n/a':>12}{'':>10}")
            continue
        fast = best_of(lambda: _core.bfs_ball(gens, depth), args.repeat)
        print(f"{base}{l} L{depth:<5}{count:>10}{slow:>12.3f}{fast:>12.3f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
