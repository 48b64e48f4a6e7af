"""Compare the compiled and pure-Python Gaussian-integer kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the raw kernels on random integer matrices and two end-to-end
workloads, once per available backend, and prints the best of N runs.
"""

import argparse
import random
import timeit

from magiclim import kernels
from magiclim.hopf import classical_tower, limit_hopf
from magiclim.linalg import Mat
from magiclim.projective_limit import build_truncated_limit
from magiclim.star_algebra import generated_algebra


def _ints(rng, n):
    return [rng.randint(-9, 9) for _ in range(n)]


def workloads(seed=0):
    rng = random.Random(seed)
    n = 40
    are, aim, bre, bim = (_ints(rng, n * n) for _ in range(4))
    # sparse +-1 systems like commutant equations stay in 64 bits; dense ones overflow and fall back
    sre = [rng.choice((0, 0, 0, 1, -1)) for _ in range(30 * 30)]
    dre = _ints(rng, 30 * 30)
    zero = [0] * (30 * 30)
    gens = [Mat.from_rows([[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]) for _ in range(2)]

    def hopf_limit():
        s, hopfs = classical_tower(4)
        limit_hopf(build_truncated_limit(s), hopfs)

    return {
        f"matmul {n}x{n}": lambda: kernels.matmul(are, aim, bre, bim, n, n, n),
        "rref 30x30 sparse": lambda: kernels.rref(sre, zero, 30, 30),
        "rref 30x30 dense (fallback)": lambda: kernels.rref(dre, zero, 30, 30),
        "generated algebra M_4": lambda: generated_algebra(gens, 4),
        "limit Hopf structure S_4": hopf_limit,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    results = {}
    for name, fn in workloads().items():
        for b in backends:
            with kernels.use_backend(b):
                fn()  # warm caches
                results[name, b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    width = max(len(name) for name, _ in results)
    print(f"{'workload'.ljust(width)}  " + "  ".join(f"{b:>10}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name in dict.fromkeys(n for n, _ in results):
        times = [results[name, b] for b in backends]
        line = f"{name.ljust(width)}  " + "  ".join(f"{t * 1e3:8.2f}ms" for t in times)
        if len(backends) > 1:
            line += f"  {times[0] / times[1]:9.1f}x"
        print(line)
    if len(backends) == 1:
        print("compiled kernels not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
