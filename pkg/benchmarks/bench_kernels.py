"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from dynpgg.kernels import BACKENDS

GAME = (4, 10, 10.0, 0.3, 0.01)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    xs = np.linspace(0, 10, 200_001)
    plans = np.random.default_rng(0).uniform(0, 1, (100_000, 10))
    return {
        "switch_payoffs 200k stages": lambda k: k.switch_payoffs(xs, *GAME),
        "plan_payoffs 100k plans": lambda k: k.plan_payoffs(plans, 4, 10.0, 0.3, 0.01),
        "exhaustive 11^4 plans": lambda k: k.exhaustive_best(11, 4, 4, 10.0, 0.3, 0.01, 1e-9),
        "exhaustive 11^6 plans": lambda k: k.exhaustive_best(11, 6, 4, 10.0, 0.3, 0.01, 1e-9),
        "exhaustive 4^10 plans": lambda k: k.exhaustive_best(4, 10, 4, 10.0, 0.3, 0.01, 1e-9),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = sorted(BACKENDS)
    print(f"{'case':<30}" + "".join(f"{n:>12}" for n in names) + "     speedup")
    for label, fn in cases().items():
        t = {n: best_of(lambda: fn(BACKENDS[n]), args.repeat) for n in names}
        speed = f"{t['python'] / t['cython']:>10.1f}x" if "cython" in t else ""
        print(f"{label:<30}" + "".join(f"{t[n] * 1e3:>10.2f}ms" for n in names) + speed)


if __name__ == "__main__":
    main()
