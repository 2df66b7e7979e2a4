"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from wreathkit import _kernels_py

try:
    from wreathkit import _ckernels
except ImportError:
    _ckernels = None


def residue_case(rng):
    k, r = 5, 2
    periods = [rng.randint(2, 7) for _ in range(k)]
    starts = [rng.randrange(p) for p in periods]
    values = [rng.randint(-3, 3) for _ in range(k * r)]
    # cancelling pairs keep the scan running over the whole window
    values[r:2 * r] = [-v for v in values[:r]]
    periods[1], starts[1] = periods[0], starts[0]
    return (starts, periods, values, r, 20000, 0, 10**9)


def table_case(rng):
    n = 12
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    seqs = [[rng.randrange(n) for _ in range(5)] for _ in range(3)]
    seqs.append([(-sum(s[t % len(s)] for s in seqs)) % n for t in range(60)])
    return table, seqs, 0, 60 * 2000


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    cases = {
        "residue_nonzero": residue_case(rng),
        "table_first_failure": table_case(rng),
    }
    print(f"{'kernel':<22}{'pure ms':>10}{'compiled ms':>14}{'speedup':>10}")
    for name, case in cases.items():
        pure = min(timeit.repeat(lambda: getattr(_kernels_py, name)(*case), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:<22}{pure * 1000:>10.2f}{'n/a':>14}{'':>10}")
            continue
        fast = min(timeit.repeat(lambda: getattr(_ckernels, name)(*case), number=1, repeat=args.repeat))
        print(f"{name:<22}{pure * 1000:>10.2f}{fast * 1000:>14.2f}{pure / fast:>9.1f}x")


if __name__ == "__main__":
    main()
