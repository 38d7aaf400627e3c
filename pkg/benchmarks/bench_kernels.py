"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--points 10 14 18] [--repeat 3]
"""
import argparse

from amalgam_forge import kernels
from amalgam_forge.bench import format_results, run_benchmark


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--points", type=int, nargs="+", default=[10, 14, 18])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    print(f"backends: {', '.join(sorted(kernels.backends()))}")
    print(format_results(run_benchmark(args.points, args.repeat, args.seed)), end="")


if __name__ == "__main__":
    main()
