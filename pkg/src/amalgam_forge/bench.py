"""Timing of the compiled kernels against the Python fallback."""
from __future__ import annotations

import time
from itertools import combinations

from . import corpus, kernels


def _instance(seed: int, n: int):
    g = corpus.rng(seed, f"bench-{n}")
    pts = [f"v{i}" for i in range(n)]
    slots = list(combinations(range(n), 3))
    # about one relation per point keeps the branch and bound honest
    picked = g.choice(len(slots), size=min(n, len(slots)), replace=False)
    masks = sorted({(1 << slots[i][0]) | (1 << slots[i][1]) | (1 << slots[i][2]) for i in picked})
    return pts, masks, [1] * len(masks)


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def run_benchmark(points=(10, 14, 18), repeat: int = 3, seed: int = 0) -> list[dict]:
    rows = []
    impls = kernels.backends()
    for n in points:
        pts, masks, weights = _instance(seed, n)
        full = (1 << n) - 1
        jobs = {
            "dim_table": lambda k: k.dim_table(n, masks, weights),
            "min_value": lambda k: k.min_value(masks, weights, 0, full),
            "argmin": lambda k: k.argmin(masks, weights, 1, full ^ 1, True),
        }
        for kernel, job in jobs.items():
            row = {"points": n, "kernel": kernel}
            for name, impl in impls.items():
                row[name] = _time(lambda: job(impl), repeat)
            rows.append(row)
    return rows


def format_results(rows: list[dict]) -> str:
    lines = ["points\tkernel\tpython_s\tcompiled_s\tspeedup"]
    for r in rows:
        py, c = r["python"], r.get("compiled")
        if c is None:
            lines.append(f"{r['points']}\t{r['kernel']}\t{py:.5f}\t-\t-")
        else:
            lines.append(f"{r['points']}\t{r['kernel']}\t{py:.5f}\t{c:.5f}\t{py / max(c, 1e-9):.1f}x")
    return "\n".join(lines) + "\n"
