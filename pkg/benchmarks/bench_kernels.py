"""Compare the numba and numpy kernel backends.

Times every kernel on inputs drawn from a generated graph, then a full
mining run under each backend, and prints one row per measurement::

    python benchmarks/bench_kernels.py --vertices 20000 --repeat 5
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from parm import GenSpec, MiningConfig, generate, mine_pioneer
from parm import kernels


def best_of(fn, repeat: int) -> float:
    fn()  # warm-up, includes numba compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(g, rng: np.random.Generator) -> dict:
    n = g.n_vertices
    src, dst = g.label_edges(0)
    target_mask = rng.random(n) < 0.3
    keep = rng.random(n) < 0.5
    # pair list: every label-0 edge as (source, target), already sorted by source
    psrc, ptgt = src.astype(np.int64), dst.astype(np.int64)
    sources = rng.choice(n, size=min(n, 2000), replace=False).astype(np.int64)
    bits = rng.integers(0, 2**63, size=(512, max(1, n // 64)), dtype=np.int64).view(np.uint64)
    left = rng.integers(0, bits.shape[0], size=20_000).astype(np.int64)
    right = rng.integers(0, bits.shape[0], size=20_000).astype(np.int64)
    return {
        "backprop": lambda k: k.backprop(src, dst, target_mask, n),
        "extend_pairs": lambda k: k.extend_pairs(psrc, ptgt, src, dst, keep, n),
        "reach_pairs(2 hops)": lambda k: k.reach_pairs(sources, src, dst, 2, n),
        "select_pairs": lambda k: k.select_pairs(psrc, ptgt, keep, target_mask),
        "and_popcount": lambda k: k.and_popcount(bits, left, right),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vertices", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-mining", action="store_true", help="only time the kernels")
    args = ap.parse_args(argv)

    spec = GenSpec(args.vertices, 5 * args.vertices, "uniform", n_labels=4, n_attrs=10,
                   avg_attrs=2.0, seed=args.seed)
    g = generate(spec)
    names = kernels.available()
    print(f"graph: {g.n_vertices} vertices, {g.n_edges} edges; backends: {', '.join(names)}")
    print(f"{'kernel':<22}" + "".join(f"{name + ' (ms)':>14}" for name in names))

    cases = kernel_cases(g, np.random.default_rng(args.seed))
    for label, call in cases.items():
        row = [best_of(lambda: call(kernels.get(name)), args.repeat) * 1e3 for name in names]
        print(f"{label:<22}" + "".join(f"{t:>14.2f}" for t in row), flush=True)

    if not args.skip_mining:
        cfg = MiningConfig(theta=0.01, relative=True, k=2)
        row = []
        for name in names:
            # the kernel timings above already compiled every numba kernel
            with kernels.using(name):
                t0 = time.perf_counter()
                mine_pioneer(g, cfg)
                row.append((time.perf_counter() - t0) * 1e3)
        print(f"{'mine_pioneer (k=2)':<22}" + "".join(f"{t:>14.1f}" for t in row), flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
