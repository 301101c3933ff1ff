#!/usr/bin/env python3
"""Benchmark the compiled search kernels against the pure-Python fallback.

Runs the three hot loops (maximum clique, maximal-clique objective,
closure enumeration) on representative intersection instances, checks
that both backends return identical results, and prints the timings.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import itertools
import sys
import time

from shadelab._kernels import _pykern
from shadelab.setfam import k_subset_masks, mask_m_shade

try:
    from shadelab._kernels import _ckern
except ImportError:
    _ckern = None


def intersection_adjacency(n, k, t):
    verts = k_subset_masks(n, k)
    adj = [0] * len(verts)
    for i, j in itertools.combinations(range(len(verts)), 2):
        if (verts[i] & verts[j]).bit_count() >= t:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return verts, adj


def shade_masks(verts, n, m):
    index = {mask: i for i, mask in enumerate(k_subset_masks(n, m))}
    out = []
    for v in verts:
        acc = 0
        for sup in mask_m_shade(v, n, m):
            acc |= 1 << index[sup]
        out.append(acc)
    return out


def cross_context(n, k, l, t):
    attrs = k_subset_masks(n, k)
    objs = k_subset_masks(n, l)
    rows = [0] * len(attrs)
    cols = [0] * len(objs)
    for i, e in enumerate(attrs):
        for j, f in enumerate(objs):
            if (e & f).bit_count() >= t:
                rows[i] |= 1 << j
                cols[j] |= 1 << i
    return attrs, objs, rows, cols


def clique_case(n, k, t):
    _, adj = intersection_adjacency(n, k, t)
    return f"max_clique M({n},{k},{t})", "max_clique", (adj,)


def bk_case(n, m, k, t):
    verts, adj = intersection_adjacency(n, k, t)
    masks = shade_masks(verts, n, m)
    return (f"maximal cliques M0({n},{m},{k},{t})",
            "max_union_weight_maximal_cliques", (adj, masks, 10**9))


def closure_case(n, k, l, t):
    attrs, objs, rows, cols = cross_context(n, k, l, t)
    sk = [1 << i for i in range(len(attrs))]
    sl = [1 << j for j in range(len(objs))]
    return (f"closures N({n},{k},{l},{t})", "next_closure_max_product",
            (len(attrs), rows, cols, len(objs), sk, sl, 10**9))


CASES = [
    clique_case(8, 4, 1),
    clique_case(8, 4, 2),
    clique_case(8, 3, 1),
    bk_case(7, 5, 3, 1),
    bk_case(8, 4, 2, 1),
    closure_case(6, 3, 3, 1),
    closure_case(8, 2, 3, 1),
    closure_case(8, 2, 4, 1),
]


def run(backend, fn_name, args, repeat):
    fn = getattr(backend, fn_name)
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    opts = parser.parse_args(argv)
    if _ckern is None:
        print("compiled backend not built; run `python3 setup.py build_ext --inplace`",
              file=sys.stderr)
        return 1
    width = max(len(label) for label, _, _ in CASES)
    print(f"{'instance':<{width}}  {'python':>10}  {'cython':>10}  {'speedup':>8}")
    for label, fn_name, args in CASES:
        res_py, t_py = run(_pykern, fn_name, args, opts.repeat)
        res_c, t_c = run(_ckern, fn_name, args, opts.repeat)
        if res_py != res_c:
            print(f"{label:<{width}}  BACKEND MISMATCH: {res_py} vs {res_c}", file=sys.stderr)
            return 2
        print(f"{label:<{width}}  {t_py:>9.4f}s  {t_c:>9.4f}s  {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
