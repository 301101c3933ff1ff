"""Backend parity: the compiled kernels must match the pure ones bit for bit.

Every traversal decision is mirrored, so the comparison is on the full
result tuples -- values, witnesses, clique/closure counts and explored
counters -- not just on the maxima.
"""

import itertools
import random
from math import comb

import pytest

from shadelab._kernels import _pykern
from shadelab.setfam import k_subset_masks, mask_m_shade

try:
    from shadelab._kernels import _ckern
except ImportError:  # pragma: no cover - exercised only in pure-Python installs
    _ckern = None

needs_compiled = pytest.mark.skipif(_ckern is None, reason="compiled backend not built")


def random_graph(rng, V, p):
    adj = [0] * V
    for i, j in itertools.combinations(range(V), 2):
        if rng.random() < p:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def intersection_instance(n, k, t):
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


def cross_instance(n, k, l, t):
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


@needs_compiled
class TestMaxCliqueParity:
    def test_random_graphs(self):
        rng = random.Random(1)
        for _ in range(150):
            V = rng.randint(0, 18)
            adj = random_graph(rng, V, rng.choice([0.2, 0.5, 0.8]))
            assert _ckern.max_clique(adj) == _pykern.max_clique(adj)

    def test_intersection_graphs(self):
        for n in range(2, 8):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    _, adj = intersection_instance(n, k, t)
                    assert _ckern.max_clique(adj) == _pykern.max_clique(adj)

    def test_more_than_64_vertices(self):
        # crosses the one-word boundary in the compiled bitsets
        _, adj = intersection_instance(8, 4, 2)
        assert len(adj) == comb(8, 4) == 70
        assert _ckern.max_clique(adj) == _pykern.max_clique(adj)


@needs_compiled
class TestBKParity:
    def test_shade_objectives(self):
        for n in range(2, 7):
            for k in range(1, n):
                for m in range(k + 1, n + 1):
                    for t in range(1, k + 1):
                        verts, adj = intersection_instance(n, k, t)
                        masks = shade_masks(verts, n, m)
                        got_c = _ckern.max_union_weight_maximal_cliques(adj, masks, 10**7)
                        got_py = _pykern.max_union_weight_maximal_cliques(adj, masks, 10**7)
                        assert got_c == got_py

    def test_budget_verdicts_agree(self):
        verts, adj = intersection_instance(6, 3, 1)
        masks = shade_masks(verts, 6, 4)
        for budget in (1, 10, 100):
            outcomes = []
            for backend in (_ckern, _pykern):
                try:
                    backend.max_union_weight_maximal_cliques(adj, masks, budget)
                    outcomes.append("ok")
                except Exception as exc:
                    outcomes.append(type(exc).__name__)
            assert outcomes[0] == outcomes[1]

    def test_random_weights(self):
        rng = random.Random(5)
        for _ in range(80):
            V = rng.randint(0, 14)
            adj = random_graph(rng, V, 0.5)
            masks = [rng.getrandbits(100) for _ in range(V)]
            got_c = _ckern.max_union_weight_maximal_cliques(adj, masks, 10**6)
            got_py = _pykern.max_union_weight_maximal_cliques(adj, masks, 10**6)
            assert got_c == got_py


@needs_compiled
class TestClosureParity:
    def test_cross_instances(self):
        for n in range(2, 7):
            for k in range(1, n // 2 + 2):
                for l in range(1, n // 2 + 2):
                    if max(k, l) > n:
                        continue
                    for t in range(1, min(k, l) + 1):
                        attrs, objs, rows, cols = cross_instance(n, k, l, t)
                        sk = [1 << i for i in range(len(attrs))]
                        sl = [1 << j for j in range(len(objs))]
                        args = (len(attrs), rows, cols, len(objs), sk, sl, 10**7)
                        assert _ckern.next_closure_max_product(*args) == \
                            _pykern.next_closure_max_product(*args)

    def test_shade_objectives(self):
        for n, mk, ml, k, l, t in [(4, 2, 3, 2, 2, 1), (5, 3, 3, 2, 2, 2),
                                   (4, 3, 3, 2, 2, 2), (5, 4, 3, 3, 2, 1)]:
            attrs, objs, rows, cols = cross_instance(n, k, l, t)
            sk = shade_masks(attrs, n, mk)
            sl = shade_masks(objs, n, ml)
            args = (len(attrs), rows, cols, len(objs), sk, sl, 10**7)
            assert _ckern.next_closure_max_product(*args) == \
                _pykern.next_closure_max_product(*args)

    def test_random_contexts(self):
        rng = random.Random(9)
        for _ in range(60):
            nk, nl = rng.randint(0, 10), rng.randint(0, 10)
            rows = [rng.getrandbits(nl) for _ in range(nk)]
            cols = [0] * nl
            for j in range(nl):
                for i in range(nk):
                    if (rows[i] >> j) & 1:
                        cols[j] |= 1 << i
            sk = [1 << i for i in range(nk)]
            sl = [1 << j for j in range(nl)]
            args = (nk, rows, cols, nl, sk, sl, 10**6)
            assert _ckern.next_closure_max_product(*args) == \
                _pykern.next_closure_max_product(*args)


@needs_compiled
def test_selected_backend_is_compiled():
    from shadelab import _kernels

    assert _kernels.BACKEND == "cython"
