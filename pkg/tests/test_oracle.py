"""Brute-force oracles against independent enumeration, plus cache behaviour.

The independent checks deliberately avoid the package's search routes:
raw iteration over *all* subfamilies (so the maximal-clique and
closed-pair arguments are themselves under test), and networkx's exact
clique solver as a second opinion on the clique route.
"""

import itertools
import json
from math import comb

import networkx as nx
import pytest

from shadelab.extremal import FranklParams, ak_max, frankl_family, mt_cross_max
from shadelab.oracle import (
    ConjectureCell,
    InfeasibleSizeError,
    OracleCache,
    OracleLimits,
    WitnessValidationError,
    conjecture_check_m0,
    m0_grid,
    oracle_cross,
    oracle_m0,
    oracle_max_intersecting,
    oracle_n0,
    oracle_n1,
    revalidate,
)
from shadelab.setfam import (
    Family,
    is_cross_t_intersecting,
    is_t_intersecting,
    k_subset_masks,
    m_shade,
)


def brute_max_intersecting(n, k, t):
    """Max size of a t-intersecting family by scanning all subfamilies."""
    universe = k_subset_masks(n, k)
    best = 0
    for r in range(len(universe), 0, -1):
        if r <= best:
            break
        for members in itertools.combinations(universe, r):
            if is_t_intersecting(Family.from_masks(n, k, members), t):
                best = max(best, r)
                break
    return best


def brute_m0(n, m, k, t):
    universe = k_subset_masks(n, k)
    best = 0
    for r in range(len(universe) + 1):
        for members in itertools.combinations(universe, r):
            X = Family.from_masks(n, k, members)
            if is_t_intersecting(X, t):
                best = max(best, len(m_shade(X, m)))
    return best


def brute_n0(n, mk, ml, k, l, t):
    """Scan every subfamily A of the k-side; dual(A) is the best partner."""
    uk = k_subset_masks(n, k)
    ul = k_subset_masks(n, l)
    best = 0
    for r in range(len(uk) + 1):
        for members in itertools.combinations(uk, r):
            A = Family.from_masks(n, k, members)
            dual = Family.from_masks(
                n, l, (f for f in ul if all((f & e).bit_count() >= t for e in members))
            )
            best = max(best, len(m_shade(A, mk)) * len(m_shade(dual, ml)))
    return best


def check_witness(result, kind, params):
    revalidate(result.cache_key, result.value, result.witness)  # raises on failure
    if kind in ("m", "m0"):
        assert is_t_intersecting(result.witness, params["t"])
    else:
        a, b = result.witness
        assert is_cross_t_intersecting(a, b, params["t"])


class TestMaxIntersecting:
    @pytest.mark.parametrize(
        "n,k,t,expect",
        [(4, 2, 1, 3), (4, 2, 2, 1), (5, 3, 1, 10), (6, 3, 2, 4), (5, 2, 1, 4)],
    )
    def test_known_values(self, n, k, t, expect):
        res = oracle_max_intersecting(n, k, t)
        assert res.value == expect
        check_witness(res, "m", {"t": t})

    def test_witness_is_lex_least(self):
        # the triangle beats the star lexicographically among maximum families
        res = oracle_max_intersecting(4, 2, 1)
        assert res.witness.sets() == ((1, 2), (1, 3), (2, 3))

    def test_vs_raw_enumeration(self):
        for n in range(1, 6):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    assert oracle_max_intersecting(n, k, t).value == brute_max_intersecting(n, k, t)

    def test_vs_networkx(self):
        for n in range(2, 8):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    verts = k_subset_masks(n, k)
                    G = nx.Graph()
                    G.add_nodes_from(range(len(verts)))
                    for i, j in itertools.combinations(range(len(verts)), 2):
                        if (verts[i] & verts[j]).bit_count() >= t:
                            G.add_edge(i, j)
                    size = nx.max_weight_clique(G, weight=None)[1]
                    assert oracle_max_intersecting(n, k, t).value == size

    def test_agrees_with_closed_form_small(self):
        for n in range(1, 7):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    assert oracle_max_intersecting(n, k, t).value == ak_max(n, k, t)

    def test_cap_is_first_class_error(self):
        with pytest.raises(InfeasibleSizeError):
            oracle_max_intersecting(10, 5, 1, limits=OracleLimits(clique_universe_cap=100))

    def test_deterministic(self):
        a = oracle_max_intersecting(6, 3, 2)
        b = oracle_max_intersecting(6, 3, 2)
        assert (a.value, a.witness, a.explored) == (b.value, b.witness, b.explored)


class TestM0:
    @pytest.mark.parametrize(
        "n,m,k,t,expect",
        [(4, 2, 2, 1, 3), (4, 3, 2, 2, 2), (2, 1, 1, 1, 1), (4, 3, 2, 1, 4)],
    )
    def test_known_values(self, n, m, k, t, expect):
        res = oracle_m0(n, m, k, t)
        assert res.value == expect
        check_witness(res, "m0", {"t": t})

    def test_vs_raw_enumeration(self):
        for n in range(1, 6):
            for m in range(1, n + 1):
                for k in range(1, m + 1):
                    for t in range(1, k + 1):
                        assert oracle_m0(n, m, k, t).value == brute_m0(n, m, k, t)

    def test_frankl_shades_are_lower_bounds(self):
        for n in range(2, 7):
            for m in range(1, n + 1):
                for k in range(1, m + 1):
                    for t in range(1, k + 1):
                        val = oracle_m0(n, m, k, t).value
                        for i in range(min(k - t, (n - t) // 2) + 1):
                            gen = frankl_family(FranklParams(n, k, t, i))
                            assert val >= len(m_shade(gen, m))
                        assert val <= ak_max(n, m, t)

    def test_budget_exhaustion_is_infeasible(self):
        with pytest.raises(InfeasibleSizeError):
            oracle_m0(6, 4, 3, 1, limits=OracleLimits(bk_node_budget=5))


class TestCross:
    @pytest.mark.parametrize(
        "n,k,l,t,expect",
        [(4, 2, 2, 1, 9), (2, 1, 1, 1, 1), (4, 2, 2, 2, 1), (6, 2, 3, 1, 50)],
    )
    def test_known_values(self, n, k, l, t, expect):
        res = oracle_cross(n, k, l, t)
        assert res.value == expect
        check_witness(res, "n", {"t": t})

    def test_matsumoto_tokushige_small(self):
        for n in range(2, 7):
            for k in range(1, n // 2 + 1):
                for l in range(1, n // 2 + 1):
                    assert oracle_cross(n, k, l, 1).value == mt_cross_max(n, k, l)

    def test_vs_raw_enumeration(self):
        for n, k, l in [(4, 2, 2), (4, 1, 2), (5, 2, 2), (4, 3, 2), (5, 1, 3)]:
            for t in range(1, min(k, l) + 1):
                assert oracle_cross(n, k, l, t).value == brute_n0(n, k, l, k, l, t)

    def test_side_symmetry(self):
        for t in (1, 2):
            assert oracle_cross(6, 2, 3, t).value == oracle_cross(6, 3, 2, t).value

    def test_cap(self):
        with pytest.raises(InfeasibleSizeError):
            oracle_cross(8, 3, 3, 1, limits=OracleLimits(closure_universe_cap=30))


class TestN0N1:
    def test_identity_shades_reduce_to_cross(self):
        for n, k, l, t in [(4, 2, 2, 1), (5, 2, 2, 2), (4, 1, 2, 1)]:
            assert oracle_n0(n, k, l, k, l, t).value == oracle_cross(n, k, l, t).value

    def test_known_values(self):
        assert oracle_n0(4, 2, 2, 2, 2, 1).value == 9
        assert oracle_n0(4, 3, 3, 2, 2, 2).value == 4
        assert oracle_n1(4, 2, 2, 1).value == 9
        assert oracle_n1(4, 2, 2, 2).value == 1
        assert oracle_n1(4, 3, 2, 2).value == 4

    def test_n1_is_n0_diagonal(self):
        res = oracle_n1(5, 3, 2, 1)
        assert res.value == oracle_n0(5, 3, 3, 2, 2, 1).value
        assert res.cache_key == "n0:n=5,mk=3,ml=3,k=2,l=2,t=1"

    def test_vs_raw_enumeration(self):
        for n, mk, ml, k, l in [(4, 2, 3, 2, 2), (4, 3, 3, 2, 2), (4, 3, 2, 2, 2), (5, 3, 4, 2, 3)]:
            for t in range(1, min(k, l) + 1):
                got = oracle_n0(n, mk, ml, k, l, t).value
                assert got == brute_n0(n, mk, ml, k, l, t)

    def test_witness_pair_valid(self):
        res = oracle_n0(4, 3, 3, 2, 2, 2)
        a, b = res.witness
        assert is_cross_t_intersecting(a, b, 2)
        assert len(m_shade(a, 3)) * len(m_shade(b, 3)) == res.value

    def test_shade_bound_by_cross_at_shade_levels(self):
        # shades of a cross-t-intersecting pair are cross-t-intersecting
        for n, mk, ml, k, l, t in [(4, 2, 3, 2, 2, 1), (5, 3, 3, 2, 2, 1), (4, 3, 3, 2, 2, 2)]:
            assert oracle_n0(n, mk, ml, k, l, t).value <= oracle_cross(n, mk, ml, t).value


class TestConjectureCheck:
    def test_example_cell(self):
        (cell,) = conjecture_check_m0([(4, 2, 2, 1)])
        assert cell.verdict == "match" and cell.oracle_value == cell.conjectured == 3

    def test_identity_cells_forced(self):
        cells = conjecture_check_m0((n, k, k, t) for n, _, k, t in m0_grid(5) if k == _)
        assert all(c.verdict == "match" for c in cells)

    def test_empty_grid(self):
        assert conjecture_check_m0([]) == []

    def test_skip_reports_reason(self):
        cells = conjecture_check_m0([(8, 5, 4, 1)], limits=OracleLimits(bk_node_budget=10))
        assert cells[0].verdict == "skipped" and cells[0].reason

    def test_full_grid_to_n5(self):
        cells = conjecture_check_m0(m0_grid(5))
        assert cells and all(c.verdict == "match" for c in cells)


class TestCache:
    def test_roundtrip_and_hit(self, tmp_path):
        cache = OracleCache(tmp_path / "oracle.jsonl")
        first = oracle_max_intersecting(5, 2, 1, cache=cache)
        assert first.explored > 0
        hit = oracle_max_intersecting(5, 2, 1, cache=cache)
        assert hit.explored == 0
        assert (hit.value, hit.witness) == (first.value, first.witness)

    def test_corrupt_lines_skipped(self, tmp_path):
        path = tmp_path / "oracle.jsonl"
        cache = OracleCache(path)
        oracle_max_intersecting(4, 2, 2, cache=cache)
        with path.open("a") as fh:
            fh.write("this is not json\n")
        fresh = OracleCache(path)
        assert fresh.get("m:n=4,k=2,t=2") is not None
        assert not fresh.verify()

    def test_tampered_value_fails_verify_and_misses(self, tmp_path):
        path = tmp_path / "oracle.jsonl"
        cache = OracleCache(path)
        res = oracle_max_intersecting(4, 2, 1, cache=cache)
        rec = json.loads(path.read_text().strip())
        rec["value"] = res.value + 1
        path.write_text(json.dumps(rec) + "\n")
        fresh = OracleCache(path)
        assert fresh.get(res.cache_key) is None  # falls back to recompute
        failures = fresh.verify()
        assert failures and failures[0][0] == res.cache_key

    def test_revalidate_raises_on_bad_witness(self):
        fam = Family.from_sets(4, 2, [[1, 2], [3, 4]])
        with pytest.raises(WitnessValidationError):
            revalidate("m:n=4,k=2,t=1", 2, fam)
