"""Closed-form evaluators against independent enumeration."""

import itertools
from fractions import Fraction
from math import comb

import pytest

from shadelab.decay import MonomialSeq
from shadelab.extremal import (
    FranklParams,
    ak_max,
    conjectured_m0,
    frankl_family,
    frankl_size,
    hypothesis_flags,
    mt_cross_max,
    ratio_table_m0,
)
from shadelab.setfam import Family, is_t_intersecting, k_subset_masks, m_shade


def brute_frankl(n, k, t, i):
    """F_i by direct filtering over all k-subsets (independent of the package path)."""
    window = set(range(1, t + 2 * i + 1))
    out = []
    for combo in itertools.combinations(range(1, n + 1), k):
        if len(window & set(combo)) >= t + i:
            out.append(combo)
    return set(out)


class TestFranklFamily:
    def test_star_in_four(self):
        f = frankl_family(FranklParams(4, 2, 1, 0))
        assert f.sets() == ((1, 2), (1, 3), (1, 4))

    def test_single_pair(self):
        assert frankl_family(FranklParams(4, 2, 2, 0)).sets() == ((1, 2),)

    def test_empty_when_window_demand_exceeds_k(self):
        assert len(frankl_family(FranklParams(4, 2, 2, 1))) == 0

    def test_always_t_intersecting(self):
        for n in range(1, 9):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    for i in range((n - t) // 2 + 1):
                        fam = frankl_family(FranklParams(n, k, t, i))
                        if len(fam):
                            assert is_t_intersecting(fam, t)

    def test_matches_enumeration(self):
        for n in range(1, 8):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    for i in range((n - t) // 2 + 1):
                        fam = frankl_family(FranklParams(n, k, t, i))
                        assert set(fam.sets()) == brute_frankl(n, k, t, i)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            FranklParams(4, 5, 1, 0)
        with pytest.raises(ValueError):
            FranklParams(4, 2, 1, 2)


class TestFranklSize:
    def test_star_size(self):
        assert frankl_size(FranklParams(6, 3, 1, 0)) == comb(5, 2) == 10

    def test_zero(self):
        assert frankl_size(FranklParams(4, 2, 2, 1)) == 0

    def test_formula_vs_enumeration(self):
        # the hypergeometric sum is derived, so it is always cross-checked
        for n in range(1, 13):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    for i in range((n - t) // 2 + 1):
                        p = FranklParams(n, k, t, i)
                        assert frankl_size(p) == len(frankl_family(p))


class TestAkMax:
    def test_4m_values(self):
        assert ak_max(4, 2, 2) == 1 == (comb(4, 2) - comb(2, 1) ** 2) // 2
        assert ak_max(8, 4, 2) == 17 == (comb(8, 4) - comb(4, 2) ** 2) // 2

    def test_4m_closed_form_small(self):
        for m in (1, 2, 3):
            assert ak_max(4 * m, 2 * m, 2) == (comb(4 * m, 2 * m) - comb(2 * m, m) ** 2) // 2

    def test_k_intersecting_k_sets(self):
        for n in range(1, 9):
            for k in range(1, n + 1):
                assert ak_max(n, k, k) == 1

    def test_f0_special_case_when_n_large(self):
        # classical EKR regime: t = 1 and n >= 2k picks the star
        assert ak_max(8, 3, 1) == comb(7, 2)
        assert ak_max(10, 4, 1) == comb(9, 3)


class TestConjecturedM0:
    def test_examples(self):
        assert conjectured_m0(4, 2, 2, 1) == 3
        assert conjectured_m0(4, 3, 2, 2) == 2

    def test_identity_level_reduces_to_ak(self):
        for n in range(1, 13):
            for k in range(1, n + 1):
                for t in range(1, k + 1):
                    assert conjectured_m0(n, k, k, t) == ak_max(n, k, t)

    def test_never_exceeds_ak_at_shade_level(self):
        for n in range(1, 11):
            for m in range(1, n + 1):
                for k in range(1, m + 1):
                    for t in range(1, k + 1):
                        assert conjectured_m0(n, m, k, t) <= ak_max(n, m, t)

    def test_candidates_are_shades_of_generating_families(self):
        # for i <= k - t, F_i at level m is exactly the m-shade of F_i at level k
        for n in range(2, 9):
            for m in range(1, n + 1):
                for k in range(1, m + 1):
                    for t in range(1, k + 1):
                        for i in range(min(k - t, (n - t) // 2) + 1):
                            gen = frankl_family(FranklParams(n, k, t, i))
                            lifted = frankl_family(FranklParams(n, m, t, i))
                            assert m_shade(gen, m) == lifted


class TestMtCrossMax:
    def test_values(self):
        assert mt_cross_max(4, 2, 2) == 9
        assert mt_cross_max(2, 1, 1) == 1
        assert mt_cross_max(6, 2, 3) == comb(5, 1) * comb(5, 2) == 50

    def test_hypothesis_enforced(self):
        with pytest.raises(ValueError):
            mt_cross_max(4, 3, 2)
        with pytest.raises(ValueError):
            mt_cross_max(4, 2, 3)


class TestRatioTables:
    def test_identity_monomials_row(self):
        k_fn = t_fn = MonomialSeq(Fraction(1), Fraction(1))  # k(m) = t(m) = m
        rows = ratio_table_m0(k_fn, t_fn, [2])
        (row,) = rows
        assert row.value == 1
        assert row.ratio == Fraction(1, 6)

    def test_constant_one_gives_half(self):
        one = MonomialSeq(Fraction(1), Fraction(0))  # k(m) = t(m) = 1
        rows = ratio_table_m0(one, one, range(1, 9))
        for row in rows:
            assert row.value == comb(2 * row.m - 1, row.m - 1)
            assert row.ratio == Fraction(1, 2)

    def test_empty_values(self):
        one = MonomialSeq(Fraction(1), Fraction(0))
        assert ratio_table_m0(one, one, []) == []

    def test_flags(self):
        k_fn = MonomialSeq(Fraction(1), Fraction(1, 2))  # k(m) = ceil(sqrt(m))
        t_fn = MonomialSeq(Fraction(1), Fraction(1, 3))
        flags = hypothesis_flags(k_fn, t_fn)
        assert flags["k_is_o_of_m"] and flags["k_to_infinity"]
        assert flags["t_over_sqrt_k_to_infinity"]  # 1/3 > (1/2)/2
        assert not hypothesis_flags(k_fn, MonomialSeq(Fraction(1), Fraction(1, 5)))[
            "t_over_sqrt_k_to_infinity"
        ]

    def test_infeasible_rows_skipped_not_raised(self):
        k_fn = MonomialSeq(Fraction(2), Fraction(1))  # k(m) = 2m > m: precondition fails
        rows = ratio_table_m0(k_fn, k_fn, [3])
        assert rows[0].skipped and rows[0].value is None
