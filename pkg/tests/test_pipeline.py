"""Parameter chain rows and the counting-step arithmetic check."""

import itertools
from fractions import Fraction

import pytest

from shadelab.pipeline import (
    ClaimC5Row,
    PipelineRow,
    build_pipeline,
    ceil_rational_power,
    claim_c5_bound_check,
)
from shadelab.setfam import Family, count_homogeneous_colourings, k_subset_masks, m_shade
from shadelab.trees import BranchingSpec

F = Fraction
BIN = BranchingSpec.constant(2, 6)


class TestCeilPower:
    def test_examples(self):
        assert ceil_rational_power(2, F(3, 4)) == 2
        assert ceil_rational_power(1, F(3, 4)) == 1
        assert ceil_rational_power(16, F(3, 4)) == 8
        assert ceil_rational_power(5, F(1, 2)) == 3

    def test_never_exceeds_base(self):
        for base in range(1, 200):
            for beta in (F(1, 2), F(2, 3), F(3, 4), F(7, 8)):
                t = ceil_rational_power(base, beta)
                assert 1 <= t <= base


class TestBuildPipeline:
    def test_reference_rows(self):
        rows = build_pipeline(BIN, [2] * 7, F(3, 4), 3)
        by_n = {r.n: r for r in rows}
        assert [by_n[n].m for n in (1, 2, 3)] == [1, 2, 4]
        assert by_n[2].colouring_count == 6
        row2 = by_n[2]
        assert (row2.k, row2.t, row2.n1, row2.g) == (2, 2, 1, 1)
        assert row2.ratio == F(1, 6)

    def test_row_zero_convention(self):
        rows = build_pipeline(BIN, [1] * 7, F(3, 4), 0)
        (row,) = rows
        assert row.m == 0 and row.m_standard_convention == F(1, 2)
        assert row.colouring_count == 1  # C(0, 0)
        assert row.n1 is None and row.skipped

    def test_row_three_is_computable(self):
        rows = build_pipeline(BIN, [2] * 7, F(3, 4), 3)
        row3 = rows[3]
        # cross-2-intersecting pairs of 2-sets of [8] are equal singletons;
        # the 4-shade of one pair has C(6, 2) = 15 supersets
        assert row3.n1 == 225 and row3.g == 15
        assert row3.ratio == F(15, 70)

    def test_k_above_m_skipped(self):
        rows = build_pipeline(BIN, [2] * 7, F(3, 4), 1)
        assert rows[1].skipped and "shade level" in rows[1].skipped

    def test_g_squeeze_invariant(self):
        for row in build_pipeline(BIN, [1, 1, 2, 2, 2], F(2, 3), 4):
            if row.n1 is not None and row.n1 > 0:
                assert row.g**2 >= row.n1 > (row.g - 1) ** 2

    def test_m_telescoping(self):
        spec = BranchingSpec((2, 3, 2, 4, 2))
        rows = build_pipeline(spec, [1] * 6, F(3, 4), 5)
        for prev, cur in itertools.pairwise(rows[1:]):
            assert cur.m == prev.m * spec.f[prev.n]

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            build_pipeline(BranchingSpec((3, 2)), [1, 1, 1], F(3, 4), 1)  # f(0) odd
        with pytest.raises(ValueError):
            build_pipeline(BIN, [1, 1], F(1, 2), 1)  # beta on the boundary
        with pytest.raises(ValueError):
            build_pipeline(BIN, [1], F(3, 4), 1)  # k sequence too short
        with pytest.raises(ValueError):
            build_pipeline(BIN, [1, 9, 9], F(3, 4), 2)  # k above the level width


class TestClaimC5:
    def test_example_pair(self):
        (row,) = claim_c5_bound_check([(3, 2)], 4, 2, 2, 2)  # N1 = 1
        assert row.status == "holds"

    def test_vacuous_pair(self):
        (row,) = claim_c5_bound_check([(2, 5)], 4, 2, 2, 2)  # B = 2 = 2*sqrt(N1)
        assert row.status == "vacuous_small_count"

    def test_inconsistent_pair(self):
        (row,) = claim_c5_bound_check([(9, 1)], 4, 2, 2, 2)
        assert row.status == "inconsistent_pair"

    def test_requires_even_ground_set(self):
        with pytest.raises(ValueError):
            claim_c5_bound_check([], 5, 2, 2, 1)

    @pytest.mark.parametrize("k,t", [(1, 1), (2, 1), (2, 2)])
    def test_exhaustive_sweep_over_ground_set_four(self, k, t):
        # pairs harvested from every actual family never violate the implication
        universe = k_subset_masks(4, k)
        pairs = []
        for r in range(len(universe) + 1):
            for members in itertools.combinations(universe, r):
                X = Family.from_masks(4, k, members)
                pairs.append((count_homogeneous_colourings(X, 2), len(m_shade(X, 2))))
        rows = claim_c5_bound_check(pairs, 4, 2, k, t)
        assert rows and all(r.status != "violated" for r in rows)
        assert all(r.status != "inconsistent_pair" for r in rows)
