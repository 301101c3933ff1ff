"""Set-family kernel: shades, intersection predicates, colourings."""

import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadelab.setfam import (
    Colouring,
    Family,
    count_homogeneous_colourings,
    elements_of,
    full_mask,
    is_cross_t_intersecting,
    is_homogeneous,
    is_t_intersecting,
    iter_colourings,
    k_subset_masks,
    m_shade,
    mask_of,
    shade,
    shade_cardinality,
)


def fam(n, k, *sets):
    return Family.from_sets(n, k, sets)


class TestMasks:
    def test_roundtrip(self):
        assert elements_of(mask_of([2, 5, 1], 6)) == (1, 2, 5)
        assert mask_of([], 4) == 0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mask_of([5], 4)

    def test_k_subsets_are_sorted_unique(self):
        masks = k_subset_masks(6, 3)
        assert len(masks) == comb(6, 3)
        assert list(masks) == sorted(set(masks))
        assert all(m.bit_count() == 3 for m in masks)


class TestFamily:
    def test_canonical_storage(self):
        f = fam(4, 2, [2, 1], [3, 4], [1, 2])
        assert f.members == tuple(sorted(f.members))
        assert len(f) == 2

    def test_rejects_mixed_cardinality(self):
        with pytest.raises(ValueError):
            Family.from_masks(4, 2, [0b111])

    def test_rejects_out_of_ground_set(self):
        with pytest.raises(ValueError):
            Family.from_masks(3, 2, [0b1100])

    def test_json_roundtrip(self):
        f = fam(5, 2, [1, 2], [2, 5])
        assert Family.from_json(f.to_json()) == f


class TestShade:
    def test_unique_superset(self):
        assert shade(mask_of([1, 2], 3), 3) == fam(3, 3, [1, 2, 3])

    def test_singleton(self):
        assert shade(mask_of([1], 3), 3) == fam(3, 2, [1, 2], [1, 3])

    def test_empty_set(self):
        assert shade(0, 2) == fam(2, 1, [1], [2])

    def test_full_set_gives_empty_family(self):
        assert len(shade(full_mask(3), 3)) == 0


class TestMShade:
    def test_identity_at_own_level(self):
        X = fam(3, 1, [1])
        assert m_shade(X, 1) == X

    def test_two_singletons(self):
        X = fam(3, 1, [1], [2])
        assert m_shade(X, 2) == fam(3, 2, [1, 2], [1, 3], [2, 3])

    def test_empty_family(self):
        assert len(m_shade(Family.empty(4, 2), 3)) == 0

    def test_level_below_members_is_empty(self):
        assert len(m_shade(fam(4, 3, [1, 2, 3]), 2)) == 0

    def test_level_beyond_ground_set_raises(self):
        with pytest.raises(ValueError):
            m_shade(fam(3, 1, [1]), 4)

    def test_single_set_cardinality_closed_form(self):
        # |m-shade({x})| = C(n-|x|, m-|x|), exhaustively for n <= 10
        for n in range(1, 11):
            for x in range(1 << n):
                k = x.bit_count()
                for m in range(k, n + 1):
                    got = len(m_shade(Family.from_masks(n, k, [x]), m))
                    assert got == shade_cardinality(k, n, m) == comb(n - k, m - k)

    @given(st.data())
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_family(self, data):
        n = data.draw(st.integers(2, 6))
        k = data.draw(st.integers(1, n))
        universe = k_subset_masks(n, k)
        big = data.draw(st.sets(st.sampled_from(universe)))
        small = data.draw(st.sets(st.sampled_from(sorted(big)))) if big else set()
        m = data.draw(st.integers(k, n))
        X = Family.from_masks(n, k, small)
        Y = Family.from_masks(n, k, big)
        assert set(m_shade(X, m).members) <= set(m_shade(Y, m).members)


class TestIntersecting:
    def test_examples(self):
        assert is_t_intersecting(fam(4, 2, [1, 2], [1, 3]), 1)
        assert not is_t_intersecting(fam(4, 2, [1, 2], [3, 4]), 1)
        assert is_t_intersecting(fam(4, 2, [1, 2]), 2)

    def test_singleton_below_threshold(self):
        # literal reading: |E & E| = k < t fails the ordered-pair condition
        assert not is_t_intersecting(fam(4, 2, [1, 2]), 3)
        assert is_t_intersecting(Family.empty(4, 2), 3)

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValueError):
            is_t_intersecting(fam(4, 2, [1, 2]), 0)

    def test_cross_examples(self):
        assert is_cross_t_intersecting(fam(4, 2, [1, 2]), fam(4, 2, [1, 3]), 1)
        assert is_cross_t_intersecting(Family.empty(4, 2), fam(4, 2, [3, 4]), 5)
        assert not is_cross_t_intersecting(fam(4, 2, [1, 2]), fam(4, 2, [3, 4]), 1)

    def test_cross_mismatched_ground_sets(self):
        with pytest.raises(ValueError):
            is_cross_t_intersecting(fam(4, 2, [1, 2]), fam(5, 2, [1, 2]), 1)

    def test_self_cross_equals_plain(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(2, 6)
            k = rng.randint(1, n)
            universe = k_subset_masks(n, k)
            X = Family.from_masks(n, k, rng.sample(universe, rng.randint(0, len(universe))))
            t = rng.randint(1, k + 1)
            assert is_t_intersecting(X, t) == is_cross_t_intersecting(X, X, t)

    def test_cross_shade_preservation(self):
        # shades of a cross-t-intersecting pair stay cross-t-intersecting
        rng = random.Random(11)
        checked = 0
        while checked < 100:
            n = rng.randint(2, 6)
            k = rng.randint(1, n)
            l = rng.randint(1, n)
            t = rng.randint(1, min(k, l))
            uk, ul = k_subset_masks(n, k), k_subset_masks(n, l)
            A = Family.from_masks(n, k, rng.sample(uk, rng.randint(1, len(uk))))
            B = Family.from_masks(n, l, rng.sample(ul, rng.randint(1, len(ul))))
            if not is_cross_t_intersecting(A, B, t):
                continue
            mk = rng.randint(k, n)
            ml = rng.randint(l, n)
            assert is_cross_t_intersecting(m_shade(A, mk), m_shade(B, ml), t)
            checked += 1


class TestHomogeneity:
    def test_examples(self):
        c = Colouring(4, mask_of([1, 2], 4))
        assert is_homogeneous(mask_of([1, 2], 4), c)
        assert not is_homogeneous(mask_of([1, 3], 4), c)
        assert is_homogeneous(0, c)

    def test_one_class_side(self):
        c = Colouring(4, mask_of([1, 2], 4))
        assert is_homogeneous(mask_of([3, 4], 4), c)

    def test_equivalence_with_shade_membership(self):
        # x homogeneous for c  <=>  c^-1(0) in m-shade(x) or c^-1(1) in (n-m)-shade(x)
        for n in range(1, 7):
            for m in range(n + 1):
                for c in iter_colourings(n, m):
                    for x in range(1 << n):
                        k = x.bit_count()
                        single = Family.from_masks(n, k, [x])
                        in_zero = c.zero_class in m_shade(single, m).members if m <= n else False
                        in_one = c.one_class in m_shade(single, n - m).members
                        assert is_homogeneous(x, c) == (in_zero or in_one)


class TestHomogeneousColouringCount:
    def test_pair_in_four(self):
        assert count_homogeneous_colourings(fam(4, 2, [1, 2]), 2) == 2

    def test_empty(self):
        assert count_homogeneous_colourings(Family.empty(4, 2), 2) == 0

    def test_singletons_always_homogeneous(self):
        assert count_homogeneous_colourings(fam(2, 1, [1]), 1) == 2

    def test_requires_even_split(self):
        with pytest.raises(ValueError):
            count_homogeneous_colourings(fam(4, 2, [1, 2]), 1)

    @staticmethod
    def brute_count(X, m):
        n = X.n
        count = 0
        for zero in itertools.combinations(range(1, n + 1), m):
            c = Colouring(n, mask_of(zero, n))
            if any(is_homogeneous(x, c) for x in X.members):
                count += 1
        return count

    def test_exhaustive_bound_at_four(self):
        # every family of k-subsets of [4], k = 1, 2: count <= 2 |2-shade|
        for k in (1, 2):
            universe = k_subset_masks(4, k)
            for r in range(len(universe) + 1):
                for members in itertools.combinations(universe, r):
                    X = Family.from_masks(4, k, members)
                    cnt = count_homogeneous_colourings(X, 2)
                    assert cnt == self.brute_count(X, 2)
                    assert cnt <= 2 * len(m_shade(X, 2))

    @pytest.mark.parametrize("two_m", [6, 8])
    def test_randomized_bound(self, two_m):
        rng = random.Random(two_m)
        m = two_m // 2
        for _ in range(1000):
            k = rng.randint(1, m)
            universe = k_subset_masks(two_m, k)
            X = Family.from_masks(two_m, k, rng.sample(universe, rng.randint(0, min(10, len(universe)))))
            assert count_homogeneous_colourings(X, m) <= 2 * len(m_shade(X, m))
