"""Exact kernel for set families over a small ground set.

A subset of [n] = {1, ..., n} is a bit mask (element i sits at bit i-1),
a family is a canonically sorted, duplicate-free tuple of masks of one
common cardinality, and a two-colouring of [n] is recorded by the mask
of its 0-class.  The ground set is capped at n = 30 so every mask stays
inside one machine word; the searches built on top of this module live
at n <= 12 anyway.

Everything here is a pure function on immutable values and is safe to
call concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator

MAX_GROUND_SET = 30


def _check_ground_set(n: int) -> None:
    if not 0 <= n <= MAX_GROUND_SET:
        raise ValueError(f"ground set size {n} outside [0, {MAX_GROUND_SET}]")


def full_mask(n: int) -> int:
    """Mask of the whole ground set [n]."""
    _check_ground_set(n)
    return (1 << n) - 1


def mask_of(elements: Iterable[int], n: int) -> int:
    """Mask of a collection of elements of [n] (1-based)."""
    _check_ground_set(n)
    bits = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set [1, {n}]")
        bits |= 1 << (e - 1)
    return bits


def elements_of(mask: int) -> tuple[int, ...]:
    """1-based elements of a mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


@lru_cache(maxsize=1024)
def k_subset_masks(n: int, k: int) -> tuple[int, ...]:
    """All k-subsets of [n] as masks, in ascending numeric order.

    This ordering is the canonical vertex order used by every oracle, so
    lexicographic comparison of index tuples agrees with comparison of
    sorted member-mask tuples.
    """
    _check_ground_set(n)
    if k < 0 or k > n:
        return ()
    masks = []
    for combo in itertools.combinations(range(n), k):
        bits = 0
        for pos in combo:
            bits |= 1 << pos
        masks.append(bits)
    return tuple(sorted(masks))


@dataclass(frozen=True)
class Family:
    """A family of k-subsets of [n]: sorted, duplicate-free member masks.

    The canonical storage order makes equality, hashing and the
    lexicographic tie-break used by the oracles well defined.
    """

    n: int
    k: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_ground_set(self.n)
        if self.k < 0:
            raise ValueError(f"negative member cardinality {self.k}")
        top = full_mask(self.n)
        prev = -1
        for m in self.members:
            if m & ~top:
                raise ValueError(f"member {m:#x} has bits outside [1, {self.n}]")
            if m.bit_count() != self.k:
                raise ValueError(
                    f"member {elements_of(m)} has size {m.bit_count()}, expected {self.k}"
                )
            if m <= prev:
                raise ValueError("members must be strictly ascending (sorted, no duplicates)")
            prev = m

    @classmethod
    def from_masks(cls, n: int, k: int, masks: Iterable[int]) -> "Family":
        return cls(n, k, tuple(sorted(set(masks))))

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls.from_masks(n, k, (mask_of(s, n) for s in sets))

    @classmethod
    def empty(cls, n: int, k: int) -> "Family":
        return cls(n, k, ())

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in set(self.members)

    def sets(self) -> tuple[tuple[int, ...], ...]:
        """Members rendered as sorted element tuples (for humans / JSON)."""
        return tuple(elements_of(m) for m in self.members)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "members": [list(s) for s in self.sets()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Family":
        return cls.from_sets(obj["n"], obj["k"], obj["members"])


@dataclass(frozen=True)
class Colouring:
    """A two-colouring of [n], recorded by the mask of its 0-class.

    Membership in the collection written S-choose-[m] means the 0-class
    has exactly m points.
    """

    n: int
    zero_class: int

    def __post_init__(self) -> None:
        _check_ground_set(self.n)
        if self.zero_class & ~full_mask(self.n):
            raise ValueError("0-class has points outside the ground set")

    @property
    def m(self) -> int:
        return self.zero_class.bit_count()

    @property
    def one_class(self) -> int:
        return full_mask(self.n) & ~self.zero_class


def iter_colourings(n: int, m: int) -> Iterator[Colouring]:
    """All colourings of [n] with a 0-class of size m (the set [n]-choose-[m])."""
    for z in k_subset_masks(n, m):
        yield Colouring(n, z)


def shade(x: int, n: int) -> Family:
    """All supersets of x with one extra point of [n].

    Empty (not an error) when x is the whole ground set.
    """
    _check_ground_set(n)
    k = x.bit_count()
    missing = full_mask(n) & ~x
    out = []
    while missing:
        low = missing & -missing
        out.append(x | low)
        missing ^= low
    return Family.from_masks(n, k + 1, out)


def mask_m_shade(x: int, n: int, m: int) -> Iterator[int]:
    """All supersets of x of size m, as masks (empty if m < |x|)."""
    k = x.bit_count()
    if m < k:
        return
    if m > n:
        raise ValueError(f"level {m} exceeds ground set size {n}")
    free = elements_of(full_mask(n) & ~x)
    for extra in itertools.combinations(free, m - k):
        yield x | mask_of(extra, n)


def m_shade(X: Family, m: int) -> Family:
    """The m-shade of a family: every m-set containing some member.

    m below the member size gives the empty family; m above the ground
    set size is an error.
    """
    if m > X.n:
        raise ValueError(f"level {m} exceeds ground set size {X.n}")
    out: set[int] = set()
    for x in X.members:
        out.update(mask_m_shade(x, X.n, m))
    return Family.from_masks(X.n, m, out)


def is_t_intersecting(X: Family, t: int) -> bool:
    """Whether every ordered pair of members (including E = F) meets in >= t points.

    The literal reading of the pair condition makes a singleton {E} with
    |E| < t not t-intersecting.
    """
    if t < 1:
        raise ValueError(f"threshold t={t} must be >= 1")
    ms = X.members
    for i, e in enumerate(ms):
        for f in ms[i:]:
            if (e & f).bit_count() < t:
                return False
    return True


def is_cross_t_intersecting(A: Family, B: Family, t: int) -> bool:
    """Whether every member of A meets every member of B in >= t points.

    Vacuously true when either family is empty.
    """
    if t < 1:
        raise ValueError(f"threshold t={t} must be >= 1")
    if A.n != B.n:
        raise ValueError(f"mismatched ground sets: [{A.n}] vs [{B.n}]")
    for e in A.members:
        for f in B.members:
            if (e & f).bit_count() < t:
                return False
    return True


def is_homogeneous(x: int, c: Colouring) -> bool:
    """Whether the colouring is constant on x (the empty set counts as constant)."""
    if x & ~full_mask(c.n):
        raise ValueError("x has points outside the colouring's ground set")
    return (x & ~c.zero_class) == 0 or (x & c.zero_class) == 0


def count_homogeneous_colourings(X: Family, m: int) -> int:
    """Number of colourings in [2m]-choose-[m] for which some member of X is homogeneous.

    Exact, by iterating all C(2m, m) colourings; requires ground set [2m].
    """
    if X.n != 2 * m:
        raise ValueError(f"ground set must be [2m] = [{2 * m}], got [{X.n}]")
    count = 0
    for z in k_subset_masks(X.n, m):
        nz = full_mask(X.n) & ~z
        for x in X.members:
            if (x & nz) == 0 or (x & z) == 0:
                count += 1
                break
    return count


def shade_cardinality(x_size: int, n: int, m: int) -> int:
    """Closed form C(n - |x|, m - |x|) for the size of a single set's m-shade."""
    return comb(n - x_size, m - x_size) if x_size <= m <= n else 0
