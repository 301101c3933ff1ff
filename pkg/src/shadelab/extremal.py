"""Closed-form extremal values for (cross-)t-intersecting families.

The candidate extremal shapes are the families F_i(n, k, t) of k-subsets
of [n] meeting [t+2i] in at least t+i points.  Their sizes give, by the
Ahlswede-Khachatrian theorem, the exact maximum size M(n, k, t) of a
t-intersecting family; a restricted maximum over the same shapes is the
conjectured value of the m-shade maximum M0(n, m, k, t); and the
Matsumoto-Tokushige theorem gives the exact cross-1-intersecting product
maximum when both sides are at most half the ground set.

Every closed form here is cross-validated against enumeration or the
brute-force oracles in the test suite; the ratio-table generators report
exact rationals so asymptotic trends are not blurred by rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .decay import MonomialSeq
from .setfam import Family, k_subset_masks

FLAG_NAMES = ("k_is_o_of_m", "k_to_infinity", "t_over_sqrt_k_to_infinity")


@dataclass(frozen=True)
class FranklParams:
    """Parameters (n, k, t, i) of the candidate extremal family F_i(n, k, t)."""

    n: int
    k: int
    t: int
    i: int

    def __post_init__(self) -> None:
        if not 1 <= self.t <= self.k <= self.n:
            raise ValueError(f"need 1 <= t <= k <= n, got t={self.t}, k={self.k}, n={self.n}")
        if not 0 <= self.i <= (self.n - self.t) // 2:
            raise ValueError(f"need 0 <= i <= (n-t)/2, got i={self.i}")


def frankl_family(p: FranklParams) -> Family:
    """The family F_i(n, k, t): k-subsets of [n] meeting [t+2i] in >= t+i points."""
    window = (1 << (p.t + 2 * p.i)) - 1
    need = p.t + p.i
    members = [m for m in k_subset_masks(p.n, p.k) if (m & window).bit_count() >= need]
    return Family.from_masks(p.n, p.k, members)


def frankl_size(p: FranklParams) -> int:
    """|F_i(n, k, t)| by the hypergeometric sum over the overlap with [t+2i]."""
    window = p.t + 2 * p.i
    return sum(
        comb(window, j) * comb(p.n - window, p.k - j)
        for j in range(p.t + p.i, min(p.k, window) + 1)
    )


def ak_max(n: int, k: int, t: int) -> int:
    """M(n, k, t): the exact maximum size of a t-intersecting family of
    k-subsets of [n], as the best of the candidate shapes (Ahlswede-Khachatrian)."""
    if not 1 <= t <= k <= n:
        raise ValueError(f"need 1 <= t <= k <= n, got t={t}, k={k}, n={n}")
    return max(frankl_size(FranklParams(n, k, t, i)) for i in range((n - t) // 2 + 1))


def conjectured_m0(n: int, m: int, k: int, t: int) -> int:
    """Conjectured M0(n, m, k, t): the best F_i(n, m, t) over 0 <= i <= min(k-t, (n-t)/2).

    The range cap i <= k-t is what makes each candidate realizable as the
    m-shade of a t-intersecting family of k-sets.
    """
    if not 1 <= t <= k <= m <= n:
        raise ValueError(f"need 1 <= t <= k <= m <= n, got ({n}, {m}, {k}, {t})")
    top = min(k - t, (n - t) // 2)
    return max(frankl_size(FranklParams(n, m, t, i)) for i in range(top + 1))


def mt_cross_max(n: int, k: int, l: int) -> int:
    """N(n, k, l, 1) = C(n-1, k-1) * C(n-1, l-1), valid whenever 2k, 2l <= n
    (Matsumoto-Tokushige)."""
    if not (1 <= k and 1 <= l):
        raise ValueError("k and l must be positive")
    if 2 * k > n or 2 * l > n:
        raise ValueError(f"theorem needs 2k, 2l <= n; got k={k}, l={l}, n={n}")
    return comb(n - 1, k - 1) * comb(n - 1, l - 1)


def hypothesis_flags(k_fn: MonomialSeq, t_fn: MonomialSeq) -> dict[str, bool]:
    """Whether the chosen monomials satisfy the asymptotic hypotheses
    k(m) = o(m), k(m) -> infinity, t(m)/sqrt(k(m)) -> infinity."""
    return {
        "k_is_o_of_m": k_fn.b < 1,
        "k_to_infinity": k_fn.b > 0,
        "t_over_sqrt_k_to_infinity": t_fn.b > k_fn.b / 2,
    }


@dataclass(frozen=True)
class RatioRow:
    """One row of a ratio table; `value` is M0 or N1 depending on the table."""

    m: int
    n: int
    k: int
    t: int
    source: str
    value: int | None = None
    ratio: Fraction | None = None
    ratio_decimal: str | None = None
    sqrt_decimal: str | None = None
    flags: dict[str, bool] | None = None
    skipped: str | None = None

    def csv_row(self) -> list:
        flag_str = ";".join(f"{name}={int(self.flags[name])}" for name in FLAG_NAMES) if self.flags else ""
        return [
            self.m, self.n, self.k, self.t,
            "" if self.value is None else self.value,
            "" if self.ratio is None else self.ratio.numerator,
            "" if self.ratio is None else self.ratio.denominator,
            self.ratio_decimal or "",
            self.sqrt_decimal or "",
            self.source,
            flag_str,
            self.skipped or "",
        ]

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "k": self.k, "t": self.t,
            "value": self.value,
            "ratio": None if self.ratio is None else [self.ratio.numerator, self.ratio.denominator],
            "ratio_decimal": self.ratio_decimal,
            "sqrt_decimal": self.sqrt_decimal,
            "source": self.source,
            "flags": self.flags,
            "skipped": self.skipped,
        }


RATIO_CSV_HEADER = [
    "m", "n", "k", "t", "value", "ratio_num", "ratio_den",
    "ratio_decimal", "sqrt_decimal", "source", "hypothesis_flags", "skipped",
]


def _row_params(k_fn: MonomialSeq, t_fn: MonomialSeq, m: int) -> tuple[int, int, int, str | None]:
    n = 2 * m
    k = k_fn.value_ceil(m)
    t = t_fn.value_ceil(m)
    if t > k:
        return n, k, t, f"t({m})={t} exceeds k({m})={k}"
    if k > m:
        return n, k, t, f"k({m})={k} exceeds m={m}"
    return n, k, t, None


def ratio_table_m0(k_fn: MonomialSeq, t_fn: MonomialSeq, m_values: Iterable[int],
                   source: str = "conjectured", limits=None, cache=None) -> list[RatioRow]:
    """Rows (m, M0(2m, m, k(m), t(m)) / C(2m, m)) with exact rational ratios.

    `source` picks the M0 evaluator: the conjectured closed form, or the
    brute-force oracle where it is feasible (infeasible rows are marked
    skipped, never raised).
    """
    if source not in ("conjectured", "oracle"):
        raise ValueError(f"source must be 'conjectured' or 'oracle', got {source!r}")
    rows = []
    for m in sorted(set(m_values)):
        n, k, t, why = _row_params(k_fn, t_fn, m)
        flags = hypothesis_flags(k_fn, t_fn)
        if why is not None:
            rows.append(RatioRow(m, n, k, t, source, flags=flags, skipped=why))
            continue
        if source == "conjectured":
            value = conjectured_m0(n, m, k, t)
        else:
            from . import oracle  # deferred: oracle depends on this module

            try:
                value = oracle.oracle_m0(n, m, k, t, limits=limits, cache=cache).value
            except oracle.InfeasibleSizeError as exc:
                rows.append(RatioRow(m, n, k, t, source, flags=flags, skipped=str(exc)))
                continue
        ratio = Fraction(value, comb(n, m))
        rows.append(RatioRow(m, n, k, t, source, value=value, ratio=ratio,
                             ratio_decimal=f"{float(ratio):.6g}", flags=flags))
    return rows


def ratio_table_n1(k_fn: MonomialSeq, t_fn: MonomialSeq, m_values: Iterable[int],
                   limits=None, cache=None) -> list[RatioRow]:
    """Rows (m, sqrt(N1(2m, m, k(m), t(m))) / C(2m, m)): exact N1 from the
    oracle, the square root rendered as a rounded decimal alongside it."""
    from . import oracle

    rows = []
    for m in sorted(set(m_values)):
        n, k, t, why = _row_params(k_fn, t_fn, m)
        flags = hypothesis_flags(k_fn, t_fn)
        if why is not None:
            rows.append(RatioRow(m, n, k, t, "oracle", flags=flags, skipped=why))
            continue
        try:
            n1 = oracle.oracle_n1(n, m, k, t, limits=limits, cache=cache).value
        except oracle.InfeasibleSizeError as exc:
            rows.append(RatioRow(m, n, k, t, "oracle", flags=flags, skipped=str(exc)))
            continue
        root = math.isqrt(n1)
        binom = comb(n, m)
        exact_ratio = Fraction(root, binom) if root * root == n1 else None
        rows.append(RatioRow(
            m, n, k, t, "oracle", value=n1,
            ratio=exact_ratio,
            ratio_decimal=f"{math.sqrt(n1) / binom:.6g}",
            sqrt_decimal=f"{math.sqrt(n1):.6g}",
            flags=flags,
        ))
    return rows
