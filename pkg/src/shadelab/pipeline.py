"""The finite parameter chain linking tree widths to the cross oracle.

For a branching sequence f with f(0) even, level n of the ambient tree
has width w(n) = f(0)*...*f(n-1); half of it is m(n), the colouring
space F(n) has size C(2m(n), m(n)), and a level-size sequence k(n) with
exponent beta in (1/2, 1) yields the threshold t(n) = ceil(k(n)^beta)
and the oracle value N1(2m(n), m(n), k(n), t(n)) whose root g(n)
measures how much of the colouring space a single split step can pin
down.  The chain is worth watching because g(n)/|F(n)| -> 0 is exactly
the hypothesis that turns the coideal construction on.

m(0) is 0 by the source convention of reading the empty product as
zero; the standard empty-product reading (which would give 1/2) is
surfaced alongside it in the n = 0 row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Sequence

from .decay import least_int_with_qth_power_at_least
from .oracle import DEFAULT_LIMITS, InfeasibleSizeError, OracleCache, OracleLimits, oracle_n1
from .trees import BranchingSpec


def ceil_rational_power(base: int, beta: Fraction) -> int:
    """Exact ceil(base^beta) for an integer base >= 1 and rational beta >= 0."""
    if base < 1:
        raise ValueError("base must be >= 1")
    beta = Fraction(beta)
    return least_int_with_qth_power_at_least(
        Fraction(base) ** beta.numerator, beta.denominator
    )


def ceil_sqrt(x: int) -> int:
    s = isqrt(x)
    return s if s * s == x else s + 1


@dataclass(frozen=True)
class PipelineRow:
    """State of the parameter chain at one level index n."""

    n: int
    m: int
    m_standard_convention: Fraction  # half the true level width (= m except at n = 0)
    colouring_count: int  # |F(n)| = C(2m, m)
    k: int
    t: int
    n1: int | None = None
    g: int | None = None
    ratio: Fraction | None = None  # g(n) / |F(n)|
    skipped: str | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "m_standard_convention": str(self.m_standard_convention),
            "colouring_count": self.colouring_count,
            "k": self.k,
            "t": self.t,
            "n1": self.n1,
            "g": self.g,
            "ratio": None if self.ratio is None else [self.ratio.numerator, self.ratio.denominator],
            "skipped": self.skipped,
        }

    def csv_row(self) -> list:
        return [
            self.n, self.m, str(self.m_standard_convention), self.colouring_count,
            self.k, self.t,
            "" if self.n1 is None else self.n1,
            "" if self.g is None else self.g,
            "" if self.ratio is None else self.ratio.numerator,
            "" if self.ratio is None else self.ratio.denominator,
            "" if self.ratio is None else f"{float(self.ratio):.6g}",
            self.skipped or "",
        ]


PIPELINE_CSV_HEADER = [
    "n", "m", "m_standard", "colourings", "k", "t",
    "n1", "g", "ratio_num", "ratio_den", "ratio_decimal", "skipped",
]


def build_pipeline(spec: BranchingSpec, k_seq: Sequence[int], beta: Fraction, n_max: int, *,
                   limits: OracleLimits | None = None,
                   cache: OracleCache | None = None) -> list[PipelineRow]:
    """Rows n = 0..n_max of the parameter chain.

    Oracle-infeasible rows are marked skipped, never raised; the ratio
    column is exact so the g/|F| -> 0 trend can be read off the computed
    prefix without rounding noise.
    """
    beta = Fraction(beta)
    if not Fraction(1, 2) < beta < 1:
        raise ValueError(f"beta must lie in (1/2, 1), got {beta}")
    if spec.f[0] % 2 != 0:
        raise ValueError("the leading branching factor must be even")
    if n_max > spec.depth:
        raise ValueError(f"n_max {n_max} exceeds spec depth {spec.depth}")
    if len(k_seq) <= n_max:
        raise ValueError(f"k sequence has {len(k_seq)} entries; need n_max + 1 = {n_max + 1}")
    rows = []
    for n in range(n_max + 1):
        width = spec.width_product(n)
        m = 0 if n == 0 else width // 2
        m_std = Fraction(width, 2)
        count = comb(2 * m, m)
        k = int(k_seq[n])
        if k < 1:
            raise ValueError(f"k({n}) = {k} must be positive")
        t = ceil_rational_power(k, beta)
        if n == 0:
            rows.append(PipelineRow(n, m, m_std, count, k, t,
                                    skipped="m(0) = 0 by the empty-product convention"))
            continue
        if k > 2 * m:
            raise ValueError(f"k({n}) = {k} exceeds the level width 2m = {2 * m}")
        if k > m:
            rows.append(PipelineRow(n, m, m_std, count, k, t,
                                    skipped=f"k={k} exceeds the shade level m={m}"))
            continue
        try:
            n1 = oracle_n1(2 * m, m, k, t, limits=limits, cache=cache).value
        except InfeasibleSizeError as exc:
            rows.append(PipelineRow(n, m, m_std, count, k, t, skipped=str(exc)))
            continue
        g = ceil_sqrt(n1)
        rows.append(PipelineRow(n, m, m_std, count, k, t, n1=n1, g=g,
                                ratio=Fraction(g, count)))
    return rows


@dataclass(frozen=True)
class ClaimC5Row:
    """One (candidate count, shade size) pair checked against sqrt(N1).

    The counting step being verified: when more than 2*sqrt(N1)
    candidate colourings each make some level set homogeneous, and the
    homogeneous-colouring count is at most twice the shade size, the
    shade size must exceed sqrt(N1).  All comparisons against the root
    are exact (squared).
    """

    candidate_count: int
    shade_size: int
    status: str  # "holds" | "vacuous_small_count" | "inconsistent_pair" | "violated"

    def to_json(self) -> dict:
        return {
            "candidate_count": self.candidate_count,
            "shade_size": self.shade_size,
            "status": self.status,
        }


CLAIM_C5_CSV_HEADER = ["candidate_count", "shade_size", "status"]


def claim_c5_bound_check(level_families: Sequence[tuple[int, int]], n: int, m: int,
                         k: int, t: int, *, limits: OracleLimits | None = None,
                         cache: OracleCache | None = None) -> list[ClaimC5Row]:
    """Check the arithmetic implication of the pivotal counting step on
    supplied (candidate colouring count B, shade size s) pairs.

    A pair with B > 2s cannot arise from an actual level family (the
    homogeneous-colouring count is sandwiched between B and 2s) and is
    reported as inconsistent rather than judged.
    """
    if n != 2 * m:
        raise ValueError(f"colouring space needs a ground set of size 2m, got n={n}, m={m}")
    n1 = oracle_n1(n, m, k, t, limits=limits or DEFAULT_LIMITS, cache=cache).value
    rows = []
    for b, s in level_families:
        if b < 0 or s < 0:
            raise ValueError("counts must be nonnegative")
        if b * b <= 4 * n1:
            status = "vacuous_small_count"  # B <= 2 sqrt(N1): nothing to conclude
        elif b > 2 * s:
            status = "inconsistent_pair"
        elif s * s > n1:
            status = "holds"
        else:  # pragma: no cover - arithmetically impossible: 2s >= B > 2 sqrt(N1)
            status = "violated"
        rows.append(ClaimC5Row(b, s, status))
    return rows
