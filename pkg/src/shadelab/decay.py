"""Branching-decay comparison orders on integer sequences.

Two regimes, kept strictly apart:

* symbolic -- sequences are monomials n |-> ceil(a * n^b) with exact
  rational a, b, and transforms are powers x |-> x^alpha.  Here the
  decay comparison liminf h(n) / tau(g(n)) is decidable exactly from
  the exponents, so every statement in this regime is exact.

* windowed -- sequences are explicit integer data (for instance level
  sizes of a finite tree) and the liminf is replaced by the minimum
  over a stated window.  Windowed verdicts are labelled approximate:
  a window minimum only bounds the liminf, it does not compute it.

Minimisation and threshold tests in the windowed regime are always
performed exactly by clearing the root (comparing h^q * g'^p against
h'^q * g^p for alpha = p/q).  Only the *reported* value of an inexact
root is approximated, by a dyadic interval of width 2^-APPROX_BITS
with outward rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .trees import BranchingSpec, FiniteTree, full_tree_level_size, is_subtree

APPROX_BITS = 128

# Classification thresholds for rendering a windowed minimum as
# "effectively zero" / "effectively infinite".
EPS_CLASSIFY = Fraction(1, 2**20)
BIG_CLASSIFY = Fraction(2**20)


def int_nth_root_floor(x: int, q: int) -> int:
    """Largest z >= 0 with z**q <= x (x >= 0, q >= 1); integer Newton."""
    if x < 0 or q < 1:
        raise ValueError("need x >= 0 and q >= 1")
    if x == 0:
        return 0
    if q == 1:
        return x
    z = 1 << (-(-x.bit_length() // q))  # 2^ceil(bits/q) >= x^(1/q)
    while True:
        y = ((q - 1) * z + x // z ** (q - 1)) // q
        if y >= z:
            break
        z = y
    while z**q > x:  # Newton lands at floor or one above
        z -= 1
    return z


def least_int_with_qth_power_at_least(r: Fraction, q: int) -> int:
    """Smallest z >= 0 with z**q >= r, i.e. ceil(r^(1/q)) for r > 0."""
    if r <= 0:
        return 0
    z = int_nth_root_floor(math.ceil(r), q)
    while z**q < r:
        z += 1
    while z >= 1 and (z - 1) ** q >= r:
        z -= 1
    return z


def fraction_root_exact(x: Fraction, q: int) -> Fraction | None:
    """x^(1/q) when it is rational, else None."""
    if x < 0:
        raise ValueError("negative radicand")
    pn = int_nth_root_floor(x.numerator, q)
    pd = int_nth_root_floor(x.denominator, q)
    if pn**q == x.numerator and pd**q == x.denominator:
        return Fraction(pn, pd)
    return None


def fraction_root_interval(x: Fraction, q: int, bits: int = APPROX_BITS) -> tuple[Fraction, Fraction]:
    """Outward-rounded dyadic interval [lo, hi] containing x^(1/q), width 2^-bits."""
    if x < 0:
        raise ValueError("negative radicand")
    scaled = (x.numerator << (q * bits)) // x.denominator
    z = int_nth_root_floor(scaled, q)
    return Fraction(z, 1 << bits), Fraction(z + 1, 1 << bits)


def fraction_pow(x: Fraction, p: int, q: int) -> tuple[Fraction, bool]:
    """x^(p/q) for x > 0: (exact value, True) or (interval midpoint, False)."""
    powered = x**p
    exact = fraction_root_exact(powered, q)
    if exact is not None:
        return exact, True
    lo, hi = fraction_root_interval(powered, q)
    return (lo + hi) / 2, False


@dataclass(frozen=True)
class MonomialSeq:
    """The integer sequence n |-> ceil(a * n^b), with a, b exact rationals."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a <= 0:
            raise ValueError(f"coefficient must be positive, got {self.a}")
        if self.b < 0:
            raise ValueError(f"exponent must be nonnegative, got {self.b}")

    def value_ceil(self, n: int) -> int:
        """Exact ceil(a * n^b): the least z with z^q >= a^q * n^p for b = p/q."""
        if n < 1:
            raise ValueError("monomial sequences are indexed from n = 1")
        p, q = self.b.numerator, self.b.denominator
        return least_int_with_qth_power_at_least(self.a**q * Fraction(n) ** p, q)

    def values(self, n0: int, n1: int) -> list[int]:
        return [self.value_ceil(n) for n in range(n0, n1 + 1)]

    def label(self) -> str:
        return f"ceil({self.a}*n^{self.b})"


class TauFamily(Enum):
    """The two transform families in use: {id} and {x^alpha : 0 < alpha < 1}."""

    ID = "id"
    POWERS_BELOW_ONE = "powers"


@dataclass(frozen=True)
class Tau:
    """A power transform x |-> x^alpha with 0 < alpha <= 1.

    alpha <= 1 gives tau(x) = O(x) and concavity (so tau(cx) >= c*tau(x)
    for c <= 1); alpha > 0 gives tau -> infinity.
    """

    alpha: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    def apply(self, x: Fraction) -> tuple[Fraction, bool]:
        """tau(x) as (value, exact?); exact when x^alpha is rational."""
        if x <= 0:
            raise ValueError("transforms are applied to positive values only")
        return fraction_pow(Fraction(x), self.alpha.numerator, self.alpha.denominator)


ID_TAU = Tau(Fraction(1))


def family_is_suitable(family: TauFamily) -> bool:
    """Structural suitability check for the supported transform families.

    Conditions (growth O(x), divergence, concavity) hold for every
    x^alpha with 0 < alpha <= 1 by construction.  Root-closure: id is
    its own square root; the family {x^alpha : 0 < alpha < 1} is closed
    because sqrt(alpha) again lies in (0, 1).
    """
    return family in (TauFamily.ID, TauFamily.POWERS_BELOW_ONE)


@dataclass(frozen=True)
class RhoValue:
    """Exact liminf of h(n)/tau(g(n)) for monomial g, h: zero, a positive value, or infinity."""

    kind: str  # "zero" | "finite" | "infinite"
    value: Fraction | None  # set for kind == "finite"
    exact: bool

    def __float__(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "infinite":
            return math.inf
        return float(self.value)

    @property
    def positive(self) -> bool:
        return self.kind != "zero"


def rho_symbolic(g: MonomialSeq, h: MonomialSeq, tau: Tau) -> RhoValue:
    """liminf_n h(n) / tau(g(n)) for monomials, decided from the exponents.

    The ratio is (a_h / a_g^alpha) * n^(b_h - alpha*b_g) up to the
    ceilings, which do not move the limit; so the liminf is infinite,
    zero, or the coefficient ratio according to the sign of the
    exponent gap.
    """
    gap = h.b - tau.alpha * g.b
    if gap > 0:
        return RhoValue("infinite", None, True)
    if gap < 0:
        return RhoValue("zero", None, True)
    denom, exact = fraction_pow(g.a, tau.alpha.numerator, tau.alpha.denominator)
    return RhoValue("finite", h.a / denom, exact)


def le_tau(g: MonomialSeq, h: MonomialSeq, tau: Tau) -> bool:
    """The relation 'g below h for tau': liminf h/tau(g) > 0."""
    return rho_symbolic(g, h, tau).positive


def le_family(g: MonomialSeq, h: MonomialSeq, family: TauFamily) -> bool:
    """g below h for every transform in the family.

    For monomials both families decide the same way: the relation holds
    iff b_g <= b_h.  (With b_g = b_h the coefficients never matter,
    since a positive finite liminf suffices; with b_h < b_g some
    alpha < 1 with alpha * b_g > b_h witnesses failure.)
    """
    if not family_is_suitable(family):
        raise ValueError(f"unsupported transform family: {family}")
    if family is TauFamily.ID:
        return le_tau(g, h, ID_TAU)
    return h.b >= g.b


def transitivity_check(g0: MonomialSeq, g1: MonomialSeq, g2: MonomialSeq, family: TauFamily) -> bool:
    """Whether (g0 <= g1 and g1 <= g2) implies g0 <= g2 held on this triple.

    Vacuously true when a premise fails; the quasi-order property says
    this never returns False.
    """
    if le_family(g0, g1, family) and le_family(g1, g2, family):
        return le_family(g0, g2, family)
    return True


@dataclass(frozen=True)
class WindowValue:
    """Minimum of h(n)/tau(g(n)) over a finite window; argmin computed exactly."""

    value: Fraction
    exact: bool
    at: int  # index n achieving the minimum (first of ties)

    def classify(self) -> str:
        if self.value < EPS_CLASSIFY:
            return "approx_zero"
        if self.value > BIG_CLASSIFY:
            return "approx_infinite"
        return "moderate"


def _argmin_ratio(g_vals: Sequence[int], h_vals: Sequence[int], p: int, q: int,
                  n0: int, n1: int) -> int:
    """Index n in [n0, n1] minimising h(n)/g(n)^(p/q): cleared-root comparison, exact."""
    best = n0
    for n in range(n0 + 1, n1 + 1):
        hb, gb = h_vals[best - 1], g_vals[best - 1]
        hn, gn = h_vals[n - 1], g_vals[n - 1]
        if hn**q * gb**p < hb**q * gn**p:
            best = n
    return best


def rho_window(g_vals: Sequence[int], h_vals: Sequence[int], tau: Tau,
               n0: int, n1: int) -> WindowValue:
    """min over n in [n0, n1] of h(n)/tau(g(n)) -- the finite surrogate of the decay liminf.

    Sequences are 1-indexed (g_vals[0] is g(1)) and g must be strictly
    positive on the window.
    """
    if n0 > n1:
        raise ValueError(f"empty window [{n0}, {n1}]")
    if n0 < 1 or n1 > len(g_vals) or n1 > len(h_vals):
        raise ValueError("window outside the supplied sequences")
    p, q = tau.alpha.numerator, tau.alpha.denominator
    for n in range(n0, n1 + 1):
        if g_vals[n - 1] <= 0:
            raise ValueError(f"g({n}) <= 0; transforms need positive input")
    best = _argmin_ratio(g_vals, h_vals, p, q, n0, n1)
    denom, exact = fraction_pow(Fraction(g_vals[best - 1]), p, q)
    return WindowValue(Fraction(h_vals[best - 1]) / denom, exact, best)


def rho_id_tree(spec: BranchingSpec, tree: FiniteTree, upto: int) -> Fraction:
    """Windowed identity-transform decay of a pruned tree against the full tree.

    Equals the level density at `upto` because the density sequence of a
    pruned tree is nonincreasing; measure_estimate cross-checks it.
    """
    if tree.depth < upto:
        raise ValueError(f"tree depth {tree.depth} below requested window end {upto}")
    g = [full_tree_level_size(spec, n) for n in range(1, upto + 1)]
    h = [tree.level_size(n) for n in range(1, upto + 1)]
    return rho_window(g, h, ID_TAU, 1, upto).value


@dataclass(frozen=True)
class DecayDiagnosticRow:
    """One (subtree, alpha) cell: the windowed decay ratio and its flag."""

    subtree_index: int
    alpha: Fraction
    min_ratio: Fraction
    exact: bool
    at_level: int
    flagged: bool

    def to_json(self) -> dict:
        return {
            "subtree": self.subtree_index,
            "alpha": str(self.alpha),
            "min_ratio": str(self.min_ratio),
            "exact": self.exact,
            "at_level": self.at_level,
            "flagged": self.flagged,
        }


def decay_diagnostic(tree: FiniteTree, subtrees: Sequence[FiniteTree],
                     alphas: Sequence[Fraction], threshold: Fraction,
                     n0: int = 1) -> list[DecayDiagnosticRow]:
    """Finite-horizon indicator of decay-bound failure.

    For each subtree S and exponent alpha, takes the minimum over
    levels n in [n0, depth] of h_S(n) / h_T(n)^alpha and flags it when
    it drops below the threshold.  Flag comparisons are exact (roots
    cleared); only the reported ratio may be an interval midpoint.
    """
    threshold = Fraction(threshold)
    rows = []
    for idx, sub in enumerate(subtrees):
        if not is_subtree(sub, tree):
            raise ValueError(f"subtree #{idx} is not contained in the ambient tree")
        for alpha in alphas:
            tau = Tau(Fraction(alpha))
            p, q = tau.alpha.numerator, tau.alpha.denominator
            upper = tree.depth
            g = [tree.level_size(n) for n in range(1, upper + 1)]
            h = [sub.level_size(n) if n <= sub.depth else 0 for n in range(1, upper + 1)]
            best = _argmin_ratio(g, h, p, q, n0, upper)
            hb, gb = h[best - 1], g[best - 1]
            denom, exact = fraction_pow(Fraction(gb), p, q)
            ratio = Fraction(hb) / denom
            # h/g^(p/q) < thr  <=>  h^q < thr^q * g^p, decided exactly.
            flagged = Fraction(hb) ** q < threshold**q * Fraction(gb) ** p
            rows.append(DecayDiagnosticRow(idx, tau.alpha, ratio, exact, best, flagged))
    return rows
