"""Exact brute-force maximisers for the intersecting-family extrema.

These are the ground truth the closed forms and conjectures are checked
against.  Two search routes, both exploiting monotonicity:

* clique route -- a t-intersecting family of k-sets is a clique in the
  graph on all k-subsets with edges at intersection >= t.  The size
  maximum M is a maximum clique; the shade maximum M0 is attained at a
  maximal clique (shades only grow with the family), so Bron-Kerbosch
  enumeration of maximal cliques suffices.

* closure route -- for the cross maxima N, N0, N1, the map sending A to
  dual(A) = {F : |F & E| >= t for all E in A} is a Galois connection,
  and any cross-t-intersecting pair improves to the closed pair
  (dual(dual(A)), dual(A)) without shrinking either factor.  NextClosure
  enumerates all closed sets.

Size caps and search budgets are configuration with safe defaults;
exceeding them raises InfeasibleSizeError, never a silent approximation.
Results are deterministic: ties are broken toward the lexicographically
least witness among the candidates each route enumerates, independent of
backend and scheduling.  Completed results can be cached in an
append-only JSONL file and are revalidated whenever they are read back.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Iterator

from . import _kernels
from ._kernels import KernelBudgetExceeded
from .extremal import conjectured_m0
from .setfam import (
    MAX_GROUND_SET,
    Family,
    is_cross_t_intersecting,
    is_t_intersecting,
    k_subset_masks,
    m_shade,
    mask_m_shade,
)

logger = logging.getLogger(__name__)

CACHE_VERSION = 1


class InfeasibleSizeError(RuntimeError):
    """The instance exceeds a size cap or a search budget."""


class WitnessValidationError(RuntimeError):
    """A stored witness failed revalidation against the set-family kernel."""


@dataclass(frozen=True)
class OracleLimits:
    """Caps and budgets for the exact searches.

    The universe caps bound the vertex/attribute counts; the budgets
    bound search effort in backend-independent units (recursion nodes,
    closure evaluations), so feasibility verdicts do not depend on the
    kernel backend in use.
    """

    clique_universe_cap: int = 200
    closure_universe_cap: int = 30
    clique_node_budget: int = 100_000_000
    bk_node_budget: int = 20_000_000
    closure_op_budget: int = 50_000_000


DEFAULT_LIMITS = OracleLimits()


@dataclass(frozen=True)
class OracleResult:
    """An exact maximum with its witness and search statistics.

    The witness always re-evaluates to `value` under the set-family
    predicates; `explored` counts search nodes (0 for a cache hit).
    """

    value: int
    witness: Family | tuple[Family, Family]
    explored: int
    elapsed: float
    cache_key: str

    def witness_json(self) -> object:
        if isinstance(self.witness, Family):
            return self.witness.to_json()
        return [self.witness[0].to_json(), self.witness[1].to_json()]


def _parse_key(key: str) -> tuple[str, dict[str, int]]:
    kind, _, rest = key.partition(":")
    params = {}
    for piece in rest.split(","):
        name, _, val = piece.partition("=")
        params[name] = int(val)
    return kind, params


def _witness_from_json(obj: object) -> Family | tuple[Family, Family]:
    if isinstance(obj, list):
        return Family.from_json(obj[0]), Family.from_json(obj[1])
    return Family.from_json(obj)


def revalidate(key: str, value: int, witness: Family | tuple[Family, Family]) -> None:
    """Check that a (value, witness) pair reproduces the claimed maximum's
    objective for the parameters encoded in the key; raise if not."""
    kind, p = _parse_key(key)
    try:
        if kind == "m":
            fam = witness
            ok = (
                isinstance(fam, Family)
                and fam.n == p["n"] and fam.k == p["k"]
                and is_t_intersecting(fam, p["t"]) and len(fam) == value
            )
        elif kind == "m0":
            fam = witness
            ok = (
                isinstance(fam, Family)
                and fam.n == p["n"] and fam.k == p["k"]
                and is_t_intersecting(fam, p["t"])
                and len(m_shade(fam, p["m"])) == value
            )
        elif kind == "n":
            a, b = witness
            ok = (
                a.n == p["n"] and b.n == p["n"] and a.k == p["k"] and b.k == p["l"]
                and is_cross_t_intersecting(a, b, p["t"])
                and len(a) * len(b) == value
            )
        elif kind == "n0":
            a, b = witness
            ok = (
                a.n == p["n"] and b.n == p["n"] and a.k == p["k"] and b.k == p["l"]
                and is_cross_t_intersecting(a, b, p["t"])
                and len(m_shade(a, p["mk"])) * len(m_shade(b, p["ml"])) == value
            )
        else:
            raise WitnessValidationError(f"unknown oracle kind in key {key!r}")
    except (ValueError, TypeError) as exc:
        raise WitnessValidationError(f"{key}: malformed witness ({exc})") from exc
    if not ok:
        raise WitnessValidationError(f"{key}: witness does not reproduce value {value}")


class OracleCache:
    """Append-only JSONL store of oracle results, revalidated on read.

    One JSON object per line: {key, value, witness, version, timestamp}.
    Corrupt lines are skipped with a warning; the last record for a key
    wins.  Access is serialized per process.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, dict] | None = None

    def _load(self) -> dict[str, dict]:
        if self._records is None:
            records: dict[str, dict] = {}
            if self.path.exists():
                with self.path.open() as fh:
                    for lineno, line in enumerate(fh, start=1):
                        line = line.strip()
                        if not line:
                            continue
                        try:
                            rec = json.loads(line)
                            records[rec["key"]] = rec
                        except (json.JSONDecodeError, KeyError, TypeError):
                            logger.warning("%s:%d: skipping corrupt cache line", self.path, lineno)
            self._records = records
        return self._records

    def get(self, key: str) -> OracleResult | None:
        """The cached result for a key, or None when absent or invalid."""
        with self._lock:
            rec = self._load().get(key)
        if rec is None:
            return None
        try:
            witness = _witness_from_json(rec["witness"])
            revalidate(key, rec["value"], witness)
        except (WitnessValidationError, ValueError, KeyError, TypeError) as exc:
            logger.warning("cache entry %s failed revalidation (%s); recomputing", key, exc)
            return None
        return OracleResult(rec["value"], witness, 0, 0.0, key)

    def put(self, result: OracleResult) -> None:
        rec = {
            "key": result.cache_key,
            "value": result.value,
            "witness": result.witness_json(),
            "version": CACHE_VERSION,
            "timestamp": time.time(),
        }
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(json.dumps(rec) + "\n")
            self._load()[result.cache_key] = rec

    def verify(self) -> list[tuple[str, str]]:
        """Revalidate every stored witness; returns (key, error) failures."""
        failures = []
        with self._lock:
            records = dict(self._load())
        for key, rec in sorted(records.items()):
            try:
                revalidate(key, rec["value"], _witness_from_json(rec["witness"]))
            except (WitnessValidationError, ValueError, KeyError, TypeError) as exc:
                failures.append((key, str(exc)))
        return failures

    def clear(self) -> None:
        with self._lock:
            if self.path.exists():
                self.path.unlink()
            self._records = {}

    def __len__(self) -> int:
        with self._lock:
            return len(self._load())


def _validate_common(n: int, k: int, t: int) -> None:
    if n > MAX_GROUND_SET:
        raise InfeasibleSizeError(f"ground set {n} exceeds the cap {MAX_GROUND_SET}")
    if not 1 <= t <= k <= n:
        raise ValueError(f"need 1 <= t <= k <= n, got t={t}, k={k}, n={n}")


def _intersection_adjacency(verts: tuple[int, ...], t: int) -> list[int]:
    adj = [0] * len(verts)
    for i, e in enumerate(verts):
        for j in range(i + 1, len(verts)):
            if (e & verts[j]).bit_count() >= t:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _shade_weight_masks(verts: tuple[int, ...], n: int, m: int) -> list[int]:
    """Per-vertex bitmask of its m-shade inside the canonical m-universe."""
    index = {mask: i for i, mask in enumerate(k_subset_masks(n, m))}
    weights = []
    for v in verts:
        acc = 0
        for sup in mask_m_shade(v, n, m):
            acc |= 1 << index[sup]
        weights.append(acc)
    return weights


def oracle_max_intersecting(n: int, k: int, t: int, *, limits: OracleLimits | None = None,
                            cache: OracleCache | None = None) -> OracleResult:
    """Exact M(n, k, t) with a witness family: maximum clique by branch and
    bound with greedy-colouring upper bounds."""
    limits = limits or DEFAULT_LIMITS
    _validate_common(n, k, t)
    key = f"m:n={n},k={k},t={t}"
    if cache is not None and (hit := cache.get(key)) is not None:
        return hit
    verts = k_subset_masks(n, k)
    if len(verts) > limits.clique_universe_cap:
        raise InfeasibleSizeError(
            f"C({n},{k}) = {len(verts)} exceeds the clique-route cap {limits.clique_universe_cap}"
        )
    start = time.perf_counter()
    adj = _intersection_adjacency(verts, t)
    omega, clique, explored = _kernels.max_clique(adj)
    witness = Family.from_masks(n, k, (verts[i] for i in clique))
    result = OracleResult(omega, witness, explored, time.perf_counter() - start, key)
    revalidate(key, result.value, result.witness)
    if cache is not None:
        cache.put(result)
    return result


def oracle_m0(n: int, m: int, k: int, t: int, *, limits: OracleLimits | None = None,
              cache: OracleCache | None = None) -> OracleResult:
    """Exact M0(n, m, k, t) with a witness family.

    Enumerates maximal t-intersecting families (Bron-Kerbosch with
    pivoting) and takes the best m-shade; valid because the shade is
    monotone in the family, so some maximal clique attains the optimum.
    The witness is the lexicographically least optimal family among the
    maximal ones (at m = k the shade is the identity and the maximum
    clique route answers directly).
    """
    limits = limits or DEFAULT_LIMITS
    _validate_common(n, k, t)
    if not k <= m <= n:
        raise ValueError(f"need k <= m <= n, got k={k}, m={m}, n={n}")
    key = f"m0:n={n},m={m},k={k},t={t}"
    if cache is not None and (hit := cache.get(key)) is not None:
        return hit
    if m == k:
        base = oracle_max_intersecting(n, k, t, limits=limits)
        result = OracleResult(base.value, base.witness, base.explored, base.elapsed, key)
    else:
        verts = k_subset_masks(n, k)
        if len(verts) > limits.clique_universe_cap:
            raise InfeasibleSizeError(
                f"C({n},{k}) = {len(verts)} exceeds the clique-route cap "
                f"{limits.clique_universe_cap}"
            )
        start = time.perf_counter()
        adj = _intersection_adjacency(verts, t)
        weights = _shade_weight_masks(verts, n, m)
        try:
            value, clique, _, explored = _kernels.max_union_weight_maximal_cliques(
                adj, weights, limits.bk_node_budget
            )
        except KernelBudgetExceeded as exc:
            raise InfeasibleSizeError(str(exc)) from exc
        witness = Family.from_masks(n, k, (verts[i] for i in clique))
        result = OracleResult(value, witness, explored, time.perf_counter() - start, key)
    revalidate(key, result.value, result.witness)
    if cache is not None:
        cache.put(result)
    return result


def _closure_oracle(key: str, n: int, m_k: int, m_l: int, k: int, l: int, t: int,
                    limits: OracleLimits, cache: OracleCache | None) -> OracleResult:
    if cache is not None and (hit := cache.get(key)) is not None:
        return hit
    sizes = (comb(n, k), comb(n, l))
    swapped = False
    if sizes[0] > limits.closure_universe_cap:
        if sizes[1] > limits.closure_universe_cap:
            raise InfeasibleSizeError(
                f"min(C({n},{k}), C({n},{l})) = {min(sizes)} exceeds the "
                f"closure-route cap {limits.closure_universe_cap}"
            )
        # enumerate on the smaller side; the Galois connection is symmetric
        k, l = l, k
        m_k, m_l = m_l, m_k
        swapped = True
    start = time.perf_counter()
    attrs = k_subset_masks(n, k)
    objs = k_subset_masks(n, l)
    rows = [0] * len(attrs)
    cols = [0] * len(objs)
    for i, e in enumerate(attrs):
        for j, f in enumerate(objs):
            if (e & f).bit_count() >= t:
                rows[i] |= 1 << j
                cols[j] |= 1 << i
    sk = [1 << i for i in range(len(attrs))] if m_k == k else _shade_weight_masks(attrs, n, m_k)
    sl = [1 << j for j in range(len(objs))] if m_l == l else _shade_weight_masks(objs, n, m_l)
    try:
        value, a_idx, b_idx, _, ops = _kernels.next_closure_max_product(
            len(attrs), rows, cols, len(objs), sk, sl, limits.closure_op_budget
        )
    except KernelBudgetExceeded as exc:
        raise InfeasibleSizeError(str(exc)) from exc
    fam_a = Family.from_masks(n, k, (attrs[i] for i in a_idx))
    fam_b = Family.from_masks(n, l, (objs[j] for j in b_idx))
    witness = (fam_b, fam_a) if swapped else (fam_a, fam_b)
    result = OracleResult(value, witness, ops, time.perf_counter() - start, key)
    revalidate(key, result.value, result.witness)
    if cache is not None:
        cache.put(result)
    return result


def oracle_cross(n: int, k: int, l: int, t: int, *, limits: OracleLimits | None = None,
                 cache: OracleCache | None = None) -> OracleResult:
    """Exact N(n, k, l, t) with a witness pair, by closed-pair enumeration.

    The optimum is attained at a pair (A, dual(A)) with A closed under
    dual of dual, so NextClosure over the smaller side is complete.
    """
    limits = limits or DEFAULT_LIMITS
    _validate_common(n, max(k, l), t)
    if t > min(k, l):
        raise ValueError(f"need t <= min(k, l), got t={t}, k={k}, l={l}")
    key = f"n:n={n},k={k},l={l},t={t}"
    return _closure_oracle(key, n, k, l, k, l, t, limits, cache)


def oracle_n0(n: int, m_k: int, m_l: int, k: int, l: int, t: int, *,
              limits: OracleLimits | None = None,
              cache: OracleCache | None = None) -> OracleResult:
    """Exact N0(n, m_k, m_l, k, l, t) with a witness pair.

    Same closed-pair enumeration as the plain cross maximum; both shade
    factors are monotone in their family and dual(A) is the unique
    maximal partner of A, so closed pairs again attain the optimum.
    """
    limits = limits or DEFAULT_LIMITS
    _validate_common(n, max(k, l), t)
    if t > min(k, l):
        raise ValueError(f"need t <= min(k, l), got t={t}, k={k}, l={l}")
    if not (k <= m_k <= n and l <= m_l <= n):
        raise ValueError(
            f"need k <= m_k <= n and l <= m_l <= n, got m_k={m_k}, m_l={m_l}"
        )
    key = f"n0:n={n},mk={m_k},ml={m_l},k={k},l={l},t={t}"
    return _closure_oracle(key, n, m_k, m_l, k, l, t, limits, cache)


def oracle_n1(n: int, m: int, k: int, t: int, *, limits: OracleLimits | None = None,
              cache: OracleCache | None = None) -> OracleResult:
    """N1(n, m, k, t) = N0(n, m, m, k, k, t) (pure delegation)."""
    return oracle_n0(n, m, m, k, k, t, limits=limits, cache=cache)


@dataclass(frozen=True)
class ConjectureCell:
    """One grid cell of the shade-maximum conjecture scan."""

    n: int
    m: int
    k: int
    t: int
    conjectured: int
    oracle_value: int | None
    verdict: str  # "match" | "conjecture_low" | "conjecture_not_tight" | "skipped"
    reason: str | None = None
    witness: Family | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n, "m": self.m, "k": self.k, "t": self.t,
            "conjectured": self.conjectured,
            "oracle": self.oracle_value,
            "verdict": self.verdict,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


CONJECTURE_CSV_HEADER = ["n", "m", "k", "t", "conjectured", "oracle", "verdict", "reason"]


def conjecture_cell_csv_row(cell: ConjectureCell) -> list:
    return [cell.n, cell.m, cell.k, cell.t, cell.conjectured,
            "" if cell.oracle_value is None else cell.oracle_value,
            cell.verdict, cell.reason or ""]


def m0_grid(n_max: int) -> Iterator[tuple[int, int, int, int]]:
    """All shade-conjecture cells (n, m, k, t) with 1 <= t <= k <= m <= n <= n_max."""
    for n in range(1, n_max + 1):
        for m in range(1, n + 1):
            for k in range(1, m + 1):
                for t in range(1, k + 1):
                    yield n, m, k, t


def conjecture_check_m0(grid: Iterable[tuple[int, int, int, int]], *,
                        limits: OracleLimits | None = None,
                        cache: OracleCache | None = None) -> list[ConjectureCell]:
    """Compare the oracle's M0 against the conjectured closed form per cell.

    An oracle value above the conjectured one is a counterexample record
    (verdict "conjecture_low"); a value below it would mean this
    implementation is broken, since the candidate families are feasible
    witnesses (verdict "conjecture_not_tight").  Mismatches are reported,
    never raised; infeasible cells are skipped with their reason.
    """
    cells = []
    for n, m, k, t in grid:
        conj = conjectured_m0(n, m, k, t)
        try:
            res = oracle_m0(n, m, k, t, limits=limits, cache=cache)
        except InfeasibleSizeError as exc:
            cells.append(ConjectureCell(n, m, k, t, conj, None, "skipped", str(exc)))
            continue
        if res.value == conj:
            verdict = "match"
        elif res.value > conj:
            verdict = "conjecture_low"
        else:
            verdict = "conjecture_not_tight"
        cells.append(ConjectureCell(n, m, k, t, conj, res.value, verdict, None, res.witness))
    return cells
