"""Pure-Python search kernels on big-int bitsets.

Reference implementation of the three hot loops behind the oracles:

* maximum clique (branch and bound with greedy-colouring bounds, plus a
  second pass extracting the lexicographically least maximum clique);
* maximal-clique enumeration (Bron-Kerbosch with pivoting) maximising a
  popcount-of-union objective;
* NextClosure enumeration of the closed sets of a Galois connection,
  maximising a product objective.

The compiled backend mirrors every traversal decision made here (pivot
choice, iteration order, tie-breaks, budget counting), so both backends
return byte-identical results including the explored counters.
"""

from __future__ import annotations

from typing import Sequence

from ._common import KernelBudgetExceeded

BACKEND = "python"


def _bits_ascending(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _colour_order(adj: Sequence[int], P: int) -> tuple[list[int], list[int]]:
    """Greedy colouring of the candidate set, vertices grouped by colour.

    Returns the vertices ordered colour class by colour class together
    with their (1-based) colour numbers; the colour of a vertex bounds
    the clique size reachable through it.
    """
    order: list[int] = []
    colours: list[int] = []
    uncoloured = P
    colour = 0
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~(adj[v] | (1 << v))
            uncoloured &= ~(1 << v)
            order.append(v)
            colours.append(colour)
    return order, colours


def max_clique(adj: Sequence[int]) -> tuple[int, tuple[int, ...], int]:
    """Exact maximum clique: (size, lexicographically least witness, explored nodes).

    `adj[v]` is the neighbour bitmask of vertex v (no self-loop bit).
    Among all maximum cliques the witness is the one whose ascending
    vertex tuple is lexicographically least.
    """
    V = len(adj)
    if V == 0:
        return 0, (), 0
    full = (1 << V) - 1
    best = 0
    explored = 0

    def expand(depth: int, P: int) -> None:
        nonlocal best, explored
        explored += 1
        order, colours = _colour_order(adj, P)
        for idx in range(len(order) - 1, -1, -1):
            if depth + colours[idx] <= best:
                return
            v = order[idx]
            P2 = P & adj[v]
            if P2:
                expand(depth + 1, P2)
            elif depth + 1 > best:
                best = depth + 1
            P &= ~(1 << v)

    expand(0, full)

    def exists_clique(P: int, need: int) -> bool:
        nonlocal explored
        if need <= 0:
            return True
        explored += 1
        order, colours = _colour_order(adj, P)
        for idx in range(len(order) - 1, -1, -1):
            if colours[idx] < need:
                return False
            v = order[idx]
            if exists_clique(P & adj[v], need - 1):
                return True
            P &= ~(1 << v)
        return False

    # Greedy lex-least extraction: repeatedly fix the smallest vertex that
    # still allows a clique of the optimal size.  The picked sequence is
    # automatically ascending (a smaller usable vertex later would have
    # been usable earlier).  A vertex that fails here can never join a
    # later completion either (the chosen prefix would extend its clique
    # back to the full size), so it is dropped from the candidate set.
    clique: list[int] = []
    P = full
    need = best
    while need:
        for v in _bits_ascending(P):
            if exists_clique(P & adj[v], need - 1):
                clique.append(v)
                P &= adj[v]
                need -= 1
                break
            P &= ~(1 << v)
        else:  # pragma: no cover - the optimum guarantees a choice
            raise AssertionError("lex-least extraction lost the optimum")
    return best, tuple(clique), explored


def max_union_weight_maximal_cliques(
    adj: Sequence[int], masks: Sequence[int], node_budget: int
) -> tuple[int, tuple[int, ...], int, int]:
    """Maximise popcount(union of masks) over all maximal cliques.

    Bron-Kerbosch with the Tomita pivot (a vertex of P | X maximising
    |P & adj(u)|, ties to the smallest index).  Returns (best value,
    lexicographically least maximal clique attaining it, number of
    maximal cliques seen, recursion nodes).  Raises KernelBudgetExceeded
    past `node_budget` recursion nodes.
    """
    V = len(adj)
    full = (1 << V) - 1
    best_val = -1
    best_clique: tuple[int, ...] | None = None
    n_cliques = 0
    explored = 0

    def bk(R: int, acc: int, P: int, X: int) -> None:
        nonlocal best_val, best_clique, n_cliques, explored
        explored += 1
        if explored > node_budget:
            raise KernelBudgetExceeded(
                f"maximal-clique enumeration exceeded {node_budget} nodes"
            )
        if P == 0 and X == 0:
            n_cliques += 1
            val = acc.bit_count()
            key = tuple(_bits_ascending(R))
            if val > best_val or (val == best_val and key < best_clique):
                best_val, best_clique = val, key
            return
        pivot, pivot_deg = -1, -1
        for u in _bits_ascending(P | X):
            d = (P & adj[u]).bit_count()
            if d > pivot_deg:
                pivot, pivot_deg = u, d
        ext = P & ~adj[pivot]
        for v in _bits_ascending(ext):
            vb = 1 << v
            bk(R | vb, acc | masks[v], P & adj[v], X & adj[v])
            P &= ~vb
            X |= vb

    bk(0, 0, full, 0)
    assert best_clique is not None
    return best_val, best_clique, n_cliques, explored


def next_closure_max_product(
    n_attr: int,
    rows: Sequence[int],
    cols: Sequence[int],
    n_obj: int,
    attr_weight_masks: Sequence[int],
    obj_weight_masks: Sequence[int],
    op_budget: int,
) -> tuple[int, tuple[int, ...], tuple[int, ...], int, int]:
    """Maximise popcount(union over A) * popcount(union over dual(A)) over closed A.

    The Galois connection is given by `rows` (attribute -> object mask)
    and `cols` (object -> attribute mask); dual(A) intersects the rows
    of A, and the closure re-intersects the columns of the dual.  Closed
    sets are enumerated in lectic order by NextClosure.  Returns
    (best value, best A, its dual, number of closed sets, closure
    evaluations); ties go to the lexicographically least (A, dual) pair.
    """
    FULL_K = (1 << n_attr) - 1
    FULL_L = (1 << n_obj) - 1
    ops = 0

    def close(A: int) -> tuple[int, int]:
        nonlocal ops
        ops += 1
        if ops > op_budget:
            raise KernelBudgetExceeded(f"closure enumeration exceeded {op_budget} evaluations")
        d = FULL_L
        m = A
        while m:
            low = m & -m
            d &= rows[low.bit_length() - 1]
            m ^= low
        c = FULL_K
        m = d
        while m:
            low = m & -m
            c &= cols[low.bit_length() - 1]
            m ^= low
        return c, d

    def score(A: int, d: int) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]]]:
        u = 0
        for i in _bits_ascending(A):
            u |= attr_weight_masks[i]
        w = 0
        for j in _bits_ascending(d):
            w |= obj_weight_masks[j]
        return u.bit_count() * w.bit_count(), (tuple(_bits_ascending(A)), tuple(_bits_ascending(d)))

    A, dA = close(0)
    best_val, best_pair = score(A, dA)
    n_closed = 1
    while A != FULL_K:
        nxt = None
        for i in range(n_attr - 1, -1, -1):
            if (A >> i) & 1:
                continue
            low_mask = (1 << i) - 1
            B, dB = close((A & low_mask) | (1 << i))
            if (B & low_mask) == (A & low_mask):
                nxt = (B, dB)
                break
        if nxt is None:  # pragma: no cover - the full set is always closed
            break
        A, dA = nxt
        n_closed += 1
        val, pair = score(A, dA)
        if val > best_val or (val == best_val and pair < best_pair):
            best_val, best_pair = val, pair
    return best_val, best_pair[0], best_pair[1], n_closed, ops
