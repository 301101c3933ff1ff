# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels on word-array bitsets.

Mirrors shadelab._kernels._pykern decision for decision (greedy-colouring
order, Tomita pivot with smallest-index ties, ascending candidate
iteration, lectic closure order, budget counting), so both backends
return identical values, witnesses, counts and explored counters.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy, memset

from ._common import KernelBudgetExceeded

BACKEND = "cython"

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int sl_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int sl_ctz(unsigned long long x) { return __builtin_ctzll(x); }
    #else
    static inline int sl_popcount(unsigned long long x) {
        int c = 0; while (x) { x &= x - 1; ++c; } return c;
    }
    static inline int sl_ctz(unsigned long long x) {
        int c = 0; while (!(x & 1ULL)) { x >>= 1; ++c; } return c;
    }
    #endif
    """
    int sl_popcount(uint64_t x) nogil
    int sl_ctz(uint64_t x) nogil


cdef inline int _words(int nbits) nogil:
    return ((nbits + 63) >> 6) if nbits > 0 else 1


cdef uint64_t* _alloc(size_t count) except NULL:
    cdef uint64_t* buf = <uint64_t*> calloc(count if count else 1, sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    return buf


cdef int* _alloc_int(size_t count) except NULL:
    cdef int* buf = <int*> calloc(count if count else 1, sizeof(int))
    if buf == NULL:
        raise MemoryError()
    return buf


cdef void _from_pyint(object mask, uint64_t* out, int W):
    cdef int w
    for w in range(W):
        out[w] = <uint64_t> ((mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)


cdef inline int _popcount_words(uint64_t* x, int W) nogil:
    cdef int w, total = 0
    for w in range(W):
        total += sl_popcount(x[w])
    return total


cdef inline bint _is_empty(uint64_t* x, int W) nogil:
    cdef int w
    for w in range(W):
        if x[w]:
            return False
    return True


cdef inline int _first_bit(uint64_t* x, int W) nogil:
    cdef int w
    for w in range(W):
        if x[w]:
            return 64 * w + sl_ctz(x[w])
    return -1


cdef inline void _clear_bit(uint64_t* x, int v) nogil:
    x[v >> 6] &= ~(1ULL << (v & 63))


cdef inline void _set_bit(uint64_t* x, int v) nogil:
    x[v >> 6] |= 1ULL << (v & 63)


cdef inline bint _test_bit(uint64_t* x, int v) nogil:
    return (x[v >> 6] >> (v & 63)) & 1ULL


cdef inline void _fill_universe(uint64_t* x, int nbits, int W) nogil:
    """Set bits 0..nbits-1."""
    cdef int w
    for w in range(W):
        x[w] = 0
    for w in range(nbits >> 6):
        x[w] = <uint64_t> 0xFFFFFFFFFFFFFFFF
    if nbits & 63:
        x[nbits >> 6] = (<uint64_t> 0xFFFFFFFFFFFFFFFF) >> (64 - (nbits & 63))


cdef bint _tuple_lex_less(uint64_t* a, uint64_t* b, int W) nogil:
    """Whether the ascending vertex tuple of a precedes that of b.

    Equivalent to tuple(bits(a)) < tuple(bits(b)): with d the smallest
    element where the sets differ, the d-holder is smaller unless the
    other set stops before d (a strict prefix precedes its extension).
    """
    cdef int w, d = -1
    cdef uint64_t diff
    for w in range(W):
        diff = a[w] ^ b[w]
        if diff:
            d = 64 * w + sl_ctz(diff)
            break
    if d < 0:
        return False
    cdef bint in_a = _test_bit(a, d)
    cdef uint64_t* other = b if in_a else a
    cdef bint other_has_later = False
    cdef uint64_t word
    w = d >> 6
    word = other[w] & ~((<uint64_t> 0xFFFFFFFFFFFFFFFF) >> (63 - (d & 63)))
    if word:
        other_has_later = True
    else:
        for w in range((d >> 6) + 1, W):
            if other[w]:
                other_has_later = True
                break
    if in_a:
        return other_has_later  # b continues past d => a smaller; else b is a prefix
    return not other_has_later  # a is a strict prefix of b


cdef list _bits_list(uint64_t* x, int W):
    cdef list out = []
    cdef int w, v
    cdef uint64_t word
    for w in range(W):
        word = x[w]
        while word:
            v = 64 * w + sl_ctz(word)
            out.append(v)
            word &= word - 1
    return out


# ------------------------------------------------------------- max clique


cdef struct CliqueCtx:
    int V
    int W
    uint64_t* adj        # V rows of W words
    uint64_t* p_bufs     # (V + 2) rows of W words: candidate set per depth
    int* order_bufs      # (V + 2) rows of V ints
    int* colour_bufs
    uint64_t* scratch    # 2 rows of W words, used only inside _colour_sort
    int best
    long long explored


cdef int _colour_sort(CliqueCtx* ctx, uint64_t* P, int* order, int* colours) nogil:
    """Greedy colouring identical to the pure backend; returns the count."""
    cdef uint64_t* uncoloured = ctx.scratch
    cdef uint64_t* avail = ctx.scratch + ctx.W
    cdef int W = ctx.W
    cdef int n = 0, colour = 0, v, w
    memcpy(uncoloured, P, W * sizeof(uint64_t))
    while not _is_empty(uncoloured, W):
        colour += 1
        memcpy(avail, uncoloured, W * sizeof(uint64_t))
        while True:
            v = _first_bit(avail, W)
            if v < 0:
                break
            for w in range(W):
                avail[w] &= ~ctx.adj[v * W + w]
            _clear_bit(avail, v)
            _clear_bit(uncoloured, v)
            order[n] = v
            colours[n] = colour
            n += 1
    return n


cdef void _expand(CliqueCtx* ctx, int depth) nogil:
    cdef int W = ctx.W
    cdef uint64_t* P = ctx.p_bufs + depth * W
    cdef uint64_t* child = ctx.p_bufs + (depth + 1) * W
    cdef int* order = ctx.order_bufs + depth * ctx.V
    cdef int* colours = ctx.colour_bufs + depth * ctx.V
    cdef int n, idx, v, w
    ctx.explored += 1
    n = _colour_sort(ctx, P, order, colours)
    for idx in range(n - 1, -1, -1):
        if depth + colours[idx] <= ctx.best:
            return
        v = order[idx]
        for w in range(W):
            child[w] = P[w] & ctx.adj[v * W + w]
        if not _is_empty(child, W):
            _expand(ctx, depth + 1)
        elif depth + 1 > ctx.best:
            ctx.best = depth + 1
        _clear_bit(P, v)


cdef bint _exists_clique(CliqueCtx* ctx, int depth, int need) nogil:
    """Candidate set for this call lives at p_bufs row `depth` (mutated)."""
    cdef int W = ctx.W
    cdef uint64_t* P = ctx.p_bufs + depth * W
    cdef uint64_t* child = ctx.p_bufs + (depth + 1) * W
    cdef int* order = ctx.order_bufs + depth * ctx.V
    cdef int* colours = ctx.colour_bufs + depth * ctx.V
    cdef int n, idx, v, w
    if need <= 0:
        return True
    ctx.explored += 1
    n = _colour_sort(ctx, P, order, colours)
    for idx in range(n - 1, -1, -1):
        if colours[idx] < need:
            return False
        v = order[idx]
        for w in range(W):
            child[w] = P[w] & ctx.adj[v * W + w]
        if _exists_clique(ctx, depth + 1, need - 1):
            return True
        _clear_bit(P, v)
    return False


def max_clique(adj):
    """Exact maximum clique: (size, lexicographically least witness, explored)."""
    cdef int V = len(adj)
    if V == 0:
        return 0, (), 0
    cdef int W = _words(V)
    cdef CliqueCtx ctx
    ctx.V = V
    ctx.W = W
    ctx.best = 0
    ctx.explored = 0
    ctx.adj = NULL
    ctx.p_bufs = NULL
    ctx.scratch = NULL
    ctx.order_bufs = NULL
    ctx.colour_bufs = NULL
    cdef int i, w, v, need
    cdef uint64_t* P0
    cdef list clique = []
    cdef bint found
    try:
        ctx.adj = _alloc(V * W)
        ctx.p_bufs = _alloc((V + 2) * W)
        ctx.scratch = _alloc(2 * W)
        ctx.order_bufs = _alloc_int((V + 2) * V)
        ctx.colour_bufs = _alloc_int((V + 2) * V)
        P0 = ctx.p_bufs
        for i in range(V):
            _from_pyint(adj[i], ctx.adj + i * W, W)
        _fill_universe(P0, V, W)
        _expand(&ctx, 0)
        # lex-least extraction against the known optimum; a failed vertex
        # can never join a later completion, so it is dropped outright
        _fill_universe(P0, V, W)
        need = ctx.best
        while need:
            found = False
            v = _first_bit(P0, W)
            while v >= 0:
                for w in range(W):
                    ctx.p_bufs[W + w] = P0[w] & ctx.adj[v * W + w]
                if _exists_clique(&ctx, 1, need - 1):
                    found = True
                    break
                _clear_bit(P0, v)
                v = _first_bit(P0, W)
            if not found:
                raise AssertionError("lex-least extraction lost the optimum")
            clique.append(v)
            for w in range(W):
                P0[w] &= ctx.adj[v * W + w]
            need -= 1
        return ctx.best, tuple(clique), ctx.explored
    finally:
        free(ctx.adj)
        free(ctx.p_bufs)
        free(ctx.scratch)
        free(ctx.order_bufs)
        free(ctx.colour_bufs)


# ------------------------------------------------- maximal clique objective


cdef struct BKCtx:
    int V
    int W          # graph words
    int WU         # weight-universe words
    uint64_t* adj
    uint64_t* weights      # V rows of WU words
    uint64_t* p_bufs       # (V + 2) rows: P per depth
    uint64_t* x_bufs       # (V + 2) rows: X per depth
    uint64_t* acc_bufs     # (V + 2) rows of WU words
    uint64_t* ext_bufs     # (V + 2) rows: pivot-filtered candidates per depth
    uint64_t* r_set        # current clique as a bitset (W words)
    uint64_t* best_set     # best clique seen (W words)
    long long node_budget
    long long explored
    long long n_cliques
    int best_val


cdef int _bk(BKCtx* ctx, int depth) except -1:
    cdef int W = ctx.W
    cdef int WU = ctx.WU
    cdef uint64_t* P = ctx.p_bufs + depth * W
    cdef uint64_t* X = ctx.x_bufs + depth * W
    cdef uint64_t* acc = ctx.acc_bufs + depth * WU
    cdef uint64_t* ext = ctx.ext_bufs + depth * W
    cdef uint64_t* childP = ctx.p_bufs + (depth + 1) * W
    cdef uint64_t* childX = ctx.x_bufs + (depth + 1) * W
    cdef uint64_t* childA = ctx.acc_bufs + (depth + 1) * WU
    cdef int w, u, v, d, pivot, pivot_deg, val
    cdef uint64_t word
    ctx.explored += 1
    if ctx.explored > ctx.node_budget:
        raise KernelBudgetExceeded(
            f"maximal-clique enumeration exceeded {ctx.node_budget} nodes")
    if _is_empty(P, W) and _is_empty(X, W):
        ctx.n_cliques += 1
        val = _popcount_words(acc, WU)
        if val > ctx.best_val or (
            val == ctx.best_val and _tuple_lex_less(ctx.r_set, ctx.best_set, W)
        ):
            ctx.best_val = val
            memcpy(ctx.best_set, ctx.r_set, W * sizeof(uint64_t))
        return 0
    # Tomita pivot: maximise |P & adj(u)| over P | X, ties to the smallest u
    pivot = -1
    pivot_deg = -1
    for w in range(W):
        word = P[w] | X[w]
        while word:
            u = 64 * w + sl_ctz(word)
            word &= word - 1
            d = 0
            for v in range(W):
                d += sl_popcount(P[v] & ctx.adj[u * W + v])
            if d > pivot_deg:
                pivot = u
                pivot_deg = d
    for w in range(W):
        ext[w] = P[w] & ~ctx.adj[pivot * W + w]
    while True:
        v = _first_bit(ext, W)
        if v < 0:
            break
        _clear_bit(ext, v)
        for w in range(W):
            childP[w] = P[w] & ctx.adj[v * W + w]
            childX[w] = X[w] & ctx.adj[v * W + w]
        for w in range(WU):
            childA[w] = acc[w] | ctx.weights[v * WU + w]
        _set_bit(ctx.r_set, v)
        _bk(ctx, depth + 1)
        _clear_bit(ctx.r_set, v)
        _clear_bit(P, v)
        _set_bit(X, v)
    return 0


def max_union_weight_maximal_cliques(adj, masks, node_budget):
    """Best popcount-of-union objective over all maximal cliques; same
    contract as the pure backend."""
    cdef int V = len(adj)
    cdef int W = _words(V)
    cdef int maxbits = 0, bits
    cdef int i, v
    for i in range(V):
        bits = int(masks[i]).bit_length()
        if bits > maxbits:
            maxbits = bits
    cdef int WU = _words(maxbits)
    cdef BKCtx ctx
    ctx.V = V
    ctx.W = W
    ctx.WU = WU
    ctx.node_budget = node_budget
    ctx.explored = 0
    ctx.n_cliques = 0
    ctx.best_val = -1
    ctx.adj = NULL
    ctx.weights = NULL
    ctx.p_bufs = NULL
    ctx.x_bufs = NULL
    ctx.acc_bufs = NULL
    ctx.ext_bufs = NULL
    ctx.r_set = NULL
    ctx.best_set = NULL
    cdef bint have_best = False
    try:
        ctx.adj = _alloc((V if V else 1) * W)
        ctx.weights = _alloc((V if V else 1) * WU)
        ctx.p_bufs = _alloc((V + 2) * W)
        ctx.x_bufs = _alloc((V + 2) * W)
        ctx.acc_bufs = _alloc((V + 2) * WU)
        ctx.ext_bufs = _alloc((V + 2) * W)
        ctx.r_set = _alloc(W)
        ctx.best_set = _alloc(W)
        for i in range(V):
            _from_pyint(adj[i], ctx.adj + i * W, W)
            _from_pyint(masks[i], ctx.weights + i * WU, WU)
        _fill_universe(ctx.p_bufs, V, W)
        # seed the tie-break state so the first maximal clique always wins
        ctx.best_val = -1
        _fill_universe(ctx.best_set, V, W)
        _bk(&ctx, 0)
        return (ctx.best_val, tuple(_bits_list(ctx.best_set, W)),
                ctx.n_cliques, ctx.explored)
    finally:
        free(ctx.adj)
        free(ctx.weights)
        free(ctx.p_bufs)
        free(ctx.x_bufs)
        free(ctx.acc_bufs)
        free(ctx.ext_bufs)
        free(ctx.r_set)
        free(ctx.best_set)


# --------------------------------------------------------------- closures


cdef struct NCCtx:
    int NK
    int NL
    int WK
    int WL
    int WSK
    int WSL
    uint64_t* rowm       # NK rows of WL words
    uint64_t* colm       # NL rows of WK words
    uint64_t* skm        # NK rows of WSK words
    uint64_t* slm        # NL rows of WSL words
    uint64_t* uacc
    uint64_t* wacc
    long long op_budget
    long long ops


cdef int _nc_close(NCCtx* ctx, uint64_t* src, uint64_t* outA, uint64_t* outD) except -1:
    """dual over the rows of src, then re-intersection of the columns."""
    cdef int w, v, i
    cdef uint64_t word
    ctx.ops += 1
    if ctx.ops > ctx.op_budget:
        raise KernelBudgetExceeded(
            f"closure enumeration exceeded {ctx.op_budget} evaluations")
    _fill_universe(outD, ctx.NL, ctx.WL)
    for w in range(ctx.WK):
        word = src[w]
        while word:
            v = 64 * w + sl_ctz(word)
            word &= word - 1
            for i in range(ctx.WL):
                outD[i] &= ctx.rowm[v * ctx.WL + i]
    _fill_universe(outA, ctx.NK, ctx.WK)
    for w in range(ctx.WL):
        word = outD[w]
        while word:
            v = 64 * w + sl_ctz(word)
            word &= word - 1
            for i in range(ctx.WK):
                outA[i] &= ctx.colm[v * ctx.WK + i]
    return 0


cdef int _nc_score(NCCtx* ctx, uint64_t* a, uint64_t* d) nogil:
    cdef int w, v, i
    cdef uint64_t word
    for w in range(ctx.WSK):
        ctx.uacc[w] = 0
    for w in range(ctx.WSL):
        ctx.wacc[w] = 0
    for w in range(ctx.WK):
        word = a[w]
        while word:
            v = 64 * w + sl_ctz(word)
            word &= word - 1
            for i in range(ctx.WSK):
                ctx.uacc[i] |= ctx.skm[v * ctx.WSK + i]
    for w in range(ctx.WL):
        word = d[w]
        while word:
            v = 64 * w + sl_ctz(word)
            word &= word - 1
            for i in range(ctx.WSL):
                ctx.wacc[i] |= ctx.slm[v * ctx.WSL + i]
    return _popcount_words(ctx.uacc, ctx.WSK) * _popcount_words(ctx.wacc, ctx.WSL)


def next_closure_max_product(n_attr, rows, cols, n_obj, attr_weight_masks,
                             obj_weight_masks, op_budget):
    """Lectic enumeration of closed sets maximising the product objective;
    same contract as the pure backend."""
    cdef NCCtx ctx
    ctx.NK = n_attr
    ctx.NL = n_obj
    ctx.WK = _words(ctx.NK)
    ctx.WL = _words(ctx.NL)
    ctx.op_budget = op_budget
    ctx.ops = 0
    cdef int maxbits = 0, bits
    cdef int i, j, w, v
    for i in range(ctx.NK):
        bits = int(attr_weight_masks[i]).bit_length()
        if bits > maxbits:
            maxbits = bits
    ctx.WSK = _words(maxbits)
    maxbits = 0
    for j in range(ctx.NL):
        bits = int(obj_weight_masks[j]).bit_length()
        if bits > maxbits:
            maxbits = bits
    ctx.WSL = _words(maxbits)
    ctx.rowm = NULL
    ctx.colm = NULL
    ctx.skm = NULL
    ctx.slm = NULL
    ctx.uacc = NULL
    ctx.wacc = NULL
    cdef uint64_t* A = NULL
    cdef uint64_t* dA = NULL
    cdef uint64_t* B = NULL
    cdef uint64_t* dB = NULL
    cdef uint64_t* cand = NULL
    cdef uint64_t* bestA = NULL
    cdef uint64_t* bestD = NULL
    cdef uint64_t* full_k = NULL
    cdef long long n_closed
    cdef int best_val, val
    cdef bint advanced, ok, better
    try:
        ctx.rowm = _alloc((ctx.NK if ctx.NK else 1) * ctx.WL)
        ctx.colm = _alloc((ctx.NL if ctx.NL else 1) * ctx.WK)
        ctx.skm = _alloc((ctx.NK if ctx.NK else 1) * ctx.WSK)
        ctx.slm = _alloc((ctx.NL if ctx.NL else 1) * ctx.WSL)
        ctx.uacc = _alloc(ctx.WSK)
        ctx.wacc = _alloc(ctx.WSL)
        A = _alloc(ctx.WK)
        dA = _alloc(ctx.WL)
        B = _alloc(ctx.WK)
        dB = _alloc(ctx.WL)
        cand = _alloc(ctx.WK)
        bestA = _alloc(ctx.WK)
        bestD = _alloc(ctx.WL)
        full_k = _alloc(ctx.WK)
        for i in range(ctx.NK):
            _from_pyint(rows[i], ctx.rowm + i * ctx.WL, ctx.WL)
            _from_pyint(attr_weight_masks[i], ctx.skm + i * ctx.WSK, ctx.WSK)
        for j in range(ctx.NL):
            _from_pyint(cols[j], ctx.colm + j * ctx.WK, ctx.WK)
            _from_pyint(obj_weight_masks[j], ctx.slm + j * ctx.WSL, ctx.WSL)
        _fill_universe(full_k, ctx.NK, ctx.WK)
        memset(cand, 0, ctx.WK * sizeof(uint64_t))
        _nc_close(&ctx, cand, A, dA)
        best_val = _nc_score(&ctx, A, dA)
        memcpy(bestA, A, ctx.WK * sizeof(uint64_t))
        memcpy(bestD, dA, ctx.WL * sizeof(uint64_t))
        n_closed = 1
        while True:
            ok = True
            for w in range(ctx.WK):
                if A[w] != full_k[w]:
                    ok = False
                    break
            if ok:  # reached the lectically last closed set
                break
            advanced = False
            for v in range(ctx.NK - 1, -1, -1):
                if _test_bit(A, v):
                    continue
                for w in range(ctx.WK):
                    cand[w] = A[w]
                for i in range(v, ctx.NK):
                    _clear_bit(cand, i)
                _set_bit(cand, v)
                _nc_close(&ctx, cand, B, dB)
                ok = True
                for i in range(v):
                    if _test_bit(B, i) != _test_bit(A, i):
                        ok = False
                        break
                if ok:
                    memcpy(A, B, ctx.WK * sizeof(uint64_t))
                    memcpy(dA, dB, ctx.WL * sizeof(uint64_t))
                    advanced = True
                    break
            if not advanced:
                break
            n_closed += 1
            val = _nc_score(&ctx, A, dA)
            better = val > best_val
            if not better and val == best_val:
                if _tuple_lex_less(A, bestA, ctx.WK):
                    better = True
                elif not _tuple_lex_less(bestA, A, ctx.WK):
                    # equal first components: compare the duals
                    better = _tuple_lex_less(dA, bestD, ctx.WL)
            if better:
                best_val = val
                memcpy(bestA, A, ctx.WK * sizeof(uint64_t))
                memcpy(bestD, dA, ctx.WL * sizeof(uint64_t))
        return (best_val, tuple(_bits_list(bestA, ctx.WK)),
                tuple(_bits_list(bestD, ctx.WL)), n_closed, ctx.ops)
    finally:
        free(ctx.rowm)
        free(ctx.colm)
        free(ctx.skm)
        free(ctx.slm)
        free(ctx.uacc)
        free(ctx.wacc)
        free(A)
        free(dA)
        free(B)
        free(dB)
        free(cand)
        free(bestA)
        free(bestD)
        free(full_k)
