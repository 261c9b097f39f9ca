"""Compiled kernels behind :mod:`greedycut.engine`.

State is a namedtuple of flat arrays, mutated in place. Cluster ids run
from 0 (original vertices) upward; a merge always allocates the next id, so
every unordered pair enters the candidate heap at most once and an entry is
live exactly while both endpoints are alive. The heap therefore drops dead
entries lazily when they surface at the top.

Neighbor maps are segments of one shared pool. A segment may hold entries
for dead clusters; they are skipped on read and squeezed out when the
segment fills up or the pool is garbage-collected.
"""

from collections import namedtuple

import numpy as np
from numba import njit

# slots of the ``ints`` array
HSIZE = 0
POOL_TOP = 1
NEXT_ID = 2
ACTIVE = 3
QOPS = 4
INSERTS = 5
DELETES = 6
EXTRACTS = 7
K1_MAX = 8
GC_RUNS = 9
LIVE = 10
COMPACTIONS = 11
N_INTS = 12

# slots of the ``floats`` array
OBJ = 0
COMP = 1
MIN_DELTA = 2
SIGN = 3
N_FLOATS = 4

Core = namedtuple(
    "Core",
    [
        "l_self",
        "d_mass",
        "alive",
        "head",
        "tail",
        "nxt",
        "size",
        "nb_start",
        "nb_len",
        "nb_cap",
        "nb_live",
        "pool_id",
        "pool_val",
        "hkey",
        "hpair",
        "mark",
        "acc",
        "hits",
        "order",
        "ints",
        "floats",
    ],
)


def allocate(n, n_edges):
    """Empty state sized for a graph with ``n`` vertices and ``n_edges`` edges."""
    m = 2 * n
    heap_cap = 2 * n_edges + 2
    pool_cap = 4 * n_edges + 6 * n + 64
    return Core(
        l_self=np.zeros(m),
        d_mass=np.zeros(m),
        alive=np.zeros(m, dtype=np.uint8),
        head=np.full(m, -1, dtype=np.int64),
        tail=np.full(m, -1, dtype=np.int64),
        nxt=np.full(n, -1, dtype=np.int64),
        size=np.zeros(m, dtype=np.int64),
        nb_start=np.zeros(m, dtype=np.int64),
        nb_len=np.zeros(m, dtype=np.int64),
        nb_cap=np.zeros(m, dtype=np.int64),
        nb_live=np.zeros(m, dtype=np.int64),
        pool_id=np.zeros(pool_cap, dtype=np.int64),
        pool_val=np.zeros(pool_cap),
        hkey=np.zeros(heap_cap),
        hpair=np.zeros(heap_cap, dtype=np.int64),
        mark=np.full(m, -1, dtype=np.int64),
        acc=np.zeros(m),
        hits=np.zeros(m, dtype=np.int64),
        order=np.zeros(m, dtype=np.int64),
        ints=np.zeros(N_INTS, dtype=np.int64),
        floats=np.zeros(N_FLOATS),
    )


@njit(cache=True)
def delta(l_ii, l_jj, l_ij, d_i, d_j):
    return l_ii / d_i + l_jj / d_j - (l_ii + l_jj + 2.0 * l_ij) / (d_i + d_j)


# ---------------------------------------------------------------- heap
# Binary min-heap over (key, pair) with pair = i << 32 | j, which orders
# pairs lexicographically. Keys live in ``hkey``, pairs in ``hpair``.

_SHIFT = 32
_MASK = (1 << 32) - 1


@njit(cache=True)
def _less(k1, p1, k2, p2):
    return k1 < k2 or (k1 == k2 and p1 < p2)


@njit(cache=True)
def _sift_down(hk, hp, pos, size, k, p):
    comps = 0
    while True:
        ch = 2 * pos + 1
        if ch >= size:
            break
        if ch + 1 < size:
            comps += 1
            if _less(hk[ch + 1], hp[ch + 1], hk[ch], hp[ch]):
                ch += 1
        comps += 1
        if _less(hk[ch], hp[ch], k, p):
            hk[pos] = hk[ch]
            hp[pos] = hp[ch]
            pos = ch
        else:
            break
    hk[pos] = k
    hp[pos] = p
    return comps


@njit(cache=True)
def _heapify(S):
    hk, hp = S.hkey, S.hpair
    size = S.ints[HSIZE]
    comps = 0
    for pos in range(size // 2 - 1, -1, -1):
        comps += _sift_down(hk, hp, pos, size, hk[pos], hp[pos])
    S.ints[QOPS] += comps


@njit(cache=True)
def _push(S, dlt, i, j):
    hk, hp = S.hkey, S.hpair
    k = S.floats[SIGN] * dlt
    p = (i << _SHIFT) | j
    pos = S.ints[HSIZE]
    comps = 0
    while pos > 0:
        par = (pos - 1) >> 1
        comps += 1
        if _less(k, p, hk[par], hp[par]):
            hk[pos] = hk[par]
            hp[pos] = hp[par]
            pos = par
        else:
            break
    hk[pos] = k
    hp[pos] = p
    S.ints[HSIZE] += 1
    S.ints[INSERTS] += 1
    S.ints[QOPS] += 1 + comps
    if dlt < S.floats[MIN_DELTA]:
        S.floats[MIN_DELTA] = dlt


@njit(cache=True)
def _pop(S):
    hk, hp = S.hkey, S.hpair
    size = S.ints[HSIZE] - 1
    S.ints[HSIZE] = size
    comps = 0
    if size > 0:
        comps = _sift_down(hk, hp, 0, size, hk[size], hp[size])
    S.ints[QOPS] += 1 + comps


@njit(cache=True)
def entry(S, t):
    """Heap slot ``t`` as ``(key, i, j)``."""
    p = S.hpair[t]
    return S.hkey[t], p >> _SHIFT, p & _MASK


@njit(cache=True)
def peek(S):
    """Drop dead entries from the top; True if a live entry remains."""
    alive = S.alive
    while S.ints[HSIZE] > 0:
        p = S.hpair[0]
        if alive[p >> _SHIFT] and alive[p & _MASK]:
            return True
        _pop(S)
    return False


@njit(cache=True)
def _compact_heap(S):
    hk, hp = S.hkey, S.hpair
    alive = S.alive
    w = 0
    for t in range(S.ints[HSIZE]):
        p = hp[t]
        if alive[p >> _SHIFT] and alive[p & _MASK]:
            hk[w] = hk[t]
            hp[w] = p
            w += 1
    S.ints[HSIZE] = w
    S.ints[COMPACTIONS] += 1
    _heapify(S)


# ---------------------------------------------------------------- pool


@njit(cache=True)
def _gc(S):
    pool_id, pool_val = S.pool_id, S.pool_val
    top = 0
    total = 0
    for c in range(S.ints[NEXT_ID]):
        if S.alive[c]:
            total += S.nb_len[c] + 2
    new_id = np.empty(total, dtype=np.int64)
    new_val = np.empty(total)
    for c in range(S.ints[NEXT_ID]):
        if not S.alive[c]:
            continue
        s = S.nb_start[c]
        cnt = 0
        for t in range(s, s + S.nb_len[c]):
            if S.alive[pool_id[t]]:
                new_id[top + cnt] = pool_id[t]
                new_val[top + cnt] = pool_val[t]
                cnt += 1
        S.nb_start[c] = top
        S.nb_len[c] = cnt
        S.nb_cap[c] = cnt + 2
        top += cnt + 2
    pool_id[:top] = new_id[:top]
    pool_val[:top] = new_val[:top]
    S.ints[POOL_TOP] = top
    S.ints[GC_RUNS] += 1


@njit(cache=True)
def _alloc(S, size):
    if S.ints[POOL_TOP] + size > S.pool_id.shape[0]:
        _gc(S)
        if S.ints[POOL_TOP] + size > S.pool_id.shape[0]:
            raise MemoryError("neighbor pool exhausted")
    start = S.ints[POOL_TOP]
    S.ints[POOL_TOP] += size
    return start


@njit(cache=True)
def _append(S, p, q, v):
    pool_id, pool_val, alive = S.pool_id, S.pool_val, S.alive
    if S.nb_len[p] == S.nb_cap[p]:
        s = S.nb_start[p]
        live = 0
        for t in range(s, s + S.nb_len[p]):
            if alive[pool_id[t]]:
                live += 1
        if 2 * (live + 1) <= S.nb_cap[p]:
            w = s
            for t in range(s, s + S.nb_len[p]):
                if alive[pool_id[t]]:
                    pool_id[w] = pool_id[t]
                    pool_val[w] = pool_val[t]
                    w += 1
            S.nb_len[p] = w - s
        else:
            cap = 2 * (live + 1)
            dst = _alloc(S, cap)
            s = S.nb_start[p]  # a collection inside _alloc may have moved it
            w = dst
            for t in range(s, s + S.nb_len[p]):
                if alive[pool_id[t]]:
                    pool_id[w] = pool_id[t]
                    pool_val[w] = pool_val[t]
                    w += 1
            S.nb_start[p] = dst
            S.nb_len[p] = w - dst
            S.nb_cap[p] = cap
    t = S.nb_start[p] + S.nb_len[p]
    pool_id[t] = q
    pool_val[t] = v
    S.nb_len[p] += 1


@njit(cache=True)
def lookup(S, i, j):
    """Cross value l_ij if ``j`` is a live neighbor of ``i``, else 0.0."""
    s = S.nb_start[i]
    for t in range(s, s + S.nb_len[i]):
        if S.pool_id[t] == j and S.alive[j]:
            return S.pool_val[t]
    return 0.0


# ---------------------------------------------------------------- engine


@njit(cache=True)
def init(S, indptr, indices, data, degrees, sign):
    n = indptr.shape[0] - 1
    ints, floats = S.ints, S.floats
    floats[SIGN] = sign
    floats[MIN_DELTA] = np.inf
    k1_max = 0
    for i in range(n):
        d = degrees[i]
        S.l_self[i] = d
        S.d_mass[i] = d
        S.alive[i] = 1
        S.head[i] = i
        S.tail[i] = i
        S.nxt[i] = -1
        S.size[i] = 1
        cnt = indptr[i + 1] - indptr[i]
        s = indptr[i] + 2 * i
        for q in range(cnt):
            S.pool_id[s + q] = indices[indptr[i] + q]
            S.pool_val[s + q] = -data[indptr[i] + q]
        S.nb_start[i] = s
        S.nb_len[i] = cnt
        S.nb_cap[i] = cnt + 2
        S.nb_live[i] = cnt
        if cnt > k1_max:
            k1_max = cnt
    ints[POOL_TOP] = indptr[n] + 2 * n

    h = 0
    min_delta = np.inf
    for i in range(n):
        for q in range(indptr[i], indptr[i + 1]):
            j = indices[q]
            if j > i:
                dl = delta(degrees[i], degrees[j], -data[q], degrees[i], degrees[j])
                S.hkey[h] = sign * dl
                S.hpair[h] = (i << _SHIFT) | j
                h += 1
                if dl < min_delta:
                    min_delta = dl
    ints[HSIZE] = h
    ints[LIVE] = h
    ints[INSERTS] = h
    ints[QOPS] = h
    floats[MIN_DELTA] = min_delta
    _heapify(S)

    ints[NEXT_ID] = n
    ints[ACTIVE] = n
    ints[K1_MAX] = k1_max
    floats[OBJ] = float(n)
    floats[COMP] = 0.0


@njit(cache=True)
def _subtract_objective(S, x):
    # Neumaier compensated running sum
    f = S.floats
    s = f[OBJ]
    t = s - x
    if abs(s) >= abs(x):
        f[COMP] += (s - t) - x
    else:
        f[COMP] += (-x - t) + s
    f[OBJ] = t


@njit(cache=True)
def merge(S, i, j):
    """Merge clusters ``i`` and ``j`` into a fresh cluster.

    Returns ``(e, delta, neighbors)``; ``neighbors`` tells whether the pair
    shared an edge. Callers check liveness.
    """
    alive, pool_id, pool_val = S.alive, S.pool_id, S.pool_val
    mark, acc, hits, order = S.mark, S.acc, S.hits, S.order
    ints = S.ints
    e = ints[NEXT_ID]
    ints[NEXT_ID] = e + 1

    lij = 0.0
    adjacent = False
    cnt = 0
    s = S.nb_start[i]
    for t in range(s, s + S.nb_len[i]):
        p = pool_id[t]
        if not alive[p]:
            continue
        if p == j:
            lij = pool_val[t]
            adjacent = True
            continue
        mark[p] = e
        acc[p] = pool_val[t]
        hits[p] = 1
        order[cnt] = p
        cnt += 1
    s = S.nb_start[j]
    for t in range(s, s + S.nb_len[j]):
        p = pool_id[t]
        if p == i or not alive[p]:
            continue
        if mark[p] == e:
            acc[p] += pool_val[t]
            hits[p] = 2
        else:
            mark[p] = e
            acc[p] = pool_val[t]
            hits[p] = 1
            order[cnt] = p
            cnt += 1

    l_i, l_j, d_i, d_j = S.l_self[i], S.l_self[j], S.d_mass[i], S.d_mass[j]
    dlt = delta(l_i, l_j, lij, d_i, d_j)

    removed = S.nb_live[i] + S.nb_live[j] - (1 if adjacent else 0)
    ints[DELETES] += removed
    ints[QOPS] += removed

    alive[i] = 0
    alive[j] = 0
    alive[e] = 1
    # a cluster without neighbors has zero cut; pin it exactly
    le = l_i + l_j + 2.0 * lij if cnt > 0 else 0.0
    de = d_i + d_j
    S.l_self[e] = le
    S.d_mass[e] = de
    S.nxt[S.tail[i]] = S.head[j]
    S.head[e] = S.head[i]
    S.tail[e] = S.tail[j]
    S.size[e] = S.size[i] + S.size[j]
    S.nb_live[i] = 0
    S.nb_live[j] = 0
    S.nb_len[e] = 0
    S.nb_cap[e] = 0

    ints[LIVE] += cnt - removed
    # dead entries outnumbering live ones are cheaper to sweep than to pop
    if ints[HSIZE] + cnt > S.hkey.shape[0] or ints[HSIZE] > 2 * ints[LIVE] + 1024:
        _compact_heap(S)
    for t in range(cnt):
        p = order[t]
        v = acc[p]
        S.nb_live[p] += 1 - hits[p]
        _append(S, p, e, v)
        _push(S, delta(S.l_self[p], le, v, S.d_mass[p], de), p, e)

    cap = 2 * cnt + 2
    start = _alloc(S, cap)
    for t in range(cnt):
        p = order[t]
        pool_id[start + t] = p
        pool_val[start + t] = acc[p]
    S.nb_start[e] = start
    S.nb_len[e] = cnt
    S.nb_cap[e] = cap
    S.nb_live[e] = cnt
    if cnt > ints[K1_MAX]:
        ints[K1_MAX] = cnt

    _subtract_objective(S, dlt)
    ints[ACTIVE] -= 1
    return e, dlt, adjacent


@njit(cache=True)
def run_loop(S, c, limit, tr_i, tr_j, tr_e, tr_delta, tr_obj, pos):
    """Greedy merges until ``c`` clusters remain, ``limit`` merges were
    made, or no neighbor pair is left. Returns ``(merges, exhausted)``."""
    done = 0
    while S.ints[ACTIVE] > c and done < limit:
        if not peek(S):
            return done, True
        _, i, j = entry(S, 0)
        S.ints[EXTRACTS] += 1
        S.ints[QOPS] += 1
        e, dlt, _ = merge(S, i, j)
        tr_i[pos] = i
        tr_j[pos] = j
        tr_e[pos] = e
        tr_delta[pos] = dlt
        tr_obj[pos] = S.floats[OBJ] + S.floats[COMP]
        pos += 1
        done += 1
    return done, False


@njit(cache=True)
def best_unlinked_pair(S):
    """Best pair among all alive clusters taking l_ij = 0, lexicographic ties."""
    sign = S.floats[SIGN]
    best_i = -1
    best_j = -1
    best_k = np.inf
    top = S.ints[NEXT_ID]
    for i in range(top):
        if not S.alive[i]:
            continue
        for j in range(i + 1, top):
            if not S.alive[j]:
                continue
            k = sign * delta(S.l_self[i], S.l_self[j], 0.0, S.d_mass[i], S.d_mass[j])
            if k < best_k:
                best_k = k
                best_i = i
                best_j = j
    return best_i, best_j


@njit(cache=True)
def owners(S, out):
    for c in range(S.ints[NEXT_ID]):
        if S.alive[c]:
            v = S.head[c]
            while v != -1:
                out[v] = c
                v = S.nxt[v]
