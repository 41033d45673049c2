"""Compiled BFS kernels over the ring + inter-link table representation.

Unreachable nodes carry hop distance -1.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def _neighbors_into(u, ns, inter, deg, out):
    base = (u // ns) * ns
    j = u - base
    out[0] = base + (j - 1 + ns) % ns
    out[1] = base + (j + 1) % ns
    k = deg[u]
    for i in range(k):
        out[2 + i] = inter[u, i]
    return 2 + k


@numba.njit(cache=True)
def bfs_hops(source, n, ns, inter, deg):
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    nbr = np.empty(2 + inter.shape[1], dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        k = _neighbors_into(u, ns, inter, deg, nbr)
        for i in range(k):
            v = nbr[i]
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue[tail] = v
                tail += 1
    return dist


@numba.njit(cache=True)
def all_source_eccentricity(n, ns, inter, deg):
    """Per-source eccentricity (-1 if some node is unreachable) and hop sums."""
    ecc = np.empty(n, dtype=np.int64)
    hop_sum = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist = bfs_hops(s, n, ns, inter, deg)
        m = 0
        total = 0
        for v in range(n):
            d = dist[v]
            if d < 0:
                m = -1
                break
            total += d
            if d > m:
                m = d
        ecc[s] = m
        hop_sum[s] = total
    return ecc, hop_sum


@numba.njit(cache=True)
def bfs_hops_lengths(source, n, ns, inter, deg, pos):
    """Min-hop distances with min-total-length tie-break and predecessors."""
    dist = np.full(n, -1, dtype=np.int64)
    length = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    nbr = np.empty(2 + inter.shape[1], dtype=np.int64)
    dist[source] = 0
    length[source] = 0.0
    queue[0] = source
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        k = _neighbors_into(u, ns, inter, deg, nbr)
        for i in range(k):
            v = nbr[i]
            dx = pos[u, 0] - pos[v, 0]
            dy = pos[u, 1] - pos[v, 1]
            dz = pos[u, 2] - pos[v, 2]
            cand = length[u] + np.sqrt(dx * dx + dy * dy + dz * dz)
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                length[v] = cand
                pred[v] = u
                queue[tail] = v
                tail += 1
            elif dist[v] == dist[u] + 1 and cand < length[v]:
                length[v] = cand
                pred[v] = u
    return dist, length, pred


@numba.njit(cache=True)
def all_source_max_length(n, ns, inter, deg, pos):
    """Longest min-hop/min-length path over ordered pairs.

    Returns ``(length, source, target)``; when the graph is disconnected the
    length is infinite and the pair is unreachable.
    """
    best = -1.0
    bs, bt = 0, 0
    for s in range(n):
        dist, length, _ = bfs_hops_lengths(s, n, ns, inter, deg, pos)
        for v in range(n):
            if dist[v] < 0:
                return np.inf, s, v
            if length[v] > best:
                best = length[v]
                bs, bt = s, v
    return best, bs, bt


@numba.njit(cache=True, inline="always")
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True)
def bitset_eccentricity(n, ns, inter, deg):
    """Same contract as ``all_source_eccentricity``, all sources at once.

    Row ``u`` of ``reach`` is the bitset of nodes within ``level`` hops of
    ``u``; one level expands every row by OR-ing its neighbours' rows.
    """
    words = (n + 63) // 64
    reach = np.zeros((n, words), dtype=np.uint64)
    for u in range(n):
        reach[u, u // 64] |= np.uint64(1) << np.uint64(u % 64)
    size = np.ones(n, dtype=np.int64)
    ecc = np.zeros(n, dtype=np.int64)
    hop_sum = np.zeros(n, dtype=np.int64)
    active = np.ones(n, dtype=np.bool_)
    nbr = np.empty(2 + inter.shape[1], dtype=np.int64)
    nxt = np.empty_like(reach)
    level = 0
    remaining = n if n > 1 else 0
    if n == 1:
        active[0] = False
    while remaining > 0:
        level += 1
        for u in range(n):
            if not active[u]:
                continue
            for w in range(words):
                nxt[u, w] = reach[u, w]
            k = _neighbors_into(u, ns, inter, deg, nbr)
            for i in range(k):
                v = nbr[i]
                for w in range(words):
                    nxt[u, w] |= reach[v, w]
        for u in range(n):
            if not active[u]:
                continue
            c = 0
            for w in range(words):
                reach[u, w] = nxt[u, w]
                c += _popcount64(nxt[u, w])
            hop_sum[u] += n - size[u]
            if c == size[u]:
                ecc[u] = -1
                active[u] = False
                remaining -= 1
            elif c == n:
                ecc[u] = level
                active[u] = False
                remaining -= 1
            size[u] = c
    return ecc, hop_sum
