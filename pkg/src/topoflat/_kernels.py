"""Numba kernels for the hot paths.

Everything here operates on flat int64/float64 arrays (CSR adjacency, rank
arrays) so the combinatorial sweeps run at native speed.  The region
discovery and pairing kernels process candidate vertices in globally
decreasing rank order through one shared max-heap; that scheduling makes
every park/merge decision final the moment it is taken, so results are
deterministic and independent of any task schedule.
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange, get_num_threads, set_num_threads  # noqa: F401

BIG = np.int64(2**62)

# vertex states during a propagation sweep
UNTOUCHED = 0
PENDING = 1
CLAIMED = 2
FRINGE = 3


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _heap_push(hkey, hval, size, key, val):
    i = size
    hkey[i] = key
    hval[i] = val
    while i > 0:
        p = (i - 1) >> 1
        if hkey[p] >= hkey[i]:
            break
        hkey[p], hkey[i] = hkey[i], hkey[p]
        hval[p], hval[i] = hval[i], hval[p]
        i = p
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(hkey, hval, size):
    key = hkey[0]
    val = hval[0]
    size -= 1
    if size > 0:
        hkey[0] = hkey[size]
        hval[0] = hval[size]
        i = 0
        while True:
            l = 2 * i + 1
            if l >= size:
                break
            big = l
            r = l + 1
            if r < size and hkey[r] > hkey[l]:
                big = r
            if hkey[i] >= hkey[big]:
                break
            hkey[i], hkey[big] = hkey[big], hkey[i]
            hval[i], hval[big] = hval[big], hval[i]
            i = big
    return key, val, size


@njit(cache=True, inline="always")
def _uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


# ---------------------------------------------------------------------------
# realization sweep
# ---------------------------------------------------------------------------

@njit(cache=True)
def realize_sweep(g, inverse, zeta):
    """Lower values in decreasing order positions until g increases strictly
    with the order under (value, id) tie-breaking."""
    n = inverse.size
    if n < 2:
        return
    prev = inverse[n - 1]
    for i in range(n - 2, -1, -1):
        v = inverse[i]
        if g[v] > g[prev] or (g[v] == g[prev] and v > prev):
            nv = g[prev] - zeta
            if nv >= g[prev]:
                nv = np.nextafter(g[prev], -np.inf)
            g[v] = nv
        prev = v


# ---------------------------------------------------------------------------
# criticality
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _count_side_components(side, pair_i, pair_j, want, parent):
    """Components of the sub-link induced by link vertices with ``side ==
    want``, connected through the given link-edge pairs."""
    k = side.size
    for i in range(k):
        parent[i] = i
    for e in range(pair_i.size):
        a = pair_i[e]
        b = pair_j[e]
        if side[a] == want and side[b] == want:
            ra = _uf_find(parent, a)
            rb = _uf_find(parent, b)
            if ra != rb:
                parent[rb] = ra
    comps = 0
    for i in range(k):
        if side[i] == want and _uf_find(parent, i) == i:
            comps += 1
    return comps


@njit(cache=True, parallel=True)
def classify_grid(rank, dims, strides, offsets, pair_i, pair_j,
                  lower_out, upper_out):
    n = rank.size
    K = offsets.shape[0]
    ndim = offsets.shape[1]
    for v in prange(n):
        side = np.full(K, -1, dtype=np.int8)  # -1 invalid, 0 lower, 1 upper
        parent = np.empty(K, dtype=np.int64)
        rest = v
        c0 = rest % dims[0]
        rest //= dims[0]
        c1 = rest % dims[1]
        c2 = rest // dims[1] if ndim == 3 else 0
        for k in range(K):
            a = c0 + offsets[k, 0]
            b = c1 + offsets[k, 1]
            if a < 0 or a >= dims[0] or b < 0 or b >= dims[1]:
                continue
            if ndim == 3:
                c = c2 + offsets[k, 2]
                if c < 0 or c >= dims[2]:
                    continue
            u = v
            for ax in range(ndim):
                u += offsets[k, ax] * strides[ax]
            side[k] = 1 if rank[u] > rank[v] else 0
        lower_out[v] = _count_side_components(side, pair_i, pair_j, 0, parent)
        upper_out[v] = _count_side_components(side, pair_i, pair_j, 1, parent)


@njit(cache=True, parallel=True)
def classify_explicit(rank, indptr, indices, link_ptr, link_a, link_b,
                      lower_out, upper_out):
    n = rank.size
    for v in prange(n):
        lo = indptr[v]
        deg = indptr[v + 1] - lo
        side = np.empty(deg, dtype=np.int8)
        parent = np.empty(deg, dtype=np.int64)
        for k in range(deg):
            side[k] = 1 if rank[indices[lo + k]] > rank[v] else 0
        ne = link_ptr[v + 1] - link_ptr[v]
        pi = np.empty(ne, dtype=np.int64)
        pj = np.empty(ne, dtype=np.int64)
        for e in range(ne):
            a = link_a[link_ptr[v] + e]
            b = link_b[link_ptr[v] + e]
            ia = -1
            ib = -1
            for k in range(deg):
                u = indices[lo + k]
                if u == a:
                    ia = k
                if u == b:
                    ib = k
            pi[e] = ia
            pj[e] = ib
        lower_out[v] = _count_side_components(side, pi, pj, 0, parent)
        upper_out[v] = _count_side_components(side, pi, pj, 1, parent)


# ---------------------------------------------------------------------------
# region discovery (removal mode)
# ---------------------------------------------------------------------------

@njit(cache=True)
def discover_sweep(rank, indptr, indices, seeds):
    """Grow one descending propagation per seed maximum, processing candidate
    vertices in globally decreasing rank order.

    A popped vertex with an unvisited (or fringe) larger neighbor is a final
    stopping point: every propagation owning part of its upper link parks
    there, because whatever lies above that neighbor can never be visited
    later.  A popped vertex whose upper link is fully claimed by unparked
    propagations merges them and the union continues.  Claimed territory next
    to a parked propagation also parks: its component is already attached to
    out-of-scope territory above.

    Returns (state, owner, saddle, parked, topseed, parent, err).
    """
    n = rank.size
    nseeds = seeds.size
    state = np.zeros(n, dtype=np.int8)
    owner = np.full(n, -1, dtype=np.int64)
    parent = np.arange(nseeds, dtype=np.int64)
    saddle = np.full(nseeds, -1, dtype=np.int64)
    parked = np.zeros(nseeds, dtype=np.bool_)
    topseed = np.empty(nseeds, dtype=np.int64)
    seedslot = np.full(n, -1, dtype=np.int64)
    for i in range(nseeds):
        topseed[i] = rank[seeds[i]]
        seedslot[seeds[i]] = i

    hkey = np.empty(n + 1, dtype=np.int64)
    hval = np.empty(n + 1, dtype=np.int64)
    hsize = 0
    for i in range(nseeds):
        hsize = _heap_push(hkey, hval, hsize, rank[seeds[i]], seeds[i])
        state[seeds[i]] = PENDING

    roots = np.empty(64, dtype=np.int64)
    err = 0
    while hsize > 0:
        rv, v, hsize = _heap_pop(hkey, hval, hsize)
        if state[v] >= CLAIMED:
            continue

        blocked = False
        nroots = 0
        for idx in range(indptr[v], indptr[v + 1]):
            u = indices[idx]
            if rank[u] > rv:
                if state[u] == CLAIMED:
                    r = _uf_find(parent, owner[u])
                    seen = False
                    for j in range(nroots):
                        if roots[j] == r:
                            seen = True
                            break
                    if not seen:
                        roots[nroots] = r
                        nroots += 1
                    if parked[r]:
                        blocked = True
                else:
                    blocked = True  # untouched or fringe territory above

        if seedslot[v] >= 0:
            slot = seedslot[v]
            owner[v] = slot
            state[v] = CLAIMED
            for idx in range(indptr[v], indptr[v + 1]):
                u = indices[idx]
                if state[u] == UNTOUCHED:
                    state[u] = PENDING
                    hsize = _heap_push(hkey, hval, hsize, rank[u], u)
            continue

        if nroots == 0:
            # only reachable when pushed by a claimed higher neighbor
            err = 1
            state[v] = FRINGE
            continue

        if blocked:
            state[v] = FRINGE
            for j in range(nroots):
                r = roots[j]
                if not parked[r]:
                    parked[r] = True
                    saddle[r] = v
            continue

        root = roots[0]
        for j in range(1, nroots):
            r = roots[j]
            ra = _uf_find(parent, root)
            rb = _uf_find(parent, r)
            if ra != rb:
                parent[rb] = ra
                if topseed[rb] > topseed[ra]:
                    topseed[ra] = topseed[rb]
                root = ra
        owner[v] = _uf_find(parent, root)
        state[v] = CLAIMED
        for idx in range(indptr[v], indptr[v + 1]):
            u = indices[idx]
            if state[u] == UNTOUCHED:
                state[u] = PENDING
                hsize = _heap_push(hkey, hval, hsize, rank[u], u)

    for v in range(n):
        if state[v] == CLAIMED:
            owner[v] = _uf_find(parent, owner[v])
    return state, owner, saddle, parked, topseed, parent, err


# ---------------------------------------------------------------------------
# truncated extremum-saddle pairing
# ---------------------------------------------------------------------------

@njit(cache=True)
def pairs_sweep(rank, values, indptr, indices, seeds, eps):
    """Descending propagations from every seed maximum that track the value
    drop from the component's highest seed and stop once it reaches ``eps``.

    A component whose drop reaches eps survives; a component meeting an older
    component (or territory already given up by one) below eps dies there and
    its highest seed is paired with the junction vertex.  Returns
    (pair_saddle, err): pair_saddle[i] is the junction vertex pairing
    seeds[i], or -1 for survivors.
    """
    n = rank.size
    nseeds = seeds.size
    state = np.zeros(n, dtype=np.int8)
    owner = np.full(n, -1, dtype=np.int64)
    parent = np.arange(nseeds, dtype=np.int64)
    stopped = np.zeros(nseeds, dtype=np.bool_)  # survivor or dead
    topslot = np.arange(nseeds, dtype=np.int64)  # seed slot of comp's elder
    pair_saddle = np.full(nseeds, -1, dtype=np.int64)
    seedslot = np.full(n, -1, dtype=np.int64)
    for i in range(nseeds):
        seedslot[seeds[i]] = i

    hkey = np.empty(n + 1, dtype=np.int64)
    hval = np.empty(n + 1, dtype=np.int64)
    hsize = 0
    for i in range(nseeds):
        hsize = _heap_push(hkey, hval, hsize, rank[seeds[i]], seeds[i])
        state[seeds[i]] = PENDING

    roots = np.empty(64, dtype=np.int64)
    err = 0
    while hsize > 0:
        rv, v, hsize = _heap_pop(hkey, hval, hsize)
        if state[v] >= CLAIMED:
            continue

        if seedslot[v] >= 0:
            owner[v] = seedslot[v]
            state[v] = CLAIMED
            for idx in range(indptr[v], indptr[v + 1]):
                u = indices[idx]
                if state[u] == UNTOUCHED:
                    state[u] = PENDING
                    hsize = _heap_push(hkey, hval, hsize, rank[u], u)
            continue

        beyond = False  # junction reaches territory already out of play
        nroots = 0
        for idx in range(indptr[v], indptr[v + 1]):
            u = indices[idx]
            if rank[u] > rv:
                if state[u] == CLAIMED:
                    r = _uf_find(parent, owner[u])
                    seen = False
                    for j in range(nroots):
                        if roots[j] == r:
                            seen = True
                            break
                    if not seen:
                        roots[nroots] = r
                        nroots += 1
                    if stopped[r]:
                        beyond = True
                else:
                    beyond = True

        if nroots == 0:
            err = 1
            state[v] = FRINGE
            continue

        if not beyond:
            elder = roots[0]
            for j in range(1, nroots):
                if rank[seeds[topslot[roots[j]]]] > rank[seeds[topslot[elder]]]:
                    elder = roots[j]
        else:
            elder = -1

        for j in range(nroots):
            r = roots[j]
            if r == elder or stopped[r]:
                continue
            stopped[r] = True
            if values[seeds[topslot[r]]] - values[v] < eps:
                pair_saddle[topslot[r]] = v  # dies below the threshold
            # else: crossed eps right at the junction; survives unpaired

        root = roots[0]
        for j in range(1, nroots):
            ra = _uf_find(parent, root)
            rb = _uf_find(parent, roots[j])
            if ra != rb:
                parent[rb] = ra
                if rank[seeds[topslot[rb]]] > rank[seeds[topslot[ra]]]:
                    topslot[ra] = topslot[rb]
                root = ra
        r = _uf_find(parent, root)
        owner[v] = r
        state[v] = CLAIMED
        if beyond or values[seeds[topslot[r]]] - values[v] >= eps:
            stopped[r] = True  # merged into spent territory, or persistent
            continue
        stopped[r] = False
        for idx in range(indptr[v], indptr[v + 1]):
            u = indices[idx]
            if state[u] == UNTOUCHED:
                state[u] = PENDING
                hsize = _heap_push(hkey, hval, hsize, rank[u], u)

    return pair_saddle, err


# ---------------------------------------------------------------------------
# localized simplification of one region set
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _local_pos(sorted_ids, perm, v):
    lo = 0
    hi = sorted_ids.size
    while lo < hi:
        mid = (lo + hi) >> 1
        if sorted_ids[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    if lo < sorted_ids.size and sorted_ids[lo] == v:
        return perm[lo]
    return np.int64(-1)


@njit(cache=True)
def _localize_one(verts, rank, indptr, indices, max_iter, out_l):
    """Alternating pass simplification of one region.

    ``verts`` is the region sorted by increasing rank; position 0 is the
    terminal junction vertex which must end up as the region's only local
    maximum, while every local minimum of the result must keep a neighbor
    outside the region (below the junction rank).  Returns (passes, status):
    status 0 ok, 1 no admissible boundary minimum, 2 iteration cap.
    """
    k = verts.size
    sort_idx = np.argsort(verts)
    sorted_ids = verts[sort_idx]
    perm = np.empty(k, dtype=np.int64)
    for i in range(k):
        perm[i] = sort_idx[i]

    srank = rank[verts[0]]
    has_outside = np.zeros(k, dtype=np.bool_)
    for p in range(1, k):
        v = verts[p]
        for idx in range(indptr[v], indptr[v + 1]):
            u = indices[idx]
            if rank[u] < srank:  # outside and below the junction
                has_outside[p] = True
                break

    cur = np.empty(k, dtype=np.int64)
    for p in range(k):
        cur[p] = p
    cur[0] = BIG
    v0 = -1
    for p in range(1, k):
        if has_outside[p]:
            v0 = p
            break
    if v0 < 0:
        return 0, 1
    cur[v0] = -BIG

    hkey = np.empty(k, dtype=np.int64)
    hval = np.empty(k, dtype=np.int64)
    inheap = np.zeros(k, dtype=np.bool_)
    new_l = np.empty(k, dtype=np.int64)
    is_min = np.zeros(k, dtype=np.bool_)

    passes = 0
    status = 0
    while True:
        # descending pass from the junction: afterwards it is the only maximum
        for p in range(k):
            inheap[p] = False
        hsize = _heap_push(hkey, hval, 0, cur[0], 0)
        inheap[0] = True
        extracted = 0
        while hsize > 0:
            _, p, hsize = _heap_pop(hkey, hval, hsize)
            new_l[p] = k - 1 - extracted
            extracted += 1
            v = verts[p]
            for idx in range(indptr[v], indptr[v + 1]):
                q = _local_pos(sorted_ids, perm, indices[idx])
                if q >= 0 and not inheap[q]:
                    inheap[q] = True
                    hsize = _heap_push(hkey, hval, hsize, cur[q], q)
        for p in range(k):
            cur[p] = new_l[p]
        passes += 1

        # unauthorized minimum: a local minimum locked inside the region
        bad = False
        for p in range(1, k):
            v = verts[p]
            mn = True
            for idx in range(indptr[v], indptr[v + 1]):
                q = _local_pos(sorted_ids, perm, indices[idx])
                if q >= 0 and cur[q] < cur[p]:
                    mn = False
                    break
            is_min[p] = mn
            if mn and not has_outside[p]:
                bad = True
        if not bad:
            break
        if passes >= max_iter:
            status = 2
            break

        # ascending pass from all admissible minima
        for p in range(k):
            inheap[p] = False
        hsize = 0
        for p in range(1, k):
            if is_min[p] and has_outside[p]:
                inheap[p] = True
                hsize = _heap_push(hkey, hval, hsize, -cur[p], p)
        extracted = 0
        while hsize > 0:
            _, p, hsize = _heap_pop(hkey, hval, hsize)
            new_l[p] = extracted
            extracted += 1
            v = verts[p]
            for idx in range(indptr[v], indptr[v + 1]):
                q = _local_pos(sorted_ids, perm, indices[idx])
                if q >= 0 and not inheap[q]:
                    inheap[q] = True
                    hsize = _heap_push(hkey, hval, hsize, -cur[q], q)
        for p in range(k):
            cur[p] = new_l[p]
        passes += 1

        # unauthorized maximum: any local maximum besides the junction
        bad = False
        for p in range(1, k):
            v = verts[p]
            mx = True
            for idx in range(indptr[v], indptr[v + 1]):
                q = _local_pos(sorted_ids, perm, indices[idx])
                if q >= 0 and cur[q] > cur[p]:
                    mx = False
                    break
            if mx:
                bad = True
                break
        if not bad:
            break
        if passes >= max_iter:
            status = 2
            break

    for p in range(k):
        out_l[p] = cur[p]
    return passes, status


@njit(cache=True, parallel=True)
def localize_regions(region_ptr, region_verts, rank, indptr, indices,
                     max_iter, local_rank, n_iters, statuses):
    nr = region_ptr.size - 1
    for r in prange(nr):
        lo = region_ptr[r]
        hi = region_ptr[r + 1]
        out = np.empty(hi - lo, dtype=np.int64)
        passes, status = _localize_one(region_verts[lo:hi], rank,
                                       indptr, indices, max_iter, out)
        for i in range(hi - lo):
            local_rank[lo + i] = out[i]
        n_iters[r] = passes
        statuses[r] = status


# ---------------------------------------------------------------------------
# flood fill over a value threshold (oracle support lives in pure Python;
# this variant backs the HTTP service on large inputs)
# ---------------------------------------------------------------------------

@njit(cache=True)
def count_above_components(values, indptr, indices, w):
    n = values.size
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    comps = 0
    for v0 in range(n):
        if seen[v0] or values[v0] <= w:
            continue
        comps += 1
        seen[v0] = True
        top = 0
        stack[top] = v0
        top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            for idx in range(indptr[v], indptr[v + 1]):
                u = indices[idx]
                if not seen[u] and values[u] > w:
                    seen[u] = True
                    stack[top] = u
                    top += 1
    return comps
