"""Numba kernels for the hot paths: reverse sampling, forward simulation,
estimator products, greedy cache updates, and exhaustive enumeration.

All randomness is hash-based: the coin of edge e (or node v) inside
stream (seed, domain, index) is a pure function of those values, using
the same splitmix64 mixer as :mod:`actmax.rng`.  This keeps realizations
consistent across the two reverse traversals of an edge-rooted sample,
makes batching irrelevant to the output, and gives common random
numbers when several strategies are scored with one seed.

Node-set masks in the enumeration kernels are int64 bitmasks, which
restricts them to graphs of at most 62 nodes; the tiny-instance guard
keeps callers far below that.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

SALT_EDGE = np.uint64(0x1D872B41)
SALT_NODE = np.uint64(0x2E9A67F3)
SALT_SEED = np.uint64(0x3C6EF372)
SALT_PICK = np.uint64(0x4A29CD9B)


@njit(inline="always")
def mix64(z):
    z = z + _GOLD
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(inline="always")
def key2(a, b):
    return mix64(a ^ mix64(b))


@njit(inline="always")
def u01(h):
    return np.float64(h >> _S11) * _INV53


@njit(cache=True)
def mix64_check(z):
    """Python-callable wrapper for the cross-check against actmax.rng."""
    return mix64(np.uint64(z))


@njit(inline="always")
def _stream_key(seed, domain, index):
    return key2(key2(np.uint64(seed), np.uint64(domain)), np.uint64(index))


# ---------------------------------------------------------------------------
# Reverse-reachability sampling
# ---------------------------------------------------------------------------


@njit(inline="always")
def _reverse_reach(root, stamp, mark, queue, buf, skey, in_indptr, in_eid, edge_src, edge_param, lt_mode):
    """BFS along live in-edges from root; returns the visit count.

    Visited nodes are stamped in `mark` and appended to `buf`.  Edge and
    node coins are keyed by id, so a second traversal under the same
    skey sees the same realization.
    """
    head = 0
    tail = 0
    cnt = 0
    mark[root] = stamp
    queue[tail] = root
    tail += 1
    buf[cnt] = root
    cnt += 1
    while head < tail:
        w = queue[head]
        head += 1
        if lt_mode:
            r = u01(key2(skey ^ SALT_NODE, np.uint64(w)))
            acc = 0.0
            for s in range(in_indptr[w], in_indptr[w + 1]):
                eid = in_eid[s]
                acc += edge_param[eid]
                if r < acc:
                    src = edge_src[eid]
                    if mark[src] != stamp:
                        mark[src] = stamp
                        queue[tail] = src
                        tail += 1
                        buf[cnt] = src
                        cnt += 1
                    break
        else:
            for s in range(in_indptr[w], in_indptr[w + 1]):
                eid = in_eid[s]
                if u01(key2(skey ^ SALT_EDGE, np.uint64(eid))) < edge_param[eid]:
                    src = edge_src[eid]
                    if mark[src] != stamp:
                        mark[src] = stamp
                        queue[tail] = src
                        tail += 1
                        buf[cnt] = src
                        cnt += 1
    return cnt


@njit(cache=True)
def gen_re_chunk(
    n,
    edge_cdf,
    edge_src,
    edge_dst,
    in_indptr,
    in_eid,
    edge_param,
    lt_mode,
    seed,
    domain,
    first_index,
    count,
    cap,
):
    """Generate `count` edge-rooted sample pairs into flat partitioned arrays.

    Sample i draws edge (u, v) with probability proportional to its
    strength, realizes one live-edge subgraph lazily, and records the
    reverse-reachable sets N1 (of u) and N2 (of v) partitioned as
    [intersection | N1 only | N2 only].  Returns the number of samples
    that fit in `cap` node slots; callers retry with a larger cap if
    that is short of `count`.
    """
    nodes = np.empty(cap, dtype=np.int32)
    indptr = np.zeros(count + 1, dtype=np.int64)
    split1 = np.zeros(count, dtype=np.int64)
    split2 = np.zeros(count, dtype=np.int64)
    roots_u = np.empty(count, dtype=np.int64)
    roots_v = np.empty(count, dtype=np.int64)
    mark1 = np.full(n, -1, dtype=np.int64)
    mark2 = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    buf1 = np.empty(n, dtype=np.int64)
    buf2 = np.empty(n, dtype=np.int64)
    pos = 0
    done = 0
    for i in range(count):
        skey = _stream_key(seed, domain, first_index + i)
        r = u01(key2(skey ^ SALT_PICK, np.uint64(0)))
        e = np.searchsorted(edge_cdf, r, side="right")
        if e >= edge_cdf.shape[0]:
            e = edge_cdf.shape[0] - 1
        u = edge_src[e]
        v = edge_dst[e]
        len1 = _reverse_reach(u, i, mark1, queue, buf1, skey, in_indptr, in_eid, edge_src, edge_param, lt_mode)
        len2 = _reverse_reach(v, i, mark2, queue, buf2, skey, in_indptr, in_eid, edge_src, edge_param, lt_mode)
        if pos + len1 + len2 > cap:
            break
        # intersection, then N1-only, then N2-only
        for j in range(len1):
            w = buf1[j]
            if mark2[w] == i:
                nodes[pos] = w
                pos += 1
        split1[i] = pos
        for j in range(len1):
            w = buf1[j]
            if mark2[w] != i:
                nodes[pos] = w
                pos += 1
        split2[i] = pos
        for j in range(len2):
            w = buf2[j]
            if mark1[w] != i:
                nodes[pos] = w
                pos += 1
        indptr[i + 1] = pos
        roots_u[i] = u
        roots_v[i] = v
        done = i + 1
    return nodes, indptr, split1, split2, roots_u, roots_v, done, pos


@njit(cache=True)
def gen_rn_chunk(
    n,
    node_cdf,
    edge_src,
    in_indptr,
    in_eid,
    edge_param,
    lt_mode,
    seed,
    domain,
    first_index,
    count,
    cap,
):
    """Generate `count` node-rooted reverse-reachable sets (flat layout)."""
    nodes = np.empty(cap, dtype=np.int32)
    indptr = np.zeros(count + 1, dtype=np.int64)
    roots = np.empty(count, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    buf = np.empty(n, dtype=np.int64)
    pos = 0
    done = 0
    for i in range(count):
        skey = _stream_key(seed, domain, first_index + i)
        r = u01(key2(skey ^ SALT_PICK, np.uint64(0)))
        u = np.searchsorted(node_cdf, r, side="right")
        if u >= node_cdf.shape[0]:
            u = node_cdf.shape[0] - 1
        ln = _reverse_reach(u, i, mark, queue, buf, skey, in_indptr, in_eid, edge_src, edge_param, lt_mode)
        if pos + ln > cap:
            break
        for j in range(ln):
            nodes[pos] = buf[j]
            pos += 1
        indptr[i + 1] = pos
        roots[i] = u
        done = i + 1
    return nodes, indptr, roots, done, pos


# ---------------------------------------------------------------------------
# Forward Monte Carlo
# ---------------------------------------------------------------------------


@njit(cache=True)
def simulate_chunk(
    n,
    out_indptr,
    out_eid,
    edge_dst,
    edge_param,
    edge_strength,
    in_indptr,
    in_eid,
    lt_mode,
    h,
    seed,
    domain,
    first_index,
    count,
):
    """Run `count` forward diffusions seeded node-wise with probabilities h.

    Returns the activity benefit of each run: the summed strength of
    edges whose two endpoints both end up active.
    """
    benefits = np.empty(count, dtype=np.float64)
    mark = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for i in range(count):
        skey = _stream_key(seed, domain, first_index + i)
        tail = 0
        for u in range(n):
            if h[u] > 0.0 and u01(key2(skey ^ SALT_SEED, np.uint64(u))) < h[u]:
                mark[u] = i
                queue[tail] = u
                tail += 1
        head = 0
        while head < tail:
            w = queue[head]
            head += 1
            for s in range(out_indptr[w], out_indptr[w + 1]):
                eid = out_eid[s]
                v = edge_dst[eid]
                if mark[v] == i:
                    continue
                fire = False
                if lt_mode:
                    r = u01(key2(skey ^ SALT_NODE, np.uint64(v)))
                    acc = 0.0
                    chosen = np.int64(-1)
                    for s2 in range(in_indptr[v], in_indptr[v + 1]):
                        e2 = in_eid[s2]
                        acc += edge_param[e2]
                        if r < acc:
                            chosen = e2
                            break
                    fire = chosen == eid
                else:
                    fire = u01(key2(skey ^ SALT_EDGE, np.uint64(eid))) < edge_param[eid]
                if fire:
                    mark[v] = i
                    queue[tail] = v
                    tail += 1
        b = 0.0
        for j in range(tail):
            w = queue[j]
            for s in range(out_indptr[w], out_indptr[w + 1]):
                eid = out_eid[s]
                if mark[edge_dst[eid]] == i:
                    b += edge_strength[eid]
        benefits[i] = b
    return benefits


@njit(cache=True)
def seed_matrix(h, seed, domain, count):
    """Boolean matrix of `count` independent seed sets drawn from h."""
    n = h.shape[0]
    out = np.zeros((count, n), dtype=np.uint8)
    for i in range(count):
        skey = _stream_key(seed, domain, i)
        for u in range(n):
            if h[u] > 0.0 and u01(key2(skey ^ SALT_SEED, np.uint64(u))) < h[u]:
                out[i, u] = 1
    return out


# ---------------------------------------------------------------------------
# Estimator products and greedy cache maintenance
# ---------------------------------------------------------------------------


@njit(cache=True)
def re_part_products(nodes, indptr, split1, split2, h):
    """Per-sample products of (1 - h) over the three partition parts."""
    count = indptr.shape[0] - 1
    B = np.empty(count, dtype=np.float64)
    O1 = np.empty(count, dtype=np.float64)
    O2 = np.empty(count, dtype=np.float64)
    for i in range(count):
        p = 1.0
        for s in range(indptr[i], split1[i]):
            p *= 1.0 - h[nodes[s]]
        B[i] = p
        p = 1.0
        for s in range(split1[i], split2[i]):
            p *= 1.0 - h[nodes[s]]
        O1[i] = p
        p = 1.0
        for s in range(split2[i], indptr[i + 1]):
            p *= 1.0 - h[nodes[s]]
        O2[i] = p
    return B, O1, O2


@njit(cache=True)
def rn_part_products(nodes, indptr, h):
    count = indptr.shape[0] - 1
    P = np.empty(count, dtype=np.float64)
    for i in range(count):
        p = 1.0
        for s in range(indptr[i], indptr[i + 1]):
            p *= 1.0 - h[nodes[s]]
        P[i] = p
    return P


PRODUCT_REBUILD_EPS = 1e-12


@njit(inline="always")
def _rebuild_product(nodes, lo, hi, h):
    p = 1.0
    for s in range(lo, hi):
        p *= 1.0 - h[nodes[s]]
    return p


@njit(cache=True)
def re_acc_init(nodes, indptr, split1, split2, B, O1, O2, n, fc_kind):
    """Per-node gain coefficients summed over sample memberships.

    For the plain estimator the coefficient of a node in the
    intersection part is B*(O1+O2-O1*O2), in the N1-only part
    B*O1*(1-O2), in the N2-only part B*O2*(1-O1); for the lower-bound
    estimator only intersection members contribute, with coefficient B.
    """
    acc = np.zeros(n, dtype=np.float64)
    count = indptr.shape[0] - 1
    for i in range(count):
        if fc_kind:
            gb, g1, g2 = _g_parts_fc(B[i], O1[i], O2[i])
            for s in range(indptr[i], split1[i]):
                acc[nodes[s]] += gb
            for s in range(split1[i], split2[i]):
                acc[nodes[s]] += g1
            for s in range(split2[i], indptr[i + 1]):
                acc[nodes[s]] += g2
        else:
            b = B[i]
            for s in range(indptr[i], split1[i]):
                acc[nodes[s]] += b
    return acc


@njit(cache=True)
def rn_acc_init(nodes, indptr, P, n):
    acc = np.zeros(n, dtype=np.float64)
    count = indptr.shape[0] - 1
    for i in range(count):
        p = P[i]
        for s in range(indptr[i], indptr[i + 1]):
            acc[nodes[s]] += p
    return acc


@njit(inline="always")
def _g_parts_fc(b, o1, o2):
    gb = b * (o1 + o2 - o1 * o2)
    g1 = b * o1 * (1.0 - o2)
    g2 = b * o2 * (1.0 - o1)
    return gb, g1, g2


@njit(cache=True)
def re_commit(
    entry_sid,
    entry_part,
    nodes,
    indptr,
    split1,
    split2,
    B,
    O1,
    O2,
    acc,
    h,
    h_old,
    h_new,
    fc_kind,
):
    """Apply an h change of one node to the cached products and node gains.

    `entry_sid`/`entry_part` list the samples containing the node (one
    entry each).  `h` must already hold the new value.  `acc[w]` keeps,
    for every node w, the sum over its sample memberships of the part
    coefficient that multiplies (h_w' - h_w)/(1 - h_w) in the marginal
    gain; this updates those sums for all members of touched samples.
    """
    ratio = 0.0
    have_ratio = False
    if 1.0 - h_old > 0.0:
        ratio = (1.0 - h_new) / (1.0 - h_old)
        have_ratio = True
    for t in range(entry_sid.shape[0]):
        sid = entry_sid[t]
        part = entry_part[t]
        b_old = B[sid]
        o1_old = O1[sid]
        o2_old = O2[sid]
        lo = indptr[sid]
        s1 = split1[sid]
        s2 = split2[sid]
        hi = indptr[sid + 1]
        if part == 0:
            p = b_old * ratio if have_ratio else b_old
            if 0.0 < p < PRODUCT_REBUILD_EPS:
                p = _rebuild_product(nodes, lo, s1, h)
            B[sid] = p
        elif part == 1:
            p = o1_old * ratio if have_ratio else o1_old
            if 0.0 < p < PRODUCT_REBUILD_EPS:
                p = _rebuild_product(nodes, s1, s2, h)
            O1[sid] = p
        else:
            p = o2_old * ratio if have_ratio else o2_old
            if 0.0 < p < PRODUCT_REBUILD_EPS:
                p = _rebuild_product(nodes, s2, hi, h)
            O2[sid] = p
        if fc_kind:
            gb_old, g1_old, g2_old = _g_parts_fc(b_old, o1_old, o2_old)
            gb_new, g1_new, g2_new = _g_parts_fc(B[sid], O1[sid], O2[sid])
            for s in range(lo, s1):
                acc[nodes[s]] += gb_new - gb_old
            for s in range(s1, s2):
                acc[nodes[s]] += g1_new - g1_old
            for s in range(s2, hi):
                acc[nodes[s]] += g2_new - g2_old
        else:
            db = B[sid] - b_old
            for s in range(lo, s1):
                acc[nodes[s]] += db
    return 0


@njit(cache=True)
def rn_commit(entry_sid, nodes, indptr, P, acc, h, h_old, h_new):
    ratio = 0.0
    have_ratio = False
    if 1.0 - h_old > 0.0:
        ratio = (1.0 - h_new) / (1.0 - h_old)
        have_ratio = True
    for t in range(entry_sid.shape[0]):
        sid = entry_sid[t]
        p_old = P[sid]
        p = p_old * ratio if have_ratio else p_old
        lo = indptr[sid]
        hi = indptr[sid + 1]
        if 0.0 < p < PRODUCT_REBUILD_EPS:
            p = _rebuild_product(nodes, lo, hi, h)
        P[sid] = p
        dp = p - p_old
        for s in range(lo, hi):
            acc[nodes[s]] += dp
    return 0


# ---------------------------------------------------------------------------
# Exhaustive enumeration (tiny-instance oracle)
# ---------------------------------------------------------------------------


@njit(inline="always")
def _closure_from_live(n, lc, live_src, live_dst, fwd):
    """Forward-reachability bitmask per node over the live edges."""
    for v in range(n):
        fwd[v] = np.int64(1) << np.int64(v)
    changed = True
    while changed:
        changed = False
        for idx in range(lc):
            u = live_src[idx]
            nf = fwd[u] | fwd[live_dst[idx]]
            if nf != fwd[u]:
                fwd[u] = nf
                changed = True


@njit(inline="always")
def _kahan_add(sums, comps, idx, term):
    y = term - comps[idx]
    t = sums[idx] + y
    comps[idx] = (t - sums[idx]) - y
    sums[idx] = t


@njit(cache=True)
def ic_tables(n, esrc, edst, p, A, w):
    """fd, fd_lower, fd_upper for every seed mask under independent cascade.

    Enumerates all 2^m live-edge realizations exactly; Kahan-compensated
    accumulation keeps the summation error negligible at guard scale.
    """
    m = esrc.shape[0]
    n_masks = 1 << n
    fd = np.zeros(n_masks, dtype=np.float64)
    fdl = np.zeros(n_masks, dtype=np.float64)
    fdu = np.zeros(n_masks, dtype=np.float64)
    cfd = np.zeros(n_masks, dtype=np.float64)
    cfdl = np.zeros(n_masks, dtype=np.float64)
    cfdu = np.zeros(n_masks, dtype=np.float64)
    fwd = np.empty(n, dtype=np.int64)
    rev = np.empty(n, dtype=np.int64)
    cov = np.empty(m, dtype=np.int64)
    live_src = np.empty(m, dtype=np.int64)
    live_dst = np.empty(m, dtype=np.int64)
    for gmask in range(1 << m):
        pr = 1.0
        lc = 0
        for e in range(m):
            if (gmask >> e) & 1:
                pr *= p[e]
                live_src[lc] = esrc[e]
                live_dst[lc] = edst[e]
                lc += 1
            else:
                pr *= 1.0 - p[e]
        if pr == 0.0:
            continue
        _closure_from_live(n, lc, live_src, live_dst, fwd)
        for v in range(n):
            rev[v] = 0
        for u in range(n):
            fu = fwd[u]
            for v in range(n):
                if (fu >> v) & 1:
                    rev[v] |= np.int64(1) << np.int64(u)
        for e in range(m):
            cov[e] = rev[esrc[e]] & rev[edst[e]]
        for smask in range(1, n_masks):
            act = np.int64(0)
            for u in range(n):
                if (smask >> u) & 1:
                    act |= fwd[u]
            b = 0.0
            bl = 0.0
            for e in range(m):
                if ((act >> esrc[e]) & 1) and ((act >> edst[e]) & 1):
                    b += A[e]
                if cov[e] & smask:
                    bl += A[e]
            bu = 0.0
            for v in range(n):
                if rev[v] & smask:
                    bu += w[v]
            _kahan_add(fd, cfd, smask, pr * b)
            _kahan_add(fdl, cfdl, smask, pr * bl)
            _kahan_add(fdu, cfdu, smask, pr * bu)
    return fd, fdl, fdu


@njit(cache=True)
def lt_tables(n, esrc, edst, b_param, A, w, in_indptr, in_eid):
    """fd, fd_lower, fd_upper tables under linear threshold.

    Enumerates the product space of per-node live in-edge choices
    (including "none"), which is the exact realization distribution.
    """
    m = esrc.shape[0]
    n_masks = 1 << n
    fd = np.zeros(n_masks, dtype=np.float64)
    fdl = np.zeros(n_masks, dtype=np.float64)
    fdu = np.zeros(n_masks, dtype=np.float64)
    cfd = np.zeros(n_masks, dtype=np.float64)
    cfdl = np.zeros(n_masks, dtype=np.float64)
    cfdu = np.zeros(n_masks, dtype=np.float64)
    fwd = np.empty(n, dtype=np.int64)
    rev = np.empty(n, dtype=np.int64)
    cov = np.empty(m, dtype=np.int64)
    live_src = np.empty(n, dtype=np.int64)
    live_dst = np.empty(n, dtype=np.int64)
    none_pr = np.empty(n, dtype=np.float64)
    indeg = np.empty(n, dtype=np.int64)
    for v in range(n):
        s = 0.0
        for si in range(in_indptr[v], in_indptr[v + 1]):
            s += b_param[in_eid[si]]
        none_pr[v] = 1.0 - s
        indeg[v] = in_indptr[v + 1] - in_indptr[v]
    choice = np.zeros(n, dtype=np.int64)
    while True:
        pr = 1.0
        lc = 0
        for v in range(n):
            c = choice[v]
            if c == 0:
                pr *= none_pr[v]
            else:
                eid = in_eid[in_indptr[v] + c - 1]
                pr *= b_param[eid]
                live_src[lc] = esrc[eid]
                live_dst[lc] = v
                lc += 1
        if pr > 0.0:
            _closure_from_live(n, lc, live_src, live_dst, fwd)
            for v in range(n):
                rev[v] = 0
            for u in range(n):
                fu = fwd[u]
                for v in range(n):
                    if (fu >> v) & 1:
                        rev[v] |= np.int64(1) << np.int64(u)
            for e in range(m):
                cov[e] = rev[esrc[e]] & rev[edst[e]]
            for smask in range(1, n_masks):
                act = np.int64(0)
                for u in range(n):
                    if (smask >> u) & 1:
                        act |= fwd[u]
                bb = 0.0
                bl = 0.0
                for e in range(m):
                    if ((act >> esrc[e]) & 1) and ((act >> edst[e]) & 1):
                        bb += A[e]
                    if cov[e] & smask:
                        bl += A[e]
                bu = 0.0
                for v in range(n):
                    if rev[v] & smask:
                        bu += w[v]
                _kahan_add(fd, cfd, smask, pr * bb)
                _kahan_add(fdl, cfdl, smask, pr * bl)
                _kahan_add(fdu, cfdu, smask, pr * bu)
        k = 0
        while k < n:
            choice[k] += 1
            if choice[k] <= indeg[k]:
                break
            choice[k] = 0
            k += 1
        if k == n:
            break
    return fd, fdl, fdu


@njit(cache=True)
def ic_seed_value(n, esrc, edst, p, A, smask):
    """fd for a single seed mask under independent cascade (wider n allowed)."""
    m = esrc.shape[0]
    fwd = np.empty(n, dtype=np.int64)
    live_src = np.empty(m, dtype=np.int64)
    live_dst = np.empty(m, dtype=np.int64)
    total = 0.0
    comp = 0.0
    for gmask in range(1 << m):
        pr = 1.0
        lc = 0
        for e in range(m):
            if (gmask >> e) & 1:
                pr *= p[e]
                live_src[lc] = esrc[e]
                live_dst[lc] = edst[e]
                lc += 1
            else:
                pr *= 1.0 - p[e]
        if pr == 0.0:
            continue
        _closure_from_live(n, lc, live_src, live_dst, fwd)
        act = np.int64(0)
        for u in range(n):
            if (smask >> u) & 1:
                act |= fwd[u]
        b = 0.0
        for e in range(m):
            if ((act >> esrc[e]) & 1) and ((act >> edst[e]) & 1):
                b += A[e]
        term = pr * b
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


@njit(cache=True)
def constructed_value(n, esrc, edst, p, A, in_indptr, in_eid, lt_mode, h):
    """Exact benefit of diffusing from the virtual seed layer.

    Virtual seed edges fire independently with probabilities h; the base
    realization follows the graph model.  Enumerates the full product
    space (virtual coin masks x base realizations).
    """
    m = esrc.shape[0]
    n_masks = 1 << n
    fwd = np.empty(n, dtype=np.int64)
    live_src = np.empty(max(m, n), dtype=np.int64)
    live_dst = np.empty(max(m, n), dtype=np.int64)
    none_pr = np.empty(n, dtype=np.float64)
    indeg = np.empty(n, dtype=np.int64)
    for v in range(n):
        s = 0.0
        for si in range(in_indptr[v], in_indptr[v + 1]):
            s += p[in_eid[si]]
        none_pr[v] = 1.0 - s
        indeg[v] = in_indptr[v + 1] - in_indptr[v]
    total = 0.0
    comp = 0.0
    if lt_mode:
        choice = np.zeros(n, dtype=np.int64)
        while True:
            pr = 1.0
            lc = 0
            for v in range(n):
                c = choice[v]
                if c == 0:
                    pr *= none_pr[v]
                else:
                    eid = in_eid[in_indptr[v] + c - 1]
                    pr *= p[eid]
                    live_src[lc] = esrc[eid]
                    live_dst[lc] = v
                    lc += 1
            if pr > 0.0:
                _closure_from_live(n, lc, live_src, live_dst, fwd)
                inner = _seed_expectation(n, esrc, edst, A, h, fwd, n_masks)
                term = pr * inner
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
            k = 0
            while k < n:
                choice[k] += 1
                if choice[k] <= indeg[k]:
                    break
                choice[k] = 0
                k += 1
            if k == n:
                break
    else:
        for gmask in range(1 << m):
            pr = 1.0
            lc = 0
            for e in range(m):
                if (gmask >> e) & 1:
                    pr *= p[e]
                    live_src[lc] = esrc[e]
                    live_dst[lc] = edst[e]
                    lc += 1
                else:
                    pr *= 1.0 - p[e]
            if pr == 0.0:
                continue
            _closure_from_live(n, lc, live_src, live_dst, fwd)
            inner = _seed_expectation(n, esrc, edst, A, h, fwd, n_masks)
            term = pr * inner
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total


@njit(inline="always")
def _seed_expectation(n, esrc, edst, A, h, fwd, n_masks):
    """E over independent seed coins of the benefit of the reached set."""
    m = esrc.shape[0]
    inner = 0.0
    for smask in range(n_masks):
        ps = 1.0
        for u in range(n):
            if (smask >> u) & 1:
                ps *= h[u]
            else:
                ps *= 1.0 - h[u]
        if ps == 0.0:
            continue
        act = np.int64(0)
        for u in range(n):
            if (smask >> u) & 1:
                act |= fwd[u]
        b = 0.0
        for e in range(m):
            if ((act >> esrc[e]) & 1) and ((act >> edst[e]) & 1):
                b += A[e]
        inner += ps * b
    return inner
