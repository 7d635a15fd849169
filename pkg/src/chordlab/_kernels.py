"""JIT-compiled inner loops.

Everything here works on 0-based partner arrays (int64, length 2n with
partner[i] the endpoint paired with i).  The circle is cut between 2n and 1,
so crossing tests are pure index comparisons.  Public modules wrap these in
1-based, validated interfaces; nothing in here validates.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# ---------------------------------------------------------------- fenwick


@njit(cache=True, inline="always")
def _bit_add(tree, i, v):
    while i < tree.shape[0]:
        tree[i] += v
        i += i & (-i)


@njit(cache=True, inline="always")
def _bit_sum(tree, i):
    s = 0
    while i > 0:
        s += tree[i]
        i -= i & (-i)
    return s


@njit(cache=True)
def _uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


# ------------------------------------------------- uniform pairing decode


@njit(cache=True)
def decode_pairing(two_n, draws, partner, tree):
    """Sequential-smallest pairing: pair the smallest unused endpoint with
    the draws[i]-th (0-based) smallest of the remaining unused endpoints.

    draws[i] must lie in [0, 2n-2i-2].  partner and tree are scratch
    (len 2n and 2n+1); partner holds the result.
    """
    for i in range(1, two_n + 1):
        tree[i] = i & (-i)
    log = 0
    while (1 << (log + 1)) <= two_n:
        log += 1
    for i in range(two_n):
        partner[i] = -1
    ptr = 0
    n = draws.shape[0]
    for step in range(n):
        while partner[ptr] != -1:
            ptr += 1
        x = ptr
        partner[x] = -2
        _bit_add(tree, x + 1, -1)
        rem = draws[step] + 1
        pos = 0
        bit = 1 << log
        while bit > 0:
            npos = pos + bit
            if npos <= two_n and tree[npos] < rem:
                pos = npos
                rem -= tree[npos]
            bit >>= 1
        y = pos  # 0-based: select returns largest prefix < rank
        _bit_add(tree, y + 1, -1)
        partner[x] = y
        partner[y] = x


@njit(cache=True)
def sample_partner(two_n, draws):
    """Allocate-and-decode convenience for single replicas."""
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    decode_pairing(two_n, draws, partner, tree)
    return partner


@njit(cache=True)
def encode_pairing(partner):
    """Rank of a diagram in the deterministic enumeration order.

    Mixed-radix code built from the same digits decode_pairing consumes;
    fits int64 for n <= 16.
    """
    two_n = partner.shape[0]
    n = two_n // 2
    used = np.zeros(two_n, np.uint8)
    code = np.int64(0)
    remaining = two_n
    x = 0
    for _ in range(n):
        while used[x] == 1:
            x += 1
        used[x] = 1
        y = partner[x]
        r = 0
        for e in range(x + 1, y):
            if used[e] == 0:
                r += 1
        used[y] = 1
        code = code * (remaining - 1) + r
        remaining -= 2
    return code


# ------------------------------------------------------ per-diagram stats


@njit(cache=True)
def deg_of_endpoint1(partner):
    """Crossing count of the chord containing endpoint 1 (position 0)."""
    two_n = partner.shape[0]
    p = partner[0]
    d = 0
    if p - 1 <= two_n - 1 - p:
        for e in range(1, p):
            if partner[e] > p:
                d += 1
    else:
        for e in range(p + 1, two_n):
            q = partner[e]
            if 0 < q < p:
                d += 1
    return d


@njit(cache=True)
def _length_counts_into(partner, jmax, out):
    for j in range(jmax + 1):
        out[j] = 0
    two_n = partner.shape[0]
    for e in range(two_n):
        b = partner[e]
        if b > e:
            inner = b - e - 1
            length = min(inner, two_n - 2 - inner)
            if length <= jmax:
                out[length] += 1


@njit(cache=True)
def length_counts_upto(partner, jmax):
    out = np.empty(jmax + 1, np.int64)
    _length_counts_into(partner, jmax, out)
    return out


@njit(cache=True)
def chord_ids(partner):
    """Chord index per endpoint, in opening (= smaller endpoint) order."""
    two_n = partner.shape[0]
    cid = np.empty(two_n, np.int64)
    idx = 0
    for e in range(two_n):
        if partner[e] > e:
            cid[e] = idx
            cid[partner[e]] = idx
            idx += 1
    return cid


@njit(cache=True)
def degrees_all(partner):
    """Degree of every chord in the intersection graph, O(n log n).

    At the close of chord (a, b): openings still active inside (a, b) are
    right-crossings, closings inside belong to left-crossings or nested
    chords; deg = 2*active + closed - opened disentangles them.
    """
    two_n = partner.shape[0]
    n = two_n // 2
    cid = chord_ids(partner)
    deg = np.zeros(n, np.int64)
    bit_open = np.zeros(two_n + 1, np.int64)
    bit_close = np.zeros(two_n + 1, np.int64)
    bit_active = np.zeros(two_n + 1, np.int64)
    for e in range(two_n):
        if partner[e] > e:
            _bit_add(bit_open, e + 1, 1)
            _bit_add(bit_active, e + 1, 1)
        else:
            a = partner[e]
            lo = a + 2  # 1-based positions a+2 .. e (0-based a+1 .. e-1)
            hi = e
            if hi >= lo:
                op = _bit_sum(bit_open, hi) - _bit_sum(bit_open, lo - 1)
                cl = _bit_sum(bit_close, hi) - _bit_sum(bit_close, lo - 1)
                ac = _bit_sum(bit_active, hi) - _bit_sum(bit_active, lo - 1)
                deg[cid[e]] = 2 * ac + cl - op
            _bit_add(bit_close, e + 1, 1)
            _bit_add(bit_active, a + 1, -1)
    return deg


@njit(cache=True)
def min_degree_slack(partner):
    """min over chords of length(c) - deg(c); >= 0 is the deg <= len law."""
    two_n = partner.shape[0]
    deg = degrees_all(partner)
    cid = chord_ids(partner)
    best = two_n
    for e in range(two_n):
        b = partner[e]
        if b > e:
            inner = b - e - 1
            length = min(inner, two_n - 2 - inner)
            s = length - deg[cid[e]]
            if s < best:
                best = s
    return best


# ----------------------------------------------------------- monolithic


@njit(cache=True)
def _mono_core(partner, cid, uf, st_comp, st_cnt, st_min, ord_of):
    """Monolithicity without materializing edges.

    Connectivity comes from a sweep with a component-compressed stack of
    open chords: when a chord closes, every chord opened after it that is
    still open crosses it, so whole stack segments merge at once.
    """
    two_n = partner.shape[0]
    n = two_n // 2
    # condition (ii): two distinct simple chords on adjacent endpoint pairs
    for e in range(two_n):
        if partner[e] == (e + 1) % two_n:
            e2 = (e + 2) % two_n
            if partner[e2] == (e2 + 1) % two_n and cid[e2] != cid[e]:
                return np.uint8(0)
    if n == 1:
        return np.uint8(1)
    for c in range(n):
        uf[c] = c
    top = -1
    onum = 0
    for e in range(two_n):
        c = cid[e]
        if partner[e] > e:
            ord_of[c] = onum
            top += 1
            st_comp[top] = c
            st_cnt[top] = 1
            st_min[top] = onum
            onum += 1
        else:
            r = _uf_find(uf, c)
            extra = 0
            while st_min[top] > ord_of[c]:
                r2 = _uf_find(uf, st_comp[top])
                if r2 != r:
                    uf[r2] = r
                extra += st_cnt[top]
                top -= 1
            r2 = _uf_find(uf, st_comp[top])
            if r2 != r:
                uf[r2] = r
            st_comp[top] = r
            st_cnt[top] += extra - 1
            if st_cnt[top] == 0:
                top -= 1
    root = _uf_find(uf, cid[0])
    for e in range(two_n):
        b = partner[e]
        if b > e:
            simple = (b - e == 1) or (e == 0 and b == two_n - 1)
            if not simple and _uf_find(uf, cid[e]) != root:
                return np.uint8(0)
    return np.uint8(1)


@njit(cache=True)
def monolithic_flag(partner):
    two_n = partner.shape[0]
    n = two_n // 2
    cid = chord_ids(partner)
    uf = np.empty(n, np.int64)
    st_comp = np.empty(n, np.int64)
    st_cnt = np.empty(n, np.int64)
    st_min = np.empty(n, np.int64)
    ord_of = np.empty(n, np.int64)
    return _mono_core(partner, cid, uf, st_comp, st_cnt, st_min, ord_of)


# --------------------------------------------------------------- k-core


@njit(cache=True)
def kcore_alive(partner, k):
    """Peel vertices of degree < k; returns (alive mask by chord id, removed)."""
    two_n = partner.shape[0]
    n = two_n // 2
    cid = chord_ids(partner)
    ca = np.empty(n, np.int64)
    cb = np.empty(n, np.int64)
    for e in range(two_n):
        if partner[e] > e:
            ca[cid[e]] = e
            cb[cid[e]] = partner[e]
    deg = degrees_all(partner)
    alive = np.ones(n, np.uint8)
    inq = np.zeros(n, np.uint8)
    queue = np.empty(n, np.int64)
    qt = 0
    for c in range(n):
        if deg[c] < k:
            queue[qt] = c
            qt += 1
            inq[c] = 1
    qh = 0
    removed = 0
    while qh < qt:
        c = queue[qh]
        qh += 1
        alive[c] = 0
        removed += 1
        a = ca[c]
        b = cb[c]
        inner = b - a - 1
        if inner <= two_n - 2 - inner:
            for e in range(a + 1, b):
                p = partner[e]
                if p < a or p > b:
                    d = cid[e]
                    if alive[d] == 1:
                        deg[d] -= 1
                        if deg[d] < k and inq[d] == 0:
                            queue[qt] = d
                            qt += 1
                            inq[d] = 1
        else:
            for e in range(b + 1, two_n):
                p = partner[e]
                if a < p < b:
                    d = cid[e]
                    if alive[d] == 1:
                        deg[d] -= 1
                        if deg[d] < k and inq[d] == 0:
                            queue[qt] = d
                            qt += 1
                            inq[d] = 1
            for e in range(a):
                p = partner[e]
                if a < p < b:
                    d = cid[e]
                    if alive[d] == 1:
                        deg[d] -= 1
                        if deg[d] < k and inq[d] == 0:
                            queue[qt] = d
                            qt += 1
                            inq[d] = 1
    return alive, removed


@njit(cache=True)
def kcore_vs_len(partner, k):
    """(removed count, whether the k-core equals the length >= k subdiagram)."""
    two_n = partner.shape[0]
    alive, removed = kcore_alive(partner, k)
    cid = chord_ids(partner)
    equal = np.uint8(1)
    for e in range(two_n):
        b = partner[e]
        if b > e:
            inner = b - e - 1
            length = min(inner, two_n - 2 - inner)
            want = 1 if length >= k else 0
            if alive[cid[e]] != want:
                equal = np.uint8(0)
                break
    return removed, equal


# ------------------------------------------------------- crossing edges


@njit(cache=True)
def crossing_edges(partner):
    """All crossing pairs as (u, v) chord-id arrays with u < v.

    Open chords sit in a linked list in opening order; a closing chord
    crosses exactly the part of the list behind it.
    """
    two_n = partner.shape[0]
    n = two_n // 2
    cid = chord_ids(partner)
    nxt = np.empty(n, np.int64)
    prv = np.empty(n, np.int64)
    m = 0
    for _pass in range(2):
        if _pass == 1:
            eu = np.empty(m, np.int64)
            ev = np.empty(m, np.int64)
        else:
            eu = np.empty(0, np.int64)
            ev = np.empty(0, np.int64)
        head = -1
        tail = -1
        t = 0
        for e in range(two_n):
            c = cid[e]
            if partner[e] > e:
                if tail == -1:
                    head = c
                else:
                    nxt[tail] = c
                prv[c] = tail
                nxt[c] = -1
                tail = c
            else:
                w = nxt[c]
                while w != -1:
                    if _pass == 1:
                        eu[t] = c
                        ev[t] = w
                    t += 1
                    w = nxt[w]
                p = prv[c]
                q = nxt[c]
                if p == -1:
                    head = q
                else:
                    nxt[p] = q
                if q == -1:
                    tail = p
                else:
                    prv[q] = p
        if _pass == 0:
            m = t
    return eu, ev


# ------------------------------------------------------------------ scc


@njit(cache=True)
def tarjan_scc(nv, offs, targets):
    """Iterative Tarjan; returns (component label per vertex, #components)."""
    index = np.full(nv, -1, np.int64)
    low = np.zeros(nv, np.int64)
    on = np.zeros(nv, np.uint8)
    stack = np.empty(nv, np.int64)
    sp = 0
    wv = np.empty(nv + 1, np.int64)
    we = np.empty(nv + 1, np.int64)
    comp = np.full(nv, -1, np.int64)
    ncomp = 0
    counter = 0
    for s in range(nv):
        if index[s] != -1:
            continue
        wp = 0
        wv[0] = s
        we[0] = offs[s]
        index[s] = counter
        low[s] = counter
        counter += 1
        stack[sp] = s
        sp += 1
        on[s] = 1
        while wp >= 0:
            v = wv[wp]
            ei = we[wp]
            if ei < offs[v + 1]:
                we[wp] = ei + 1
                w = targets[ei]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    on[w] = 1
                    wp += 1
                    wv[wp] = w
                    we[wp] = offs[w]
                elif on[w] == 1:
                    if index[w] < low[v]:
                        low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        w = stack[sp - 1]
                        sp -= 1
                        on[w] = 0
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                wp -= 1
                if wp >= 0:
                    u = wv[wp]
                    if low[v] < low[u]:
                        low[u] = low[v]
    return comp, ncomp


@njit(cache=True)
def build_csr(nv, src, dst):
    m = src.shape[0]
    outdeg = np.zeros(nv, np.int64)
    for t in range(m):
        outdeg[src[t]] += 1
    offs = np.zeros(nv + 1, np.int64)
    for i in range(nv):
        offs[i + 1] = offs[i] + outdeg[i]
    targets = np.empty(m, np.int64)
    fill = offs[:nv].copy()
    for t in range(m):
        targets[fill[src[t]]] = dst[t]
        fill[src[t]] += 1
    return offs, targets


@njit(cache=True)
def scc_stats(nv, eu, ev, bits):
    """(trivial components, components of size > 1, giant size) for the
    orientation given by bits over edges (eu, ev): bit 1 means eu -> ev."""
    m = eu.shape[0]
    src = np.empty(m, np.int64)
    dst = np.empty(m, np.int64)
    for t in range(m):
        if bits[t] == 1:
            src[t] = eu[t]
            dst[t] = ev[t]
        else:
            src[t] = ev[t]
            dst[t] = eu[t]
    offs, targets = build_csr(nv, src, dst)
    comp, ncomp = tarjan_scc(nv, offs, targets)
    sizes = np.zeros(ncomp, np.int64)
    for i in range(nv):
        sizes[comp[i]] += 1
    trivial = 0
    nontrivial = 0
    giant = 0
    for c in range(ncomp):
        if sizes[c] == 1:
            trivial += 1
        else:
            nontrivial += 1
        if sizes[c] > giant:
            giant = sizes[c]
    return trivial, nontrivial, giant


# ------------------------------------------------- extremal statistics


@njit(cache=True)
def omega_value(partner):
    """Maximum pairwise-crossing set: anchor each chord, take the longest
    y-increasing chain among the chords opening inside it and closing
    after it."""
    two_n = partner.shape[0]
    n = two_n // 2
    if n == 0:
        return 0
    tails = np.empty(n, np.int64)
    best = 1
    for u in range(two_n):
        v = partner[u]
        if v < u:
            continue
        tl = 0
        for x in range(u + 1, v):
            y = partner[x]
            if y > v:
                lo = 0
                hi = tl
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if tails[mid] < y:
                        lo = mid + 1
                    else:
                        hi = mid
                tails[lo] = y
                if lo == tl:
                    tl += 1
        if 1 + tl > best:
            best = 1 + tl
    return best


@njit(cache=True)
def omega_witness(partner, omega):
    """Lexicographically smallest maximum clique, flattened [a1,b1,a2,b2,..]
    (1-based).  Scans anchors in chord order; the first anchor reaching
    omega owns the lex-min witness."""
    two_n = partner.shape[0]
    n = two_n // 2
    out = np.empty(2 * omega, np.int64)
    if omega == 1:
        out[0] = 1
        out[1] = partner[0] + 1
        return out
    xs = np.empty(n, np.int64)
    ys = np.empty(n, np.int64)
    f = np.empty(n, np.int64)
    tails = np.empty(n, np.int64)
    for u in range(two_n):
        v = partner[u]
        if v < u:
            continue
        d = 0
        for x in range(u + 1, v):
            y = partner[x]
            if y > v:
                xs[d] = x
                ys[d] = y
                d += 1
        if d < omega - 1:
            continue
        tl = 0
        for t in range(d):
            y = ys[t]
            lo = 0
            hi = tl
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            tails[lo] = y
            if lo == tl:
                tl += 1
        if 1 + tl != omega:
            continue
        # f[t] = longest increasing chain starting at t (O(d^2): witness path only)
        for t in range(d - 1, -1, -1):
            bestf = 1
            for s in range(t + 1, d):
                if ys[s] > ys[t] and f[s] + 1 > bestf:
                    bestf = f[s] + 1
            f[t] = bestf
        out[0] = u + 1
        out[1] = v + 1
        need = omega - 1
        last_y = -1
        w = 2
        for t in range(d):
            if f[t] >= need and ys[t] > last_y:
                out[w] = xs[t] + 1
                out[w + 1] = ys[t] + 1
                w += 2
                last_y = ys[t]
                need -= 1
                if need == 0:
                    break
        return out
    return np.empty(0, np.int64)  # unreachable for a correct omega


@njit(cache=True)
def nesting_value(partner):
    """Longest nested chain: chords in opening order, longest strictly
    decreasing subsequence of closings (patience on negated values)."""
    two_n = partner.shape[0]
    n = two_n // 2
    tails = np.empty(n, np.int64)
    tl = 0
    for e in range(two_n):
        b = partner[e]
        if b < e:
            continue
        y = -b
        lo = 0
        hi = tl
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < y:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = y
        if lo == tl:
            tl += 1
    return tl


@njit(cache=True)
def nesting_witness(partner, depth):
    """Lexicographically smallest maximum nesting, flattened (1-based)."""
    two_n = partner.shape[0]
    n = two_n // 2
    xs = np.empty(n, np.int64)
    ys = np.empty(n, np.int64)
    d = 0
    for e in range(two_n):
        if partner[e] > e:
            xs[d] = e
            ys[d] = partner[e]
            d += 1
    f = np.empty(d, np.int64)
    for t in range(d - 1, -1, -1):
        bestf = 1
        for s in range(t + 1, d):
            if xs[s] > xs[t] and ys[s] < ys[t] and f[s] + 1 > bestf:
                bestf = f[s] + 1
        f[t] = bestf
    out = np.empty(2 * depth, np.int64)
    need = depth
    last_y = two_n
    w = 0
    for t in range(d):
        if f[t] >= need and ys[t] < last_y:
            out[w] = xs[t] + 1
            out[w + 1] = ys[t] + 1
            w += 2
            last_y = ys[t]
            need -= 1
            if need == 0:
                break
    return out


@njit(cache=True)
def alpha_dp_into(partner, table, want_witness):
    """Maximum non-crossing subset via interval DP.

    table is a reusable (2n+2) x (2n+1) int16 buffer whose j < i cells are
    zero and stay zero; every i <= j cell is overwritten here.  Witness is
    the lex-min optimum (prefer taking the chord at the smallest open
    endpoint whenever optimal).
    """
    two_n = partner.shape[0]
    for i in range(two_n, 0, -1):
        p = partner[i - 1] + 1
        row = table[i]
        nrow = table[i + 1]
        if p > i:
            for j in range(i, two_n + 1):
                best = nrow[j]
                if p <= j:
                    v = 1 + nrow[p - 1] + table[p + 1, j]
                    if v > best:
                        best = v
                row[j] = best
        else:
            for j in range(i, two_n + 1):
                row[j] = nrow[j]
    alpha = int(table[1, two_n])
    if not want_witness:
        return alpha, np.empty(0, np.int64)
    out = np.empty(2 * alpha, np.int64)
    sti = np.empty(two_n + 2, np.int64)
    stj = np.empty(two_n + 2, np.int64)
    sti[0] = 1
    stj[0] = two_n
    sp = 1
    w = 0
    while sp > 0:
        sp -= 1
        i = sti[sp]
        j = stj[sp]
        while i <= j:
            p = partner[i - 1] + 1
            if i < p <= j and table[i, j] == 1 + table[i + 1, p - 1] + table[p + 1, j]:
                out[w] = i
                out[w + 1] = p
                w += 2
                sti[sp] = p + 1
                stj[sp] = j
                sp += 1
                j = p - 1
            i += 1
    return alpha, out


# ------------------------------------------------------- batch drivers


@njit(cache=True)
def batch_uniform_codes(two_n, draws):
    B = draws.shape[0]
    out = np.empty(B, np.int64)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        out[r] = encode_pairing(partner)
    return out


@njit(cache=True)
def batch_deg_c1(two_n, draws):
    B = draws.shape[0]
    out = np.empty(B, np.int64)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        out[r] = deg_of_endpoint1(partner)
    return out


@njit(cache=True)
def batch_length_counts(two_n, draws, jmax):
    B = draws.shape[0]
    out = np.empty((B, jmax + 1), np.int64)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        _length_counts_into(partner, jmax, out[r])
    return out


@njit(cache=True)
def batch_monolithic(two_n, draws):
    B = draws.shape[0]
    n = two_n // 2
    out = np.empty(B, np.uint8)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    uf = np.empty(n, np.int64)
    st_comp = np.empty(n, np.int64)
    st_cnt = np.empty(n, np.int64)
    st_min = np.empty(n, np.int64)
    ord_of = np.empty(n, np.int64)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        cid = chord_ids(partner)
        out[r] = _mono_core(partner, cid, uf, st_comp, st_cnt, st_min, ord_of)
    return out


@njit(cache=True)
def batch_kcore(two_n, draws, k):
    B = draws.shape[0]
    removed = np.empty(B, np.int64)
    equal = np.empty(B, np.uint8)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        rem, eq = kcore_vs_len(partner, k)
        removed[r] = rem
        equal[r] = eq
    return removed, equal


@njit(cache=True)
def batch_min_slack(two_n, draws):
    B = draws.shape[0]
    out = np.empty(B, np.int64)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        out[r] = min_degree_slack(partner)
    return out


@njit(cache=True)
def batch_extremal(two_n, draws, with_alpha):
    B = draws.shape[0]
    omega = np.empty(B, np.int64)
    alpha = np.zeros(B, np.int64)
    nest = np.empty(B, np.int64)
    partner = np.empty(two_n, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    if with_alpha:
        table = np.zeros((two_n + 2, two_n + 1), np.int16)
    else:
        table = np.zeros((1, 1), np.int16)
    for r in range(B):
        decode_pairing(two_n, draws[r], partner, tree)
        omega[r] = omega_value(partner)
        nest[r] = nesting_value(partner)
        if with_alpha:
            a, _ = alpha_dp_into(partner, table, False)
            alpha[r] = a
    return omega, alpha, nest


# ----------------------------------------------- growth-process kernels


@njit(cache=True)
def _cont_insert(order, K, t):
    """One continuous-model step: decode draw t into a gap pair (i <= j)
    over the 2K gaps and insert the two endpoints of chord K.  order must
    have room for 2K+2 entries; returns nothing."""
    M = 2 * K
    i = 1
    tt = t
    while tt >= M - i + 1:
        tt -= M - i + 1
        i += 1
    j = i + tt
    # insert before index i, then before index j+1 (gap j shifted by one)
    for pos in range(M, i - 1, -1):
        order[pos] = order[pos - 1]
    order[i] = K
    for pos in range(M + 1, j, -1):
        order[pos] = order[pos - 1]
    order[j + 1] = K


@njit(cache=True)
def _order_to_partner(order, two_k, partner, firstpos):
    for pos in range(two_k):
        c = order[pos]
        if firstpos[c] == -1:
            firstpos[c] = pos
        else:
            partner[pos] = firstpos[c]
            partner[firstpos[c]] = pos
    for pos in range(two_k):
        firstpos[order[pos]] = -1


@njit(cache=True)
def batch_continuous_final(n, draws):
    B = draws.shape[0]
    out = np.empty(B, np.int64)
    order = np.empty(2 * n, np.int64)
    partner = np.empty(2 * n, np.int64)
    firstpos = np.full(n, -1, np.int64)
    for r in range(B):
        order[0] = 0
        order[1] = 0
        for s in range(n - 1):
            _cont_insert(order, s + 1, draws[r, s])
        _order_to_partner(order, 2 * n, partner, firstpos)
        out[r] = encode_pairing(partner)
    return out


@njit(cache=True)
def batch_continuous_joint(n, draws):
    B = draws.shape[0]
    out = np.empty((B, n), np.int64)
    order = np.empty(2 * n, np.int64)
    partner = np.empty(2 * n, np.int64)
    firstpos = np.full(n, -1, np.int64)
    for r in range(B):
        order[0] = 0
        order[1] = 0
        partner[0] = 1
        partner[1] = 0
        out[r, 0] = 0
        K = 1
        for s in range(n - 1):
            _cont_insert(order, K, draws[r, s])
            K += 1
            _order_to_partner(order[: 2 * K], 2 * K, partner, firstpos)
            out[r, K - 1] = encode_pairing(partner[: 2 * K])
    return out


@njit(cache=True)
def batch_switching(n_run, draws):
    """Monolithicity flags of every continuous-model state U_1..U_n_run."""
    B = draws.shape[0]
    mono = np.zeros((B, n_run + 1), np.uint8)
    order = np.empty(2 * n_run, np.int64)
    partner = np.empty(2 * n_run, np.int64)
    firstpos = np.full(n_run, -1, np.int64)
    uf = np.empty(n_run, np.int64)
    st_comp = np.empty(n_run, np.int64)
    st_cnt = np.empty(n_run, np.int64)
    st_min = np.empty(n_run, np.int64)
    ord_of = np.empty(n_run, np.int64)
    for r in range(B):
        order[0] = 0
        order[1] = 0
        partner[0] = 1
        partner[1] = 0
        mono[r, 1] = 1  # single chord is monolithic
        K = 1
        for s in range(n_run - 1):
            _cont_insert(order, K, draws[r, s])
            K += 1
            pview = partner[: 2 * K]
            _order_to_partner(order[: 2 * K], 2 * K, pview, firstpos)
            cid = chord_ids(pview)
            mono[r, K] = _mono_core(pview, cid, uf, st_comp, st_cnt, st_min, ord_of)
    return mono


@njit(cache=True)
def _discrete_decode_step(tree, two_n, log, rank1):
    pos = 0
    rem = rank1
    bit = 1 << log
    while bit > 0:
        npos = pos + bit
        if npos <= two_n and tree[npos] < rem:
            pos = npos
            rem -= tree[npos]
        bit >>= 1
    return pos  # 0-based endpoint


@njit(cache=True)
def _discrete_run(n, draws_row, partner, tree):
    """Discrete model on [2n]: pair endpoint 1 first, then uniform unused
    pairs; fills partner with -1 for never-used (none at the end)."""
    two_n = 2 * n
    for i in range(1, two_n + 1):
        tree[i] = i & (-i)
    log = 0
    while (1 << (log + 1)) <= two_n:
        log += 1
    for i in range(two_n):
        partner[i] = -1
    # step 1: endpoint 1 with a uniform other endpoint
    _bit_add(tree, 1, -1)
    y = _discrete_decode_step(tree, two_n, log, draws_row[0] + 1)
    _bit_add(tree, y + 1, -1)
    partner[0] = y
    partner[y] = 0
    t = 1
    for _k in range(1, n):
        x = _discrete_decode_step(tree, two_n, log, draws_row[t] + 1)
        _bit_add(tree, x + 1, -1)
        t += 1
        y = _discrete_decode_step(tree, two_n, log, draws_row[t] + 1)
        _bit_add(tree, y + 1, -1)
        t += 1
        partner[x] = y
        partner[y] = x


@njit(cache=True)
def batch_discrete_final(n, draws):
    B = draws.shape[0]
    out = np.empty(B, np.int64)
    partner = np.empty(2 * n, np.int64)
    tree = np.empty(2 * n + 1, np.int64)
    for r in range(B):
        _discrete_run(n, draws[r], partner, tree)
        out[r] = encode_pairing(partner)
    return out


@njit(cache=True)
def batch_discrete_joint(n, draws):
    """Code of tau(state) after every step of the discrete model."""
    B = draws.shape[0]
    two_n = 2 * n
    out = np.empty((B, n), np.int64)
    partner = np.full(two_n, -1, np.int64)
    tree = np.empty(two_n + 1, np.int64)
    rank = np.empty(two_n, np.int64)
    comp = np.empty(two_n, np.int64)
    for r in range(B):
        for i in range(1, two_n + 1):
            tree[i] = i & (-i)
        log = 0
        while (1 << (log + 1)) <= two_n:
            log += 1
        for i in range(two_n):
            partner[i] = -1
        _bit_add(tree, 1, -1)
        y = _discrete_decode_step(tree, two_n, log, draws[r, 0] + 1)
        _bit_add(tree, y + 1, -1)
        partner[0] = y
        partner[y] = 0
        t = 1
        for k in range(1, n + 1):
            if k > 1:
                x = _discrete_decode_step(tree, two_n, log, draws[r, t] + 1)
                _bit_add(tree, x + 1, -1)
                t += 1
                y = _discrete_decode_step(tree, two_n, log, draws[r, t] + 1)
                _bit_add(tree, y + 1, -1)
                t += 1
                partner[x] = y
                partner[y] = x
            # tau-compress the k used chords and encode
            idx = 0
            for e in range(two_n):
                if partner[e] != -1:
                    rank[e] = idx
                    idx += 1
            for e in range(two_n):
                if partner[e] != -1:
                    comp[rank[e]] = rank[partner[e]]
            out[r, k - 1] = encode_pairing(comp[: 2 * k])
    return out
