"""Hot enumeration kernels: coset layer histograms and lattice backtracking.

Each kernel has a numba @njit implementation and a numpy/python twin with
identical integer semantics; `_backend.USING_NUMBA` picks at import time.
All arithmetic is int64 with ranges pre-checked by the callers, so both
paths are exact.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._backend import USING_NUMBA

_INF = 1 << 40
_ORD_CAP = 64


# ---------------------------------------------------------------------------
# numpy / python reference implementations

def _vec_ordp(arr, p):
    """Vectorized p-adic valuation; zeros map to _INF."""
    a = np.abs(arr)
    v = np.zeros(a.shape, dtype=np.int64)
    zero = a == 0
    a = np.where(zero, 1, a)
    for _ in range(_ORD_CAP):
        div = a % p == 0
        if not div.any():
            break
        v += div
        a = np.where(div, a // p, a)
    v[zero] = _INF
    return v


def _accumulate_layers(vals, E):
    """Given minor-gcd valuations v_1..v_n (arrays), sum max(0, E - s_k)."""
    lay = np.zeros(vals[0].shape, dtype=np.int64)
    prev = np.zeros(vals[0].shape, dtype=np.int64)
    for vk in vals:
        fin = vk < _INF
        sk = np.where(fin, vk - prev, _INF)
        lay += np.maximum(0, np.where(sk >= _INF, -1, E - sk))
        prev = np.where(fin, vk, prev)
    return lay


def _layer_hist_numpy_n2(diag_half, offd, p, E, start, stop):
    pE = p ** E
    hist = np.zeros((E + 1) * pE, dtype=np.int64)
    block = 1 << 18
    d0, d1 = int(diag_half[0]), int(diag_half[1])
    b01 = int(offd[0][1])
    for lo in range(start, stop, block):
        idx = np.arange(lo, min(lo + block, stop), dtype=np.int64)
        a = idx % pE
        b = (idx // pE) % pE
        c = idx // (pE * pE)
        v1 = np.minimum(np.minimum(_vec_ordp(a, p), _vec_ordp(b, p)), _vec_ordp(c, p))
        v2 = _vec_ordp(a * c - b * b, p)
        lay = _accumulate_layers([v1, v2], E)
        keep = lay <= E
        tval = (d0 * a + b01 * b + d1 * c) % pE
        np.add.at(hist, lay[keep] * pE + tval[keep], 1)
    return hist.reshape(E + 1, pE)


_PAIRS4 = [(i, j) for i in range(4) for j in range(i, 4)]
_COMB2 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
_COMB3 = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def _det3_arr(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _layer_hist_numpy_n4(diag_half, offd, p, E, start, stop):
    pE = p ** E
    hist = np.zeros((E + 1) * pE, dtype=np.int64)
    block = 1 << 14
    for lo in range(start, stop, block):
        idx = np.arange(lo, min(lo + block, stop), dtype=np.int64)
        rem = idx
        y = {}
        for (i, j) in _PAIRS4:
            d = rem % pE
            rem = rem // pE
            y[i, j] = d
            y[j, i] = d
        v1 = np.full(len(idx), _INF, dtype=np.int64)
        for i, j in _PAIRS4:
            v1 = np.minimum(v1, _vec_ordp(y[i, j], p))
        v2 = np.full(len(idx), _INF, dtype=np.int64)
        for r in _COMB2:
            for c in _COMB2:
                det = y[r[0], c[0]] * y[r[1], c[1]] - y[r[0], c[1]] * y[r[1], c[0]]
                v2 = np.minimum(v2, _vec_ordp(det, p))
        v3 = np.full(len(idx), _INF, dtype=np.int64)
        for r in _COMB3:
            for c in _COMB3:
                m = [[y[r[u], c[w]] for w in range(3)] for u in range(3)]
                v3 = np.minimum(v3, _vec_ordp(_det3_arr(m), p))
        det4 = np.zeros(len(idx), dtype=np.int64)
        sign = 1
        for c0 in range(4):
            cols = [c for c in range(4) if c != c0]
            m = [[y[r, c] for c in cols] for r in (1, 2, 3)]
            det4 = det4 + sign * y[0, c0] * _det3_arr(m)
            sign = -sign
        v4 = _vec_ordp(det4, p)
        lay = _accumulate_layers([v1, v2, v3, v4], E)
        tval = np.zeros(len(idx), dtype=np.int64)
        for i in range(4):
            tval = tval + int(diag_half[i]) * y[i, i]
            for j in range(i + 1, 4):
                tval = tval + int(offd[i][j]) * y[i, j]
        tval %= pE
        keep = lay <= E
        np.add.at(hist, lay[keep] * pE + tval[keep], 1)
    return hist.reshape(E + 1, pE)


def _short_vectors_python(Rint, w, c, QB, Q, n, record, top_lo=None, top_hi=None):
    """Exact scaled-integer depth-first enumeration; calls record(norm, x)."""
    x = [0] * n

    def bounds(i, budget, U):
        S = math.isqrt(budget // w[i])
        lo = -((S + U) // c[i])
        hi = (S - U) // c[i]
        return lo, hi

    def descend(i, budget):
        U = sum(Rint[i][j] * x[j] for j in range(i + 1, n))
        lo, hi = bounds(i, budget, U)
        if i == n - 1:
            if top_lo is not None:
                lo = max(lo, top_lo)
            if top_hi is not None:
                hi = min(hi, top_hi)
        for xi in range(lo, hi + 1):
            x[i] = xi
            N = c[i] * xi + U
            rem = budget - w[i] * N * N
            if i == 0:
                if any(x):
                    record((QB - rem) // Q, tuple(x))
            else:
                descend(i - 1, rem)
        x[i] = 0

    descend(n - 1, QB)


def _rep_count_python(coords, gxs, slice_lo, slice_hi, tgt, j, start, stop):
    """Survivor-filtering DFS over columns; vectorized dot filters."""
    total = 0

    def rec(level, survivors):
        nonlocal total
        if level == j - 1:
            total += len(survivors[level])
            return
        for vidx in survivors[level]:
            nxt = list(survivors)
            ok = True
            for a in range(level + 1, j):
                arr = survivors[a]
                dots = coords[arr] @ gxs[vidx]
                arr = arr[dots == tgt[level][a]]
                if len(arr) == 0:
                    ok = False
                    break
                nxt[a] = arr
            if ok:
                rec(level + 1, nxt)

    base = [np.arange(slice_lo[a], slice_hi[a], dtype=np.int64) for a in range(j)]
    base[0] = np.arange(max(slice_lo[0], start), min(slice_hi[0], stop), dtype=np.int64)
    if j == 1:
        return len(base[0])
    rec(0, base)
    return total


# ---------------------------------------------------------------------------
# numba kernels

if USING_NUMBA:
    from numba import njit

    @njit(cache=True, nogil=True)
    def _nb_ordp(x, p):
        if x == 0:
            return _INF
        if x < 0:
            x = -x
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    @njit(cache=True, nogil=True)
    def _nb_det3(y, r0, r1, r2, c0, c1, c2):
        return (y[r0, c0] * (y[r1, c1] * y[r2, c2] - y[r1, c2] * y[r2, c1])
                - y[r0, c1] * (y[r1, c0] * y[r2, c2] - y[r1, c2] * y[r2, c0])
                + y[r0, c2] * (y[r1, c0] * y[r2, c1] - y[r1, c1] * y[r2, c0]))

    @njit(cache=True, nogil=True)
    def _nb_layer_hist(diag_half, offd, n, p, E, start, stop):
        pE = 1
        for _ in range(E):
            pE *= p
        hist = np.zeros((E + 1) * pE, dtype=np.int64)
        y = np.zeros((4, 4), dtype=np.int64)
        for idx in range(start, stop):
            rem = idx
            for i in range(n):
                for j in range(i, n):
                    d = rem % pE
                    rem //= pE
                    y[i, j] = d
                    y[j, i] = d
            v1 = _INF
            for i in range(n):
                for j in range(i, n):
                    o = _nb_ordp(y[i, j], p)
                    if o < v1:
                        v1 = o
            if n == 2:
                v2 = _nb_ordp(y[0, 0] * y[1, 1] - y[0, 1] * y[1, 0], p)
                lay = 0
                if v1 < _INF:
                    if E - v1 > 0:
                        lay += E - v1
                    if v2 < _INF:
                        s2 = v2 - v1
                        if E - s2 > 0:
                            lay += E - s2
            else:
                v2 = _INF
                for r0 in range(4):
                    for r1 in range(r0 + 1, 4):
                        for c0 in range(4):
                            for c1 in range(c0 + 1, 4):
                                det = y[r0, c0] * y[r1, c1] - y[r0, c1] * y[r1, c0]
                                o = _nb_ordp(det, p)
                                if o < v2:
                                    v2 = o
                v3 = _INF
                for r0 in range(4):
                    rr0 = 1 if r0 == 0 else 0
                    rr1 = 2 if r0 <= 1 else 1
                    rr2 = 3 if r0 <= 2 else 2
                    for c0 in range(4):
                        cc0 = 1 if c0 == 0 else 0
                        cc1 = 2 if c0 <= 1 else 1
                        cc2 = 3 if c0 <= 2 else 2
                        o = _nb_ordp(_nb_det3(y, rr0, rr1, rr2, cc0, cc1, cc2), p)
                        if o < v3:
                            v3 = o
                det4 = np.int64(0)
                sign = np.int64(1)
                for c0 in range(4):
                    cc0 = 1 if c0 == 0 else 0
                    cc1 = 2 if c0 <= 1 else 1
                    cc2 = 3 if c0 <= 2 else 2
                    det4 += sign * y[0, c0] * _nb_det3(y, 1, 2, 3, cc0, cc1, cc2)
                    sign = -sign
                v4 = _nb_ordp(det4, p)
                lay = 0
                prev = np.int64(0)
                alive = True
                for vk in (v1, v2, v3, v4):
                    if not alive or vk >= _INF:
                        alive = False
                        continue
                    sk = vk - prev
                    if E - sk > 0:
                        lay += E - sk
                    prev = vk
            if lay <= E:
                tv = np.int64(0)
                for i in range(n):
                    tv += diag_half[i] * y[i, i]
                    for j in range(i + 1, n):
                        tv += offd[i, j] * y[i, j]
                tv %= pE
                if tv < 0:
                    tv += pE
                hist[lay * pE + tv] += 1
        return hist

    @njit(cache=True, nogil=True)
    def _nb_isqrt(v):
        if v <= 0:
            return np.int64(0)
        s = np.int64(math.sqrt(v))
        while s * s > v:
            s -= 1
        while (s + 1) * (s + 1) <= v:
            s += 1
        return s

    @njit(cache=True, nogil=True)
    def _nb_short_vectors(Rint, w, c, QB, Q, n, bound, top_lo, top_hi,
                          coords_out, norms_out, list_mode):
        counts = np.zeros(bound + 1, dtype=np.int64)
        x = np.zeros(n, dtype=np.int64)
        lo = np.zeros(n, dtype=np.int64)
        hi = np.zeros(n, dtype=np.int64)
        bud = np.zeros(n, dtype=np.int64)
        Uarr = np.zeros(n, dtype=np.int64)
        nout = 0
        i = n - 1
        bud[i] = QB
        Uarr[i] = 0
        S = _nb_isqrt(QB // w[i])
        lo[i] = -((S + Uarr[i]) // c[i])
        hi[i] = (S - Uarr[i]) // c[i]
        if lo[i] < top_lo:
            lo[i] = top_lo
        if hi[i] > top_hi:
            hi[i] = top_hi
        x[i] = lo[i] - 1
        while True:
            x[i] += 1
            if x[i] > hi[i]:
                i += 1
                if i >= n:
                    break
                continue
            N = c[i] * x[i] + Uarr[i]
            rem = bud[i] - w[i] * N * N
            if i == 0:
                nonzero = False
                for k in range(n):
                    if x[k] != 0:
                        nonzero = True
                        break
                if nonzero:
                    norm = (QB - rem) // Q
                    counts[norm] += 1
                    if list_mode:
                        for k in range(n):
                            coords_out[nout, k] = x[k]
                        norms_out[nout] = norm
                        nout += 1
            else:
                i -= 1
                bud[i] = rem
                U = np.int64(0)
                for jj in range(i + 1, n):
                    U += Rint[i, jj] * x[jj]
                Uarr[i] = U
                S = _nb_isqrt(rem // w[i])
                lo[i] = -((S + U) // c[i])
                hi[i] = (S - U) // c[i]
                x[i] = lo[i] - 1
        return counts, nout

    @njit(cache=True, nogil=True)
    def _nb_rep_count(coords, gxs, slice_lo, slice_hi, tgt, j, start, stop):
        Kmax = 0
        for a in range(j):
            k = slice_hi[a] - slice_lo[a]
            if k > Kmax:
                Kmax = k
        n = coords.shape[1]
        buf = np.zeros((j, j, Kmax), dtype=np.int64)
        lens = np.zeros((j, j), dtype=np.int64)
        pos = np.zeros(j, dtype=np.int64)
        for a in range(j):
            a_lo = slice_lo[a]
            a_hi = slice_hi[a]
            if a == 0:
                a_lo = start
                a_hi = stop
            k = 0
            for v in range(a_lo, a_hi):
                buf[0, a, k] = v
                k += 1
            lens[0, a] = k
        if j == 1:
            return lens[0, 0]
        total = np.int64(0)
        level = 0
        pos[0] = -1
        while True:
            pos[level] += 1
            if pos[level] >= lens[level, level]:
                level -= 1
                if level < 0:
                    break
                continue
            vidx = buf[level, level, pos[level]]
            ok = True
            for a in range(level + 1, j):
                t = tgt[level, a]
                k = 0
                for q in range(lens[level, a]):
                    wv = buf[level, a, q]
                    dot = np.int64(0)
                    for r in range(n):
                        dot += coords[wv, r] * gxs[vidx, r]
                    if dot == t:
                        buf[level + 1, a, k] = wv
                        k += 1
                lens[level + 1, a] = k
                if k == 0:
                    ok = False
                    break
            if not ok:
                continue
            if level + 1 == j - 1:
                total += lens[j - 1, j - 1]
                continue
            level += 1
            pos[level] = -1
        return total


# ---------------------------------------------------------------------------
# drivers (thread splitting + backend dispatch)

def layer_histogram(diag_half, offd, n, p, E, threads=1):
    """Histogram over (layer, trace residue) of all cosets y/p^E, y symmetric."""
    t = n * (n + 1) // 2
    total = (p ** E) ** t
    dh = np.asarray(diag_half, dtype=np.int64)
    od = np.asarray(offd, dtype=np.int64)

    if USING_NUMBA:
        def fn(a, b):
            return _nb_layer_hist(dh, od, n, p, E, a, b).reshape(E + 1, p ** E)
    elif n == 2:
        def fn(a, b):
            return _layer_hist_numpy_n2(dh, od, p, E, a, b)
    else:
        def fn(a, b):
            return _layer_hist_numpy_n4(dh, od, p, E, a, b)

    if threads <= 1 or total < (1 << 16):
        return fn(0, total)
    edges = [total * i // threads for i in range(threads + 1)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(lambda ab: fn(*ab), zip(edges, edges[1:])))
    return sum(parts)


def short_vector_counts(Rint, w, c, QB, Q, n, bound, threads=1):
    """Counts per norm 0..bound of nonzero vectors with x^T G x <= bound."""
    if not USING_NUMBA:
        counts = np.zeros(bound + 1, dtype=np.int64)
        _short_vectors_python([list(r) for r in Rint], list(w), list(c),
                              QB, Q, n, lambda nor, xs: counts.__setitem__(nor, counts[nor] + 1))
        return counts
    Rm = np.asarray(Rint, dtype=np.int64)
    wm = np.asarray(w, dtype=np.int64)
    cm = np.asarray(c, dtype=np.int64)
    dc = np.zeros((1, n), dtype=np.int64)
    dn = np.zeros(1, dtype=np.int64)
    if threads <= 1:
        counts, _ = _nb_short_vectors(Rm, wm, cm, QB, Q, n, bound,
                                      -(1 << 60), 1 << 60, dc, dn, False)
        return counts
    S = math.isqrt(QB // int(w[n - 1]))
    top_lo = -((S) // int(c[n - 1]))
    top_hi = S // int(c[n - 1])
    edges = np.linspace(top_lo, top_hi + 1, threads + 1).astype(np.int64)

    def run(ab):
        a, b = int(ab[0]), int(ab[1])
        if a > b - 1:
            return np.zeros(bound + 1, dtype=np.int64)
        cnt, _ = _nb_short_vectors(Rm, wm, cm, QB, Q, n, bound, a, b - 1,
                                   np.zeros((1, n), dtype=np.int64),
                                   np.zeros(1, dtype=np.int64), False)
        return cnt

    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(run, zip(edges, edges[1:])))
    return sum(parts)


def short_vector_list(Rint, w, c, QB, Q, n, bound, max_count):
    """All nonzero vectors with x^T G x <= bound; returns (coords, norms)."""
    if USING_NUMBA:
        coords = np.zeros((max_count, n), dtype=np.int64)
        norms = np.zeros(max_count, dtype=np.int64)
        _, k = _nb_short_vectors(np.asarray(Rint, dtype=np.int64),
                                 np.asarray(w, dtype=np.int64),
                                 np.asarray(c, dtype=np.int64),
                                 QB, Q, n, bound, -(1 << 60), 1 << 60,
                                 coords, norms, True)
        return coords[:k], norms[:k]
    out = []
    nrm = []
    _short_vectors_python([list(r) for r in Rint], list(w), list(c), QB, Q, n,
                          lambda nor, xs: (out.append(xs), nrm.append(nor)))
    coords = np.array(out, dtype=np.int64).reshape(len(out), n)
    return coords, np.array(nrm, dtype=np.int64)


def rep_count(coords, gxs, slices, tgt, j, threads=1):
    """Count ordered column tuples realizing the exact dot-product targets."""
    coords = np.ascontiguousarray(coords, dtype=np.int64)
    gxs = np.ascontiguousarray(gxs, dtype=np.int64)
    slice_lo = np.array([s[0] for s in slices], dtype=np.int64)
    slice_hi = np.array([s[1] for s in slices], dtype=np.int64)
    tgt = np.asarray(tgt, dtype=np.int64).reshape(j, j)
    lo0, hi0 = int(slice_lo[0]), int(slice_hi[0])
    if not USING_NUMBA:
        return int(_rep_count_python(coords, gxs, slice_lo, slice_hi, tgt, j, lo0, hi0))
    if threads <= 1 or hi0 - lo0 < 2 * threads:
        return int(_nb_rep_count(coords, gxs, slice_lo, slice_hi, tgt, j, lo0, hi0))
    edges = np.linspace(lo0, hi0, threads + 1).astype(np.int64)

    def run(ab):
        a, b = int(ab[0]), int(ab[1])
        if a >= b:
            return 0
        return int(_nb_rep_count(coords, gxs, slice_lo, slice_hi, tgt, j, a, b))

    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(run, zip(edges, edges[1:])))
    return sum(parts)
