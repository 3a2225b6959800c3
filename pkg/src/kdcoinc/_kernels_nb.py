"""Loop kernels compiled with numba.

These are written as explicit loops over small dense complex blocks. They
run under ``@njit``; the numpy module next door holds the vectorised
equivalents used when numba is disabled.
"""
import numpy as np

from ._accel import njit, prange


@njit(cache=True)
def det_lu(a):
    """Determinant of a square complex array by partially pivoted LU.

    ``a`` is overwritten.
    """
    k = a.shape[0]
    det = 1.0 + 0.0j
    for j in range(k):
        p = j
        best = abs(a[j, j])
        for i in range(j + 1, k):
            v = abs(a[i, j])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return 0.0 + 0.0j
        if p != j:
            for c in range(k):
                tmp = a[j, c]
                a[j, c] = a[p, c]
                a[p, c] = tmp
            det = -det
        piv = a[j, j]
        det *= piv
        for i in range(j + 1, k):
            f = a[i, j] / piv
            if f != 0.0:
                for c in range(j + 1, k):
                    a[i, c] -= f * a[j, c]
    return det


@njit(cache=True)
def rank_qrcp(a, rank_rel, zero_abs):
    """Numerical rank from Householder QR with column pivoting.

    Column norms are recomputed at every step instead of downdated; the
    blocks are at most 12 wide. ``a`` is overwritten.
    """
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    r = 0
    first = 0.0
    for j in range(min(m, n)):
        p = j
        best = -1.0
        for c in range(j, n):
            s = 0.0
            for i in range(j, m):
                s += a[i, c].real ** 2 + a[i, c].imag ** 2
            if s > best:
                best = s
                p = c
        if p != j:
            for i in range(m):
                tmp = a[i, j]
                a[i, j] = a[i, p]
                a[i, p] = tmp
        alpha = np.sqrt(best)
        if j == 0:
            first = alpha
            if first <= zero_abs:
                return 0
        if alpha <= rank_rel * first:
            break
        r += 1
        x0 = a[j, j]
        ax0 = abs(x0)
        if ax0 > 0.0:
            phase = x0 / ax0
        else:
            phase = 1.0 + 0.0j
        # v = x + phase * alpha * e_0, stored in place of column j
        a[j, j] = x0 + phase * alpha
        vnorm2 = 0.0
        for i in range(j, m):
            vnorm2 += a[i, j].real ** 2 + a[i, j].imag ** 2
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        for c in range(j + 1, n):
            w = 0.0 + 0.0j
            for i in range(j, m):
                w += np.conj(a[i, j]) * a[i, c]
            w *= beta
            for i in range(j, m):
                a[i, c] -= w * a[i, j]
    return r


@njit(cache=True, parallel=True)
def minor_moduli(U, rows, cols):
    nr, k = rows.shape
    nc = cols.shape[0]
    out = np.empty((nr, nc))
    for ia in prange(nr):
        buf = np.empty((k, k), dtype=np.complex128)
        for ib in range(nc):
            for p in range(k):
                for q in range(k):
                    buf[p, q] = U[rows[ia, p], cols[ib, q]]
            out[ia, ib] = abs(det_lu(buf))
    return out


@njit(cache=True, parallel=True)
def dim_table(U, rank_rel, zero_abs):
    """dim H(S,T) = |T| - rank U(S^c, T) for every pair of bitmasks."""
    d = U.shape[0]
    full = (1 << d) - 1
    size = 1 << d
    out = np.zeros((size, size), dtype=np.uint8)
    for t in prange(size):
        tcols = np.empty(d, dtype=np.int64)
        nt = 0
        for j in range(d):
            if (t >> j) & 1:
                tcols[nt] = j
                nt += 1
        srows = np.empty(d, dtype=np.int64)
        buf = np.empty((d, d), dtype=np.complex128)
        for s in range(size):
            comp = full & ~s
            ns = 0
            for i in range(d):
                if (comp >> i) & 1:
                    srows[ns] = i
                    ns += 1
            if nt == 0 or ns == 0:
                out[s, t] = nt
                continue
            for p in range(ns):
                for q in range(nt):
                    buf[p, q] = U[srows[p], tcols[q]]
            out[s, t] = nt - rank_qrcp(buf[:ns, :nt], rank_rel, zero_abs)
    return out


@njit(cache=True, parallel=True)
def commute_table(U, s_masks, t_masks, zero_abs):
    """True where Pi_A(S) and Pi_B(T) commute, i.e. U(S^c,T) U(S,T)^dagger = 0."""
    d = U.shape[0]
    ns = s_masks.shape[0]
    nt = t_masks.shape[0]
    out = np.zeros((ns, nt), dtype=np.bool_)
    for it in prange(nt):
        t = t_masks[it]
        P = np.zeros((d, d), dtype=np.complex128)
        for k in range(d):
            if (t >> k) & 1:
                for m in range(d):
                    for i in range(d):
                        P[m, i] += U[m, k] * np.conj(U[i, k])
        for js in range(ns):
            s = s_masks[js]
            commutes = True
            for m in range(d):
                if (s >> m) & 1:
                    continue
                for i in range(d):
                    if (s >> i) & 1:
                        if abs(P[m, i]) > zero_abs:
                            commutes = False
                            break
                if not commutes:
                    break
            out[js, it] = commutes
    return out


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def diagram_from_dims(dims, d):
    """Membership and max-dimension grids from a full dim table.

    A pair (S, T) realises (|S|, |T|) iff dim H(S,T) = L >= 1 and every
    drop-one subset of S or of T loses a dimension.
    """
    size = 1 << d
    member = np.zeros((d, d), dtype=np.bool_)
    max_dim = np.zeros((d, d), dtype=np.int64)
    for s in range(1, size):
        na = _popcount(s)
        for t in range(1, size):
            nb = _popcount(t)
            L = dims[s, t]
            if L > max_dim[na - 1, nb - 1]:
                max_dim[na - 1, nb - 1] = L
            if L == 0 or member[na - 1, nb - 1]:
                continue
            ok = True
            for j in range(d):
                bit = 1 << j
                if (s & bit) and dims[s & ~bit, t] >= L:
                    ok = False
                    break
                if (t & bit) and dims[s, t & ~bit] >= L:
                    ok = False
                    break
            if ok:
                member[na - 1, nb - 1] = True
    return member, max_dim
