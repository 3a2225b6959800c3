"""Pure-numpy versions of the hot kernels (fallback when numba is off)."""
import numpy as np
import scipy.linalg

_CHUNK = 1 << 16


def det_lu(a):
    a = np.asarray(a, dtype=complex)
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(a))


def rank_qrcp(a, rank_rel, zero_abs):
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0
    R = scipy.linalg.qr(a, mode="r", pivoting=True)[0]
    diag = np.abs(np.diagonal(R))
    if diag[0] <= zero_abs:
        return 0
    # geqp3 diagonals are non-increasing, so the first failure ends the count
    keep = diag > rank_rel * diag[0]
    return int(np.argmin(keep)) if not keep.all() else int(keep.size)


def minor_moduli(U, rows, cols):
    nr, k = rows.shape
    nc = cols.shape[0]
    out = np.empty((nr, nc))
    step = max(1, _CHUNK // max(nc, 1))
    for lo in range(0, nr, step):
        r = rows[lo:lo + step]
        blocks = U[r[:, None, :, None], cols[None, :, None, :]]
        out[lo:lo + step] = np.abs(np.linalg.det(blocks))
    return out


def dim_table(U, rank_rel, zero_abs):
    d = U.shape[0]
    size = 1 << d
    idx = np.arange(d)
    out = np.zeros((size, size), dtype=np.uint8)
    for t in range(1, size):
        tcols = idx[(t >> idx) & 1 == 1]
        for s in range(size):
            srows = idx[(s >> idx) & 1 == 0]
            if srows.size == 0:
                out[s, t] = tcols.size
                continue
            out[s, t] = tcols.size - rank_qrcp(U[np.ix_(srows, tcols)], rank_rel, zero_abs)
    return out


def commute_table(U, s_masks, t_masks, zero_abs):
    d = U.shape[0]
    bits = 1 << np.arange(d)
    s_in = (s_masks[:, None] & bits) != 0        # (ns, d)
    t_in = (t_masks[:, None] & bits) != 0        # (nt, d)
    out = np.zeros((s_masks.size, t_masks.size), dtype=bool)
    for it in range(t_masks.size):
        Ut = U[:, t_in[it]]
        P = np.abs(Ut @ Ut.conj().T) > zero_abs  # P[m, i] nonzero
        # offending entries: m outside S, i inside S
        hit = (~s_in).astype(np.int64) @ P.astype(np.int64)  # (ns, d): count over m
        out[:, it] = ~np.any((hit > 0) & s_in, axis=1)
    return out


def _popcounts(size):
    x = np.arange(size)
    c = np.zeros(size, dtype=np.int64)
    while np.any(x):
        c += x & 1
        x >>= 1
    return c


def diagram_from_dims(dims, d):
    size = 1 << d
    masks = np.arange(size)
    pc = _popcounts(size)
    L = dims.astype(np.int64)
    ok = L >= 1
    for j in range(d):
        bit = 1 << j
        has = (masks & bit) != 0
        drop = masks & ~bit
        ok &= ~has[:, None] | (L[drop, :] < L)
        ok &= ~has[None, :] | (L[:, drop] < L)
    member = np.zeros((d, d), dtype=bool)
    max_dim = np.zeros((d, d), dtype=np.int64)
    na = np.broadcast_to(pc[:, None], L.shape)[1:, 1:] - 1
    nb = np.broadcast_to(pc[None, :], L.shape)[1:, 1:] - 1
    np.logical_or.at(member, (na.ravel(), nb.ravel()), ok[1:, 1:].ravel())
    np.maximum.at(max_dim, (na.ravel(), nb.ravel()), L[1:, 1:].ravel())
    return member, max_dim
