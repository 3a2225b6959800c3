"""Dense complex linear algebra with explicit tolerances.

Index sets are 0-based, sorted sequences of ints. Minors and subsets are
enumerated by size first, then in lexicographic order of the sorted members
(the order of :func:`itertools.combinations`).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import BoundsError, DimensionError, SizeCapError, ValidationError

MINOR_CAP = 12


@dataclass(frozen=True)
class Tolerance:
    """Decision thresholds.

    ``zero_abs`` is the absolute cutoff below which a matrix entry, vector
    component or minor counts as zero. ``rank_rel`` is the relative pivot
    cutoff for numerical rank.
    """

    zero_abs: float = 1e-9
    rank_rel: float = 1e-10

    def __post_init__(self):
        if not (self.zero_abs > 0 and self.rank_rel > 0):
            raise ValidationError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def _square(M) -> np.ndarray:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def index_set(members: Sequence[int], d: int) -> tuple:
    """Validate and sort an index set into ``range(d)``."""
    out = tuple(sorted(int(i) for i in members))
    if len(set(out)) != len(out):
        raise ValidationError(f"duplicate indices in {members!r}")
    if out and (out[0] < 0 or out[-1] >= d):
        raise BoundsError(f"index set {out} not within [0, {d})")
    return out


def complement(members: Sequence[int], d: int) -> tuple:
    s = set(members)
    return tuple(i for i in range(d) if i not in s)


def mask_of(members: Sequence[int]) -> int:
    m = 0
    for i in members:
        m |= 1 << int(i)
    return m


def members_of(mask: int, d: int) -> tuple:
    return tuple(i for i in range(d) if (mask >> i) & 1)


def is_unitary(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = _square(M)
    d = A.shape[0]
    err = np.max(np.abs(A.conj().T @ A - np.eye(d)), initial=0.0)
    return bool(err <= tol.zero_abs * max(d, 1))


def submatrix(M, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    A = as_matrix(M)
    r = index_set(rows, A.shape[0])
    c = index_set(cols, A.shape[1])
    return A[np.ix_(np.array(r, dtype=int), np.array(c, dtype=int))]


def det(M) -> complex:
    """Determinant via partially pivoted LU; the 0x0 determinant is 1."""
    A = _square(M)
    if A.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(_kernels.det_lu(A.copy()))


def rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank from a column-pivoted QR.

    A pivot counts when it exceeds ``rank_rel`` times the leading pivot. A
    matrix whose leading pivot is at most ``zero_abs`` has rank 0.
    """
    A = as_matrix(M)
    if A.size == 0:
        return 0
    return int(_kernels.rank_qrcp(A.copy(), tol.rank_rel, tol.zero_abs))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12))
    a = v[k]
    return v * (abs(a) / a) if a != 0 else v


def kernel_basis(M, tol: Tolerance = DEFAULT_TOL) -> list:
    """Orthonormal basis of the numerical null space.

    The dimension is ``cols - rank(M)``; the vectors are the trailing right
    singular vectors, each rotated so its first non-negligible entry is real
    and positive.
    """
    A = as_matrix(M)
    n = A.shape[1]
    if n == 0:
        return []
    r = rank(A, tol)
    if r == n:
        return []
    if A.shape[0] == 0:
        return [np.eye(n, dtype=complex)[:, j] for j in range(n)]
    _, _, Vh = np.linalg.svd(A, full_matrices=True)
    return [_fix_phase(Vh[j].conj()) for j in range(r, n)]


@lru_cache(maxsize=None)
def combinations_array(d: int, k: int) -> np.ndarray:
    arr = np.array(list(combinations(range(d), k)), dtype=np.int64).reshape(-1, k)
    arr.setflags(write=False)
    return arr


def minor_table(M, cap: int = MINOR_CAP) -> list:
    """|minor| for every size: entry ``k-1`` is a ``C(d,k) x C(d,k)`` array.

    Rows of that array follow the row subsets, columns the column subsets,
    both in :func:`combinations_array` order.
    """
    A = _square(M)
    d = A.shape[0]
    if d > cap:
        raise SizeCapError(f"d={d} exceeds the minor-enumeration cap {cap}; "
                           f"cost grows like sum_k C(d,k)^2")
    out = []
    for k in range(1, d + 1):
        idx = combinations_array(d, k)
        out.append(_kernels.minor_moduli(A, idx, idx))
    return out


@dataclass(frozen=True)
class MinorReport:
    d: int
    vanishing: tuple
    nonvanishing: tuple
    min_modulus: tuple
    largest_vanishing_size: int
    first_vanishing: Optional[tuple]

    def total(self, k: int) -> int:
        return comb(self.d, k) ** 2

    @property
    def n_vanishing(self) -> int:
        return sum(self.vanishing)

    def to_dict(self) -> dict:
        rows, cols = self.first_vanishing if self.first_vanishing else (None, None)
        return {
            "d": self.d,
            "sizes": [
                {"k": k, "total": self.total(k), "vanishing": v, "nonvanishing": nv,
                 "min_modulus": mm}
                for k, v, nv, mm in zip(range(1, self.d + 1), self.vanishing,
                                        self.nonvanishing, self.min_modulus)
            ],
            "largest_vanishing_size": self.largest_vanishing_size,
            "first_vanishing_rows": None if rows is None else [i + 1 for i in rows],
            "first_vanishing_cols": None if cols is None else [j + 1 for j in cols],
        }


def report_from_table(table: list, tol: Tolerance = DEFAULT_TOL) -> MinorReport:
    d = len(table)
    vanishing, nonvanishing, mins = [], [], []
    largest, first = 0, None
    for k, mod in enumerate(table, start=1):
        zero = mod <= tol.zero_abs
        nz = int(zero.sum())
        vanishing.append(nz)
        nonvanishing.append(int(zero.size - nz))
        mins.append(float(mod.min()))
        if nz:
            largest = k
            ia, ib = np.unravel_index(int(np.argmax(zero)), zero.shape)
            idx = combinations_array(d, k)
            first = (tuple(int(i) for i in idx[ia]), tuple(int(j) for j in idx[ib]))
    return MinorReport(d, tuple(vanishing), tuple(nonvanishing), tuple(mins), largest, first)


def enumerate_minors(M, tol: Tolerance = DEFAULT_TOL, cap: int = MINOR_CAP) -> MinorReport:
    """Count vanishing and nonvanishing minors of every size.

    Also records the largest vanishing size and the lexicographically first
    vanishing minor of that size, as ``(rows, cols)`` 0-based tuples.
    """
    return report_from_table(minor_table(M, cap), tol)
