"""Transition matrices between two orthonormal bases, and a catalog of them."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, FormatError, SizeCapError, ValidationError
from .linalg import DEFAULT_TOL, MINOR_CAP, Tolerance, as_matrix, is_unitary


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Unitary ``U[i, j] = <a_i|b_j>`` linking bases A and B (d >= 2)."""

    U: np.ndarray
    tol: Tolerance = field(default=DEFAULT_TOL)

    def __post_init__(self):
        A = as_matrix(self.U).copy()
        if A.shape[0] != A.shape[1]:
            raise DimensionError(f"transition matrix must be square, got {A.shape}")
        if A.shape[0] < 2:
            raise ValidationError("dimension must be at least 2")
        if not is_unitary(A, self.tol):
            raise ValidationError("matrix is not unitary within tolerance")
        A.setflags(write=False)
        object.__setattr__(self, "U", A)

    @property
    def d(self) -> int:
        return self.U.shape[0]

    def with_tol(self, tol: Tolerance) -> "TransitionMatrix":
        return TransitionMatrix(self.U, tol)

    def __repr__(self):
        return f"TransitionMatrix(d={self.d})"


@dataclass(frozen=True)
class BasisStats:
    m_ab: float
    M_ab: float
    Z: int
    Z_r: int
    Z_c: int


def _two_largest_sum(counts: np.ndarray) -> int:
    top = np.sort(counts)[-2:]
    return int(top.sum())


def stats(T: TransitionMatrix) -> BasisStats:
    mag = np.abs(T.U)
    zero = mag <= T.tol.zero_abs
    return BasisStats(
        m_ab=float(mag.min()),
        M_ab=float(mag.max()),
        Z=int(zero.sum()),
        Z_r=_two_largest_sum(zero.sum(axis=1)),
        Z_c=_two_largest_sum(zero.sum(axis=0)),
    )


def is_mub(T: TransitionMatrix) -> bool:
    dev = np.abs(np.abs(T.U) - 1.0 / math.sqrt(T.d))
    return bool(dev.max() <= T.tol.zero_abs)


def _root(e: int, n: int) -> complex:
    """exp(2 pi i e / n) with the exponent reduced first."""
    e %= n
    if 4 * e == n:
        return 1j
    if 2 * e == n:
        return -1.0 + 0j
    if 4 * e == 3 * n:
        return -1j
    if e == 0:
        return 1.0 + 0j
    return cmath.exp(2j * math.pi * e / n)


def dft(d: int, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    """``U[j, k] = exp(2 pi i j k / d) / sqrt(d)`` (0-based j, k)."""
    if d < 2:
        raise ValidationError("dft needs d >= 2")
    U = np.array([[_root(j * k, d) for k in range(d)] for j in range(d)]) / math.sqrt(d)
    return TransitionMatrix(U, tol)


_TAO_EXPONENTS = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 2, 2],
    [0, 1, 0, 2, 2, 1],
    [0, 1, 2, 0, 1, 2],
    [0, 2, 2, 1, 0, 1],
    [0, 2, 1, 2, 1, 0],
]


def tao(tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    """Tao's 6x6 matrix of powers of omega = exp(2 pi i / 3), over sqrt(6)."""
    U = np.array([[_root(e, 3) for e in row] for row in _TAO_EXPONENTS]) / math.sqrt(6)
    return TransitionMatrix(U, tol)


def spin1(tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    """J_z eigenbasis to J_x eigenbasis for spin 1, basis order (+1, 0, -1)."""
    r = math.sqrt(2)
    U = 0.5 * np.array([[1, r, 1], [r, 0, -r], [1, -r, 1]], dtype=complex)
    return TransitionMatrix(U, tol)


def mub4(s: complex = 1.0, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    """The one-parameter family of d=4 MUB transition matrices, |s| = 1."""
    s = complex(s)
    if abs(abs(s) - 1.0) > tol.zero_abs:
        raise ValidationError(f"mub4 needs |s| = 1, got |s| = {abs(s)}")
    U = 0.5 * np.array([
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, s, -s],
        [1, -1, -s, s],
    ], dtype=complex)
    return TransitionMatrix(U, tol)


_U6 = [
    [0, 1, 1, 1, 1, 1],
    [1, 0, 1, -1, 1, -1],
    [1, 1, 0, -1, -1, 1],
    [1, -1, -1, 0, 1, 1],
    [1, 1, -1, 1, 0, -1],
    [1, -1, 1, 1, -1, 0],
]
_U6_PRIMED = [
    [0, 1, 1, 1, 1, 1],
    [1, 0, 1, -1, 1, -1],
    [1, 1, 0, 1, -1, -1],
    [1, -1, 1, 0, -1, 1],
    [1, 1, -1, -1, 0, 1],
    [1, -1, -1, 1, 1, 0],
]


def u6(variant: str = "plain", tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    """Real 6x6 conference-type matrices with a zero diagonal, ``plain`` or ``primed``."""
    table = {"plain": _U6, "primed": _U6_PRIMED}
    if variant not in table:
        raise ValidationError(f"unknown u6 variant {variant!r}")
    return TransitionMatrix(np.array(table[variant], dtype=complex) / math.sqrt(5), tol)


def identity(d: int, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    return TransitionMatrix(np.eye(d, dtype=complex), tol)


def tensor(T1: TransitionMatrix, T2: TransitionMatrix, cap: int = MINOR_CAP) -> TransitionMatrix:
    d = T1.d * T2.d
    if d > cap:
        raise SizeCapError(f"product dimension {d} exceeds cap {cap}")
    return TransitionMatrix(np.kron(T1.U, T2.U), T1.tol)


def _check_perm(p: Sequence[int], d: int) -> np.ndarray:
    arr = np.asarray(p, dtype=int)
    if arr.shape != (d,) or sorted(arr.tolist()) != list(range(d)):
        raise ValidationError(f"{list(p)} is not a permutation of range({d})")
    return arr


def permute(T: TransitionMatrix, sigma: Sequence[int], tau: Sequence[int]) -> TransitionMatrix:
    """Relabel both bases: ``U'[i, j] = U[sigma[i], tau[j]]``."""
    s = _check_perm(sigma, T.d)
    t = _check_perm(tau, T.d)
    return TransitionMatrix(T.U[np.ix_(s, t)], T.tol)


def rephase(T: TransitionMatrix, row_phases, col_phases) -> TransitionMatrix:
    """Multiply basis vectors by unit phases: ``diag(conj(row)) U diag(col)``."""
    r = np.exp(1j * np.asarray(row_phases, dtype=float))
    c = np.exp(1j * np.asarray(col_phases, dtype=float))
    return TransitionMatrix(r.conj()[:, None] * T.U * c[None, :], T.tol)


def haar_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix with the R phases fixed."""
    rng = np.random.default_rng(rng)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * ph[None, :]


def haar(d: int, rng=None, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    return TransitionMatrix(haar_unitary(d, rng), tol)


CATALOG = ("dft", "tao", "spin1", "mub4", "u6", "u6p")


def catalog(name: str, d: int = None, s: complex = 1.0, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    if name == "dft":
        if d is None:
            raise ValidationError("dft needs a dimension")
        return dft(d, tol)
    if name == "tao":
        return tao(tol)
    if name == "spin1":
        return spin1(tol)
    if name == "mub4":
        return mub4(s, tol)
    if name == "u6":
        return u6("plain", tol)
    if name == "u6p":
        return u6("primed", tol)
    raise ValidationError(f"unknown catalog matrix {name!r}; choose from {', '.join(CATALOG)}")


# --- JSON ------------------------------------------------------------------

def encode_complex(z: complex) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise FormatError(f"expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_dict(T: TransitionMatrix) -> dict:
    return {"d": T.d, "entries": [encode_complex(z) for z in T.U.ravel()]}


def matrix_from_dict(obj: dict, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    try:
        d = int(obj["d"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed matrix JSON: {exc}") from None
    if len(entries) != d * d:
        raise FormatError(f"expected {d * d} entries, got {len(entries)}")
    U = np.array([decode_complex(p) for p in entries], dtype=complex).reshape(d, d)
    return TransitionMatrix(U, tol)


def dumps_matrix(T: TransitionMatrix) -> str:
    # float repr is the shortest string that round-trips the double exactly
    return json.dumps(matrix_to_dict(T))


def loads_matrix(text: str, tol: Tolerance = DEFAULT_TOL) -> TransitionMatrix:
    return matrix_from_dict(json.loads(text), tol)
