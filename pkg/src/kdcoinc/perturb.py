"""Deform a unitary into a nearby one with no vanishing minor.

Each round takes the largest vanishing minor M (lexicographically first among
those of that size), borders it with one extra row and column into an
invertible block M+, and rotates the rows of M+ in the plane spanned by
``(b, 0)`` and the extra row, where ``b`` is orthogonal to the column space
of M. For a small angle this makes M invertible while keeping every minor
that was already nonzero away from zero.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bases import TransitionMatrix, dft, mub4, stats
from .errors import ConvergenceError, KDCoincError, NumericalFailure, ValidationError
from .linalg import DEFAULT_TOL, MINOR_CAP, Tolerance, as_matrix, det, minor_table, report_from_table

THETA_FLOOR = 1e-3


@dataclass(frozen=True)
class Round:
    sigma: tuple
    tau: tuple
    theta: float
    vanishing_before: int
    vanishing_after: int
    minor_rows: tuple
    minor_cols: tuple

    def to_dict(self) -> dict:
        return {
            "sigma": [i + 1 for i in self.sigma],
            "tau": [j + 1 for j in self.tau],
            "theta": self.theta,
            "vanishing_before": self.vanishing_before,
            "vanishing_after": self.vanishing_after,
            "minor_rows": [i + 1 for i in self.minor_rows],
            "minor_cols": [j + 1 for j in self.minor_cols],
        }


@dataclass(frozen=True)
class PerturbationTrace:
    rounds: tuple = ()
    total_deviation: float = 0.0
    initial_vanishing: int = 0
    eps: float = field(default=None)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "initial_vanishing": self.initial_vanishing,
            "total_deviation": self.total_deviation,
            "rounds": [r.to_dict() for r in self.rounds],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _orth_to_image(M: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to the column space of a rank-deficient square M."""
    if M.shape[0] == 1:
        return np.ones(1, dtype=complex)
    Ul, _, _ = np.linalg.svd(M)
    b = Ul[:, -1]
    k = int(np.argmax(np.abs(b) > 1e-12))
    return b * (abs(b[k]) / b[k])


def mlemma_rotation(Mplus, theta: float, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unitary ``V(theta)`` rotating ``(b, 0)`` towards the last basis vector.

    ``Mplus`` must be k x k, invertible, with a singular leading
    (k-1) x (k-1) block ``M``; ``b`` spans the orthogonal complement of the
    image of ``M``. ``V(0)`` is the identity and the leading block of
    ``V(theta) @ Mplus`` is invertible for small nonzero ``theta``.
    """
    A = as_matrix(Mplus)
    k = A.shape[0]
    if A.shape != (k, k) or k < 2:
        raise ValidationError(f"Mplus must be square with k >= 2, got {A.shape}")
    if abs(det(A)) <= tol.zero_abs:
        raise ValidationError("Mplus is singular")
    M = A[:-1, :-1]
    if abs(det(M)) > tol.zero_abs:
        raise ValidationError("leading block of Mplus is not singular")
    bplus = np.zeros(k, dtype=complex)
    bplus[:-1] = _orth_to_image(M)
    ek = np.zeros(k, dtype=complex)
    ek[-1] = 1.0
    Pi = np.outer(bplus, bplus.conj()) + np.outer(ek, ek)
    R = math.cos(theta) * Pi + math.sin(theta) * (np.outer(ek, bplus.conj()) - np.outer(bplus, ek))
    return R @ Pi + (np.eye(k) - Pi)


def _zero_masks(table, tol):
    return [m <= tol.zero_abs for m in table]


def coincify(T: TransitionMatrix, eps: float, cap: int = MINOR_CAP):
    """Return ``(T', trace)`` with ``T'.U = W @ T.U`` for a unitary W near I and
    no vanishing minor in ``T'.U``.

    Each round line-searches the angle over ``eps, eps/2, ...`` down to
    ``THETA_FLOOR * eps`` until the vanishing count drops and no nonzero
    minor becomes zero.
    """
    if not eps > 0:
        raise ValidationError("eps must be positive")
    tol = T.tol
    d = T.d
    U = np.array(T.U)
    table = minor_table(U, cap)
    report = report_from_table(table, tol)
    L0 = report.n_vanishing
    if L0 == 0:
        return T, PerturbationTrace((), 0.0, 0, eps)

    W = np.eye(d, dtype=complex)
    rounds = []
    while report.n_vanishing:
        rows, cols = report.first_vanishing
        extra_r = min(set(range(d)) - set(rows))
        extra_c = min(set(range(d)) - set(cols))
        r_idx = list(rows) + [extra_r]
        c_idx = list(cols) + [extra_c]
        Mplus = U[np.ix_(r_idx, c_idx)]
        old_zero = _zero_masks(table, tol)
        before = report.n_vanishing

        theta = eps
        while theta >= THETA_FLOOR * eps:
            V = mlemma_rotation(Mplus, theta, tol)
            U_new = U.copy()
            U_new[r_idx, :] = V @ U[r_idx, :]
            new_table = minor_table(U_new, cap)
            new_zero = _zero_masks(new_table, tol)
            after = sum(int(z.sum()) for z in new_zero)
            lost = any(bool((nz & ~oz).any()) for nz, oz in zip(new_zero, old_zero))
            if after < before and not lost:
                break
            theta /= 2
        else:
            raise NumericalFailure(
                f"no admissible angle down to {THETA_FLOOR * eps:g} for the vanishing "
                f"{len(rows)}-minor rows={[i + 1 for i in rows]} cols={[j + 1 for j in cols]}")

        step = np.eye(d, dtype=complex)
        step[np.ix_(r_idx, r_idx)] = V
        W = step @ W
        U, table = U_new, new_table
        report = report_from_table(table, tol)
        rest_r = [i for i in range(d) if i not in r_idx]
        rest_c = [j for j in range(d) if j not in c_idx]
        rounds.append(Round(tuple(r_idx + rest_r), tuple(c_idx + rest_c), theta,
                            before, report.n_vanishing, tuple(rows), tuple(cols)))

    dev = float(np.linalg.norm(W - np.eye(d), 2))
    return TransitionMatrix(U, tol), PerturbationTrace(tuple(rounds), dev, L0, eps)


def near_mub_coinc(d: int, delta: float, tol: Tolerance = DEFAULT_TOL, cap: int = MINOR_CAP,
                   max_halvings: int = 50, with_trace: bool = False):
    """COINC transition matrix with ``m_ab >= 1/sqrt(d) - delta``.

    Starts from the DFT (the real Hadamard-type MUB when d = 4) and runs
    :func:`coincify` with ``eps = delta/4``, halving eps until both
    conditions hold.
    """
    if not 0 < delta < 1 / math.sqrt(d):
        raise ValidationError("need 0 < delta < 1/sqrt(d)")
    start = mub4(1.0, tol) if d == 4 else dft(d, tol)
    target = 1 / math.sqrt(d) - delta
    eps = delta / 4
    last = None
    for _ in range(max_halvings + 1):
        try:
            out, trace = coincify(start, eps, cap)
        except KDCoincError as exc:
            last = exc
        else:
            if stats(out).m_ab >= target:
                return (out, trace) if with_trace else out
            last = f"m_ab={stats(out).m_ab:.6g} < {target:.6g}"
        eps /= 2
    raise ConvergenceError(f"no COINC matrix within delta={delta} after {max_halvings} halvings ({last})")
