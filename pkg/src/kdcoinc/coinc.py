"""Complete incompatibility, the incompatibility hierarchy, and exact
uncertainty diagrams.

``H(S, T)`` is the set of states supported on ``S`` in basis A and on ``T``
in basis B. Its dimension is ``|T| - rank U(S^c, T)``: a state with
B-components ``beta`` on ``T`` lies in ``H(S, T)`` iff ``U(S^c, T) beta = 0``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .bases import TransitionMatrix, stats
from .errors import DegenerateSupportError, NoStateError, SizeCapError, ValidationError
from .kd import StateVector, support_profile
from .linalg import (MINOR_CAP, combinations_array, complement, enumerate_minors,
                     index_set, kernel_basis, members_of, rank)


def _cap(T: TransitionMatrix, cap: int):
    if T.d > cap:
        raise SizeCapError(f"d={T.d} exceeds cap {cap}")


def subspace_dim(T: TransitionMatrix, S: Sequence[int], Tset: Sequence[int]) -> int:
    S = index_set(S, T.d)
    Tb = index_set(Tset, T.d)
    if not S or not Tb:
        raise ValidationError("index sets must be nonempty")
    Sc = complement(S, T.d)
    if not Sc:
        return len(Tb)
    return len(Tb) - rank(T.U[np.ix_(Sc, Tb)], T.tol)


def dim_table(T: TransitionMatrix, cap: int = MINOR_CAP) -> np.ndarray:
    """``dims[s, t] = dim H(S, T)`` for all bitmasks ``s`` of S and ``t`` of T."""
    _cap(T, cap)
    return _kernels.dim_table(np.ascontiguousarray(T.U), T.tol.rank_rel, T.tol.zero_abs)


def subspace_basis(T: TransitionMatrix, S: Sequence[int], Tset: Sequence[int]) -> np.ndarray:
    """Orthonormal basis of H(S, T) in the A-representation, one column per vector.

    Components outside ``S`` are set exactly to zero.
    """
    S = index_set(S, T.d)
    Tb = index_set(Tset, T.d)
    if not S or not Tb:
        raise ValidationError("index sets must be nonempty")
    Sc = complement(S, T.d)
    ker = kernel_basis(T.U[np.ix_(Sc, Tb)], T.tol) if Sc else list(np.eye(len(Tb), dtype=complex))
    if not ker:
        return np.zeros((T.d, 0), dtype=complex)
    B = T.U[:, Tb] @ np.column_stack(ker)
    B[list(Sc), :] = 0.0
    return B


def is_coinc(T: TransitionMatrix, cap: int = MINOR_CAP) -> bool:
    """No minor of U vanishes."""
    return enumerate_minors(T.U, T.tol, cap).n_vanishing == 0


@dataclass(frozen=True)
class HierarchyReport:
    coinc: bool
    all_projectors_noncommute: bool
    m_positive: bool
    M_below_one: bool
    first_commuting_pair: Optional[tuple] = None

    @property
    def chain_ok(self) -> bool:
        flags = [self.coinc, self.all_projectors_noncommute, self.m_positive, self.M_below_one]
        return all(b or not a for a, b in zip(flags, flags[1:]))

    def to_dict(self) -> dict:
        pair = self.first_commuting_pair
        return {
            "coinc": self.coinc,
            "all_projectors_noncommute": self.all_projectors_noncommute,
            "m_positive": self.m_positive,
            "M_below_one": self.M_below_one,
            "first_commuting_pair": None if pair is None else
            {"S": [i + 1 for i in pair[0]], "T": [j + 1 for j in pair[1]]},
        }


def canonical_masks(d: int) -> np.ndarray:
    """Bitmasks of the proper nonempty subsets containing index 0.

    Commutators are unchanged when S or T is replaced by its complement, so
    these representatives cover every class. Ordered by size, then
    lexicographically.
    """
    out = []
    for k in range(1, d):
        for c in combinations_array(d, k):
            if c[0] == 0:
                out.append(int(sum(1 << int(i) for i in c)))
    return np.array(out, dtype=np.int64)


def commuting_pairs(T: TransitionMatrix, cap: int = MINOR_CAP) -> np.ndarray:
    """Boolean table over ``canonical_masks`` pairs: True where the projectors commute."""
    _cap(T, cap)
    masks = canonical_masks(T.d)
    return _kernels.commute_table(np.ascontiguousarray(T.U), masks, masks, T.tol.zero_abs)


def hierarchy(T: TransitionMatrix, cap: int = MINOR_CAP) -> HierarchyReport:
    _cap(T, cap)
    st = stats(T)
    table = commuting_pairs(T, cap)
    first = None
    if table.any():
        masks = canonical_masks(T.d)
        js, it = np.unravel_index(int(np.argmax(table)), table.shape)
        first = (members_of(int(masks[js]), T.d), members_of(int(masks[it]), T.d))
    return HierarchyReport(
        coinc=is_coinc(T, cap),
        all_projectors_noncommute=first is None,
        m_positive=st.m_ab > T.tol.zero_abs,
        M_below_one=st.M_ab < 1.0 - T.tol.zero_abs,
        first_commuting_pair=first,
    )


@dataclass(frozen=True, eq=False)
class UncertaintyDiagram:
    """Achievable support pairs; ``member[na-1, nb-1]`` for (na, nb) in [1, d]^2."""

    d: int
    member: np.ndarray
    max_dim: np.ndarray
    lower_edge: tuple
    n_min: int

    @classmethod
    def from_grids(cls, member, max_dim) -> "UncertaintyDiagram":
        member = np.asarray(member, dtype=bool)
        max_dim = np.asarray(max_dim, dtype=np.int64)
        d = member.shape[0]
        edge = []
        for na in range(d):
            hits = np.flatnonzero(member[na])
            edge.append(int(hits[0]) + 1 if hits.size else None)
        na, nb = np.nonzero(member)
        n_min = int((na + nb).min()) + 2 if na.size else None
        return cls(d, member, max_dim, tuple(edge), n_min)

    def members(self) -> set:
        na, nb = np.nonzero(self.member)
        return {(int(a) + 1, int(b) + 1) for a, b in zip(na, nb)}

    def is_member(self, n_a: int, n_b: int) -> bool:
        return bool(self.member[n_a - 1, n_b - 1])

    def csv_rows(self) -> list:
        return [(na, nb, int(self.member[na - 1, nb - 1]), int(self.max_dim[na - 1, nb - 1]))
                for na in range(1, self.d + 1) for nb in range(1, self.d + 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n_a", "n_b", "member", "max_dim"])
        w.writerows(self.csv_rows())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "members": sorted(self.members()),
            "lower_edge": list(self.lower_edge),
            "n_min": self.n_min,
            "max_dim": self.max_dim.tolist(),
        }


def edge_region(d: int) -> set:
    """All (n_a, n_b) in [1, d]^2 with n_a + n_b >= d + 1."""
    return {(a, b) for a in range(1, d + 1) for b in range(1, d + 1) if a + b >= d + 1}


def uncertainty_diagram(T: TransitionMatrix, cap: int = MINOR_CAP) -> UncertaintyDiagram:
    """Exact diagram from the drop-one dimension criterion over all (S, T)."""
    dims = dim_table(T, cap)
    member, max_dim = _kernels.diagram_from_dims(dims, T.d)
    return UncertaintyDiagram.from_grids(member, max_dim)


def coinc_diagram_equivalence(T: TransitionMatrix, cap: int = MINOR_CAP) -> bool:
    """Check COINC <=> (n_min = d + 1 and diagram = {n_a + n_b >= d + 1})."""
    diag = uncertainty_diagram(T, cap)
    by_diagram = diag.n_min == T.d + 1 and diag.members() == edge_region(T.d)
    return is_coinc(T, cap) == by_diagram


def random_in_subspace(B: np.ndarray, rng) -> np.ndarray:
    """Complex-Gaussian combination of the columns of ``B``, normalized."""
    n = B.shape[1]
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = B @ c
    return x / np.linalg.norm(x)


def sample_state(T: TransitionMatrix, S: Sequence[int], Tset: Sequence[int], seed=None,
                 retries: int = 100) -> StateVector:
    """Random state of H(S, T) whose support profile is exactly (S, T)."""
    S = index_set(S, T.d)
    Tb = index_set(Tset, T.d)
    B = subspace_basis(T, S, Tb)
    if B.shape[1] == 0:
        raise NoStateError(f"H(S, T) = {{0}} for S={S}, T={Tb}")
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        psi = StateVector(random_in_subspace(B, rng))
        prof = support_profile(T, psi)
        if prof.S == S and prof.T == Tb:
            return psi
    raise DegenerateSupportError(
        f"no sampled state of H(S, T) has full support (S={S}, T={Tb}); "
        "some drop-one subspace has the same dimension")
