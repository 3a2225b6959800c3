"""Brute-force cross-checks for the exact engines.

Everything here is driven by random sampling with explicit seeds. Per-cell
streams are seeded from ``(seed, s_mask, t_mask)`` so results do not depend
on the order in which cells are visited.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bases import TransitionMatrix, stats
from .coinc import UncertaintyDiagram, random_in_subspace, subspace_basis
from .errors import InapplicableError, SizeCapError, ValidationError
from .kd import (StateVector, basis_a, basis_b, classify_classical_constraint, haar_state,
                 is_kd_classical, support_profile, witness)
from .linalg import members_of

SAMPLING_CAP = 8


def diagram_by_sampling(T: TransitionMatrix, samples_per_cell: int = 20, seed: int = 0) -> UncertaintyDiagram:
    """Union of the support profiles of random states drawn from every H(S, T)."""
    d = T.d
    if d > SAMPLING_CAP:
        raise SizeCapError(f"sampling oracle limited to d <= {SAMPLING_CAP}")
    z = T.tol.zero_abs
    Uh = T.U.conj().T
    member = np.zeros((d, d), dtype=bool)
    max_dim = np.zeros((d, d), dtype=np.int64)
    for s in range(1, 1 << d):
        S = members_of(s, d)
        for t in range(1, 1 << d):
            Tb = members_of(t, d)
            B = subspace_basis(T, S, Tb)
            L = B.shape[1]
            cell = (len(S) - 1, len(Tb) - 1)
            max_dim[cell] = max(max_dim[cell], L)
            if L == 0:
                continue
            rng = np.random.default_rng([seed, s, t])
            C = rng.standard_normal((L, samples_per_cell)) + 1j * rng.standard_normal((L, samples_per_cell))
            X = B @ C
            X /= np.linalg.norm(X, axis=0)
            na = (np.abs(X) > z).sum(axis=0)
            nb = (np.abs(Uh @ X) > z).sum(axis=0)
            member[na - 1, nb - 1] = True
    return UncertaintyDiagram.from_grids(member, max_dim)


@dataclass
class ScanReport:
    seed: int
    n_states: int
    violations: int = 0
    n_classical: int = 0
    classical_non_basis: int = 0
    max_classical_n_ab: int = 0
    thm8_inconsistent: int = 0
    thm8_applicable: bool = False
    witnessed: Counter = field(default_factory=Counter)
    classical_profiles: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_states": self.n_states,
            "violations": self.violations,
            "n_classical": self.n_classical,
            "classical_non_basis": self.classical_non_basis,
            "max_classical_n_ab": self.max_classical_n_ab,
            "thm8_applicable": self.thm8_applicable,
            "thm8_inconsistent": self.thm8_inconsistent,
            "witnessed": dict(sorted(self.witnessed.items())),
            "classical_profiles": {f"{a},{b}": n for (a, b), n in sorted(self.classical_profiles.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _structured_state(T: TransitionMatrix, rng) -> StateVector:
    """Random state of H(S, T) for random S, T; falls back above the edge."""
    d = T.d
    for attempt in range(20):
        na = int(rng.integers(1, d + 1))
        lo = 1 if attempt < 10 else d + 1 - na
        nb = int(rng.integers(max(lo, 1), d + 1))
        S = np.sort(rng.choice(d, na, replace=False))
        Tb = np.sort(rng.choice(d, nb, replace=False))
        B = subspace_basis(T, S, Tb)
        if B.shape[1]:
            return StateVector(random_in_subspace(B, rng))
    return haar_state(d, rng)


def scan_states(T: TransitionMatrix, states, seed: int = 0) -> ScanReport:
    st = stats(T)
    report = ScanReport(seed=seed, n_states=0)
    try:
        classify_classical_constraint(T, basis_a(T.d, 0), st)
        report.thm8_applicable = True
    except InapplicableError:
        pass
    for psi in states:
        report.n_states += 1
        prof = support_profile(T, psi)
        classical = is_kd_classical(T, psi)
        verdict = witness(T, psi, st)
        if verdict.nonclassical:
            report.witnessed[verdict.rule] += 1
            if classical:
                report.violations += 1
        if classical:
            report.n_classical += 1
            report.classical_profiles[(prof.n_a, prof.n_b)] += 1
            report.max_classical_n_ab = max(report.max_classical_n_ab, prof.n_ab)
            if prof.n_a > 1 and prof.n_b > 1:
                report.classical_non_basis += 1
            if report.thm8_applicable and not classify_classical_constraint(T, psi, st):
                report.thm8_inconsistent += 1
    return report


def classicality_scan(T: TransitionMatrix, n_states: int = 1000, seed: int = 0, extra=()) -> ScanReport:
    """Cross-check witness verdicts against direct KD classicality.

    Scans all 2d basis vectors, ``n_states`` random states (half Haar, half
    drawn from random subspaces H(S, T)) and any ``extra`` states.
    """
    rng = np.random.default_rng(seed)
    d = T.d
    states = [basis_a(d, i) for i in range(d)] + [basis_b(T, j) for j in range(d)]
    n_haar = n_states // 2
    states += [haar_state(d, rng) for _ in range(n_haar)]
    states += [_structured_state(T, rng) for _ in range(n_states - n_haar)]
    states += list(extra)
    return scan_states(T, states, seed)


def obtuse_hypothesis(vectors, strict: bool, tol: float = 1e-9) -> bool:
    """Pairwise inner products are real and <= 0 (< 0 when ``strict``)."""
    V = np.array([np.asarray(v, dtype=complex).ravel() for v in vectors])
    G = V.conj() @ V.T
    iu = np.triu_indices(len(V), 1)
    g = G[iu]
    if np.any(np.abs(g.imag) > tol):
        return False
    return bool(np.all(g.real < -tol)) if strict else bool(np.all(g.real <= tol))


def obtuse_bound_check(vectors, strict: bool, tol: float = 1e-9) -> bool:
    """Check k <= 2n (or k <= n + 1 when ``strict``) for pairwise-obtuse vectors.

    Raises :class:`InapplicableError` when the inner-product hypothesis fails.
    """
    V = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not V:
        raise ValidationError("need at least one vector")
    n = V[0].size
    if any(v.size != n for v in V) or any(np.linalg.norm(v) == 0 for v in V):
        raise ValidationError("vectors must be nonzero and of equal length")
    if not obtuse_hypothesis(V, strict, tol):
        raise InapplicableError("pairwise inner products are not all real and non-positive")
    k = len(V)
    return k <= (n + 1 if strict else 2 * n)
