"""Acceptance suite shared by ``kdcoinc verify`` and the test-suite.

Each check returns a :class:`Criterion`. ``quick=True`` shrinks the random
sample counts tenfold; the exact (enumerative) checks are unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bases import dft, haar, mub4, spin1, stats, tao, u6
from .coinc import (coinc_diagram_equivalence, edge_region, hierarchy, is_coinc,
                    random_in_subspace, subspace_basis, uncertainty_diagram)
from .kd import (StateVector, basis_a, basis_b, entropies, haar_state, is_kd_classical,
                 kd_distribution, support_profile, witness)
from .linalg import enumerate_minors, kernel_basis, rank
from .oracle import classicality_scan, obtuse_bound_check, obtuse_hypothesis, scan_states
from .perturb import coincify, near_mub_coinc


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def _n(full: int, quick: bool) -> int:
    return max(full // 10, 1) if quick else full


def catalog_matrices():
    """Named catalog instances used by the suite-wide checks."""
    out = [(f"dft{d}", dft(d)) for d in range(2, 8)]
    out += [("tao", tao()), ("spin1", spin1()), ("mub4(1)", mub4(1)), ("mub4(i)", mub4(1j)),
            ("u6", u6("plain")), ("u6p", u6("primed"))]
    return out


TAO_MEMBERS = ({(a, b) for a in range(1, 7) for b in range(1, 7) if a + b >= 7}
               - {(2, 5), (5, 2)}) | {(2, 4), (4, 2)}
TAO_EDGE = (6, 4, 4, 2, 3, 1)


def tao_diagram(quick=False) -> Criterion:
    diag = uncertainty_diagram(tao())
    got = diag.members()
    ok = got == TAO_MEMBERS and diag.lower_edge == TAO_EDGE
    extra = sorted(got - TAO_MEMBERS)
    missing = sorted(TAO_MEMBERS - got)
    return Criterion(1, "tao uncertainty diagram", ok,
                     f"lower edge {diag.lower_edge}, extra {extra}, missing {missing}")


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(math.isqrt(n)) + 1))


def dft_primality(quick=False) -> Criterion:
    bad = [d for d in range(2, 13) if is_coinc(dft(d)) != _is_prime(d)]
    return Criterion(2, "dft COINC iff d prime", not bad, f"d in 2..12, mismatches {bad}")


def dft7_diagram(quick=False) -> Criterion:
    diag = uncertainty_diagram(dft(7))
    ok7 = diag.members() == edge_region(7) and diag.n_min == 8
    bad = [name for name, T in catalog_matrices() if not coinc_diagram_equivalence(T)]
    return Criterion(3, "dft7 diagram and COINC/diagram equivalence", ok7 and not bad,
                     f"dft7 n_min={diag.n_min}, equivalence failures {bad}")


def _spin1_state(T, eps: int, eps_p: int) -> StateVector:
    # label -> index for the basis order (+1, 0, -1)
    idx = {1: 0, 0: 1, -1: 2}
    S = [i for i in range(3) if i != idx[eps_p]]
    Tb = [j for j in range(3) if j != idx[eps]]
    B = subspace_basis(T, S, Tb)
    if B.shape[1] != 1:
        raise AssertionError(f"expected a line for eps={eps}, eps'={eps_p}, got dim {B.shape[1]}")
    return StateVector.from_vector(B[:, 0])


def spin1_table(quick=False) -> Criterion:
    T = spin1()
    problems = []
    for eps in (1, -1):
        for eps_p in (1, -1):
            psi = _spin1_state(T, eps, eps_p)
            if not is_kd_classical(T, psi) or support_profile(T, psi).n_ab != 4:
                problems.append(f"psi({eps},{eps_p})")
    x0, z0 = basis_b(T, 1).u, basis_a(3, 1).u
    for eps, eps_p in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        psi = _spin1_state(T, eps, eps_p)
        same = max(abs(np.vdot(x0, psi.u)), abs(np.vdot(z0, psi.u)))
        if abs(same - 1.0) > 1e-9 or support_profile(T, psi).n_ab != 3:
            problems.append(f"psi({eps},{eps_p})")
    psi00 = _spin1_state(T, 0, 0)
    if not is_kd_classical(T, psi00) or support_profile(T, psi00).n_ab != 4:
        problems.append("psi(0,0)")

    rng = np.random.default_rng(4)
    target = _n(500, quick)
    count = 0
    draws = 0
    st = stats(T)
    while count < target:
        draws += 1
        if draws % 2:
            psi = haar_state(3, rng)
        else:
            S, Tb = ([0, 2], [0, 1, 2]) if rng.integers(2) else ([0, 1, 2], [0, 2])
            psi = StateVector(random_in_subspace(subspace_basis(T, S, Tb), rng))
        if support_profile(T, psi).n_ab <= 4:
            continue
        count += 1
        v = witness(T, psi, st)
        if is_kd_classical(T, psi) or v.rule != "Thm7":
            problems.append("sampled state not witnessed")
            break
    return Criterion(4, "spin-1 intersection states", not problems,
                     f"{count} states with n_ab > 4 witnessed by Thm7; problems {problems}")


def hierarchy_table(quick=False) -> Criterion:
    expect = {
        "tao": (tao(), (False, True, True, True), None),
        "mub4(1)": (mub4(1), (None, False, None, None), ((0, 1), (0, 1))),
        "mub4(i)": (mub4(1j), (None, False, None, None), ((0, 1), (0, 1))),
        "spin1": (spin1(), (None, None, False, True), None),
        "dft5": (dft(5), (True, True, True, True), None),
    }
    bad = []
    for name, (T, flags, pair) in expect.items():
        r = hierarchy(T)
        got = (r.coinc, r.all_projectors_noncommute, r.m_positive, r.M_below_one)
        if any(f is not None and f != g for f, g in zip(flags, got)) or not r.chain_ok:
            bad.append(name)
        if pair is not None and r.first_commuting_pair != pair:
            bad.append(f"{name} pair")
    return Criterion(5, "incompatibility hierarchy table", not bad, f"mismatches {bad}")


def tao_minors(quick=False) -> Criterion:
    r = enumerate_minors(tao().U)
    ok = r.vanishing[2] == 0 and r.total(3) == 400 and r.vanishing[1] > 0
    return Criterion(6, "tao minors", ok,
                     f"3x3 vanishing {r.vanishing[2]}/{r.total(3)}, 2x2 vanishing {r.vanishing[1]}")


def witness_soundness(quick=False) -> Criterion:
    n = _n(1000, quick)
    bad = []
    for k, (name, T) in enumerate(catalog_matrices()):
        rep = classicality_scan(T, n_states=n, seed=700 + k)
        if rep.violations:
            bad.append(f"{name}:{rep.violations}")
    return Criterion(7, "witness soundness", not bad, f"{n} states per matrix, violations {bad}")


def dft7_generators(T=None) -> list:
    """One state per minimal-support subspace of dft(7): |S| + |T| = 8."""
    T = T if T is not None else dft(7)
    d = T.d
    out = []
    for na in range(1, d + 1):
        for S in combinations(range(d), na):
            for Tb in combinations(range(d), d + 1 - na):
                B = subspace_basis(T, S, Tb)
                if B.shape[1]:
                    out.append(StateVector.from_vector(B[:, 0]))
    return out


def dft7_classical(quick=False) -> Criterion:
    T = dft(7)
    gens = dft7_generators(T)
    rep_gen = scan_states(T, gens, seed=0)
    n = _n(2000, quick)
    rep = classicality_scan(T, n_states=n, seed=8)
    ok = (rep_gen.thm8_applicable and len(gens) == 3003
          and rep_gen.classical_non_basis == 0 and rep.classical_non_basis == 0
          and rep_gen.thm8_inconsistent == 0 and rep.thm8_inconsistent == 0
          and rep_gen.violations == 0 and rep.violations == 0)
    return Criterion(8, "dft7 classical states are basis vectors", ok,
                     f"{len(gens)} generators + {rep.n_states} scanned, "
                     f"classical non-basis {rep_gen.classical_non_basis + rep.classical_non_basis}")


def coincify_dft4(quick=False) -> Criterion:
    T0 = dft(4)
    T1, trace = coincify(T0, 0.05)
    U = T1.U
    unit_err = float(np.abs(U.conj().T @ U - np.eye(4)).max())
    dev = float(np.abs(U - T0.U).max())
    ok1 = unit_err <= 1e-8 and is_coinc(T1) and dev < 0.2
    T2 = near_mub_coinc(4, 0.05)
    m = stats(T2).m_ab
    ok2 = is_coinc(T2) and m >= 0.5 - 0.05
    return Criterion(9, "coincify and near-MUB COINC in d=4", ok1 and ok2,
                     f"{len(trace.rounds)} rounds, unitarity error {unit_err:.2e}, "
                     f"max deviation {dev:.4f}, near-MUB m_ab={m:.4f}")


def _random_rank_matrix(rng, m, n, r):
    A = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    B = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
    return A @ B


def property_suites(quick=False) -> Criterion:
    n = _n(1000, quick)
    rng = np.random.default_rng(10)
    fails = []
    mats = [T for _, T in catalog_matrices()]
    for k in range(n):
        T = mats[k % len(mats)]
        M = stats(T).M_ab
        psi = haar_state(T.d, rng) if k % 2 else _subspace_state(T, rng)
        prof = support_profile(T, psi)
        if prof.n_a * prof.n_b < M ** -2 - 1e-9:
            fails.append("support relation")
        ha, hb = entropies(T, psi)
        if ha + hb < -2 * math.log(M) - 1e-9:
            fails.append("entropic bound")
        q = kd_distribution(T, psi)
        v = T.U.conj().T @ psi.u
        if (abs(q.total - 1) > 1e-8 or np.abs(q.row_sums - np.abs(psi.u) ** 2).max() > 1e-8
                or np.abs(q.col_sums - np.abs(v) ** 2).max() > 1e-8):
            fails.append("KD marginals")
    for k in range(n):
        m, c = rng.integers(1, 8, size=2)
        r = int(rng.integers(0, min(m, c) + 1))
        A = _random_rank_matrix(rng, m, c, r)
        if rank(A) != r or len(kernel_basis(A)) != c - r:
            fails.append("rank-nullity")
    if not _obtuse_families():
        fails.append("obtuse families")
    fails = sorted(set(fails))
    return Criterion(10, "property suites", not fails, f"{n} trials each, failures {fails}")


def _subspace_state(T, rng) -> StateVector:
    d = T.d
    while True:
        S = np.sort(rng.choice(d, int(rng.integers(1, d + 1)), replace=False))
        Tb = np.sort(rng.choice(d, int(rng.integers(1, d + 1)), replace=False))
        B = subspace_basis(T, S, Tb)
        if B.shape[1]:
            return StateVector(random_in_subspace(B, rng))


def obtuse_search(n: int = 3, k: int = 5, attempts: int = 100_000, seed: int = 11) -> int:
    """Count random real k-tuples in R^n with all pairwise inner products negative."""
    rng = np.random.default_rng(seed)
    hits = 0
    iu = np.triu_indices(k, 1)
    for start in range(0, attempts, 10_000):
        V = rng.standard_normal((min(10_000, attempts - start), k, n))
        G = V @ V.transpose(0, 2, 1)
        hits += int(np.all(G[:, iu[0], iu[1]] < 0, axis=1).sum())
    return hits


def _obtuse_families() -> bool:
    e1, e2 = np.eye(2)
    ok_a = obtuse_bound_check([e1, -e1, e2, -e2], strict=False)
    ang = 2 * np.pi * np.arange(3) / 3
    tri = [np.array([math.cos(a), math.sin(a)]) for a in ang]
    ok_b = obtuse_bound_check(tri, strict=True)
    ok_c = obtuse_search() == 0 and not obtuse_hypothesis(np.eye(3)[[0, 1, 2, 0, 1]], strict=True)
    return ok_a and ok_b and ok_c


def haar_density(quick=False) -> Criterion:
    n = 100
    hits = sum(is_coinc(haar(4, np.random.default_rng([11, k]))) for k in range(n))
    return Criterion(11, "Haar d=4 unitaries are COINC", hits >= 95, f"{hits}/{n} COINC")


CRITERIA = (tao_diagram, dft_primality, dft7_diagram, spin1_table, hierarchy_table, tao_minors,
            witness_soundness, dft7_classical, coincify_dft4, property_suites, haar_density)


def run_all(quick: bool = False):
    """Yield each criterion result in order."""
    for check in CRITERIA:
        yield check(quick)
