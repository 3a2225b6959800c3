import math

import numpy as np
import pytest

from kdcoinc import (DegenerateSupportError, DimensionError, InapplicableError, NoStateError, StateVector, ValidationError,
                     b_representation, basis_a, basis_b, classify_classical_constraint, dft,
                     dumps_state, entropies, haar_state, identity, is_kd_classical,
                     kd_distribution, loads_state, sample_state, spin1, stats, subspace_basis, support_profile,
                     tao, tensor, u6, witness)
from kdcoinc.bases import haar
from kdcoinc.coinc import random_in_subspace

from conftest import CATALOG_IDS, CATALOG_MATS

OMEGA = np.exp(2j * np.pi / 3)


def test_b_rep_identity():
    psi = haar_state(4, 1)
    assert np.allclose(b_representation(identity(4), psi), psi.u)


def test_b_rep_hadamard():
    assert np.allclose(b_representation(dft(2), basis_a(2, 0)), np.array([1, 1]) / math.sqrt(2))


def test_b_rep_spin1_middle():
    v = b_representation(spin1(), basis_a(3, 1))
    assert np.allclose(v, np.array([math.sqrt(2), 0, -math.sqrt(2)]) / 2)


def test_profile_spin1_z0():
    p = support_profile(spin1(), basis_a(3, 1))
    assert (p.n_a, p.n_b) == (1, 2)


def test_profile_dft7_basis():
    p = support_profile(dft(7), basis_a(7, 0))
    assert (p.n_a, p.n_b, p.n_ab) == (1, 7, 8)


def test_profile_tao_example():
    T = tao()
    psi = StateVector.from_b(T, [OMEGA, -(1 + OMEGA), 1, 0, 0, 0])
    p = support_profile(T, psi)
    assert (p.n_a, p.n_b) == (4, 3)


def test_state_validation():
    with pytest.raises(ValidationError):
        StateVector([0, 0])
    with pytest.raises(ValidationError):
        StateVector([1, 1])
    with pytest.raises(DimensionError):
        kd_distribution(dft(3), basis_a(2, 0))


def test_kd_identity():
    q = kd_distribution(identity(3), basis_a(3, 0))
    expect = np.zeros((3, 3))
    expect[0, 0] = 1
    assert np.allclose(q.Q, expect)


def test_kd_hadamard():
    q = kd_distribution(dft(2), basis_a(2, 0))
    assert np.allclose(q.Q, [[0.5, 0.5], [0, 0]])


def test_kd_spin1_uniform_is_nonclassical():
    psi = StateVector.from_vector([1, 1, 1])
    assert not is_kd_classical(spin1(), psi)


@pytest.mark.parametrize("T", CATALOG_MATS, ids=CATALOG_IDS)
def test_basis_vectors_are_classical(T):
    for i in range(T.d):
        assert is_kd_classical(T, basis_a(T.d, i))
        assert is_kd_classical(T, basis_b(T, i))


def test_dft7_random_phase_states(rng):
    T = dft(7)
    for _ in range(100):
        psi = StateVector.from_vector(np.exp(1j * rng.uniform(0, 2 * np.pi, 7)))
        assert support_profile(T, psi).n_ab == 14
        assert not is_kd_classical(T, psi)
        assert witness(T, psi).rule == "Thm7"


@pytest.mark.parametrize("T", CATALOG_MATS, ids=CATALOG_IDS)
def test_marginals_and_phase_invariance(T, rng):
    for _ in range(50):
        psi = haar_state(T.d, rng)
        q = kd_distribution(T, psi)
        v = b_representation(T, psi)
        assert np.allclose(q.row_sums, np.abs(psi.u) ** 2, atol=1e-12)
        assert np.allclose(q.col_sums, np.abs(v) ** 2, atol=1e-12)
        assert q.total == pytest.approx(1.0, abs=1e-12)
        q2 = kd_distribution(T, StateVector(psi.u * np.exp(0.37j)))
        assert np.allclose(q.Q, q2.Q, atol=1e-14)


def _subspace_states(T, rng, n):
    d = T.d
    out = []
    while len(out) < n:
        S = rng.choice(d, int(rng.integers(1, d + 1)), replace=False)
        Tb = rng.choice(d, int(rng.integers(1, d + 1)), replace=False)
        B = subspace_basis(T, S, Tb)
        if B.shape[1]:
            out.append(StateVector(random_in_subspace(B, rng)))
    return out


@pytest.mark.parametrize("T", CATALOG_MATS, ids=CATALOG_IDS)
def test_uncertainty_relations(T, rng):
    M = stats(T).M_ab
    states = [haar_state(T.d, rng) for _ in range(500)] + _subspace_states(T, rng, 500)
    for psi in states:
        p = support_profile(T, psi)
        ha, hb = entropies(T, psi)
        assert p.n_a * p.n_b >= M ** -2 - 1e-9
        assert ha + hb >= -2 * math.log(M) - 1e-9
        assert ha <= math.log(p.n_a) + 1e-12 and hb <= math.log(p.n_b) + 1e-12


def test_entropies_examples():
    assert entropies(dft(5), basis_a(5, 0)) == pytest.approx((0.0, math.log(5)))
    assert entropies(spin1(), basis_a(3, 1)) == pytest.approx((0.0, math.log(2)))


def test_witness_spin1_full_support(rng):
    T = spin1()
    for _ in range(20):
        psi = haar_state(3, rng)
        assert support_profile(T, psi).n_ab == 6
        v = witness(T, psi)
        assert v.nonclassical and v.rule == "Thm7"


def test_witness_spin1_edge_state_inconclusive():
    T = spin1()
    B = subspace_basis(T, [0, 1], [0, 1])
    psi = StateVector.from_vector(B[:, 0])
    assert witness(T, psi).outcome == "Inconclusive"
    assert is_kd_classical(T, psi)


def test_witness_d12_thm7_beats_thm9(rng):
    T = tensor(u6("plain"), dft(2))
    st = stats(T)
    assert max(st.Z_r, st.Z_c) <= (T.d + 1) / 2
    psi = None
    while psi is None:
        S, Tb = rng.choice(12, 7, replace=False), rng.choice(12, 7, replace=False)
        try:
            psi = sample_state(T, S, Tb, seed=rng)
        except (NoStateError, DegenerateSupportError):
            pass
    assert support_profile(T, psi).n_ab == 14
    v = witness(T, psi)
    assert v.rule == "Thm7"
    assert not 14 > (3 * T.d) // 2
    assert not is_kd_classical(T, psi)


def test_witness_never_says_classical(rng):
    T = haar(4, rng)
    for _ in range(50):
        assert witness(T, haar_state(4, rng)).outcome in ("Nonclassical", "Inconclusive")


def test_classical_constraint_examples(rng):
    assert classify_classical_constraint(dft(5), basis_b(dft(5), 2))
    psi = haar_state(7, rng)
    assert not classify_classical_constraint(dft(7), psi)
    assert not is_kd_classical(dft(7), psi)
    with pytest.raises(InapplicableError):
        classify_classical_constraint(spin1(), basis_a(3, 0))
    with pytest.raises(InapplicableError):
        classify_classical_constraint(identity(4), basis_a(4, 0))


def test_state_json_round_trip(rng):
    psi = haar_state(5, rng)
    back = loads_state(dumps_state(psi))
    assert np.array_equal(back.u, psi.u)
    assert dumps_state(back) == dumps_state(psi)
