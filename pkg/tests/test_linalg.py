import math
import os
import subprocess
import sys
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdcoinc import (BoundsError, DimensionError, SizeCapError, Tolerance, ValidationError,
                     dft, enumerate_minors, tao)
from kdcoinc import _kernels_np
from kdcoinc._accel import HAS_NUMBA
from kdcoinc.bases import haar_unitary
from kdcoinc.linalg import det, is_unitary, kernel_basis, minor_table, rank, submatrix

OMEGA = np.exp(2j * np.pi / 3)


def random_matrix(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


# --- unitarity --------------------------------------------------------------

def test_identity_is_unitary():
    assert is_unitary(np.eye(3))


def test_tao_is_unitary():
    assert is_unitary(tao().U)


def test_scaled_entry_breaks_unitarity():
    M = np.eye(3, dtype=complex)
    M[0, 0] = 1.01
    assert not is_unitary(M)


def test_non_square_raises():
    with pytest.raises(DimensionError):
        is_unitary(np.ones((2, 3)))


# --- submatrix --------------------------------------------------------------

def test_submatrix_identity_block():
    assert np.array_equal(submatrix(np.eye(3), [0, 1], [0, 1]), np.eye(2))


def test_submatrix_tao_block():
    U = tao().U
    expect = np.array([[1, 1, 1], [1, 1, OMEGA], [1, OMEGA, 1]]) / math.sqrt(6)
    assert np.allclose(submatrix(U, [0, 1, 2], [0, 1, 2]), expect, atol=1e-15)


def test_submatrix_empty_rows():
    assert submatrix(tao().U, [], [0, 3]).shape == (0, 2)


def test_submatrix_sorts_indices():
    U = tao().U
    assert np.array_equal(submatrix(U, [2, 0], [1]), U[[0, 2]][:, [1]])


def test_submatrix_out_of_range():
    with pytest.raises(BoundsError):
        submatrix(np.eye(3), [0, 3], [0])


def test_submatrix_duplicate_index():
    with pytest.raises(ValidationError):
        submatrix(np.eye(3), [1, 1], [0])


# --- det --------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 5])
def test_det_identity(k):
    assert det(np.eye(k)) == pytest.approx(1.0)


def test_det_swap():
    assert det([[0, 1], [1, 0]]) == pytest.approx(-1.0)


def test_det_empty_is_one():
    assert det(np.zeros((0, 0))) == 1.0


def test_det_tao_corner_vanishes():
    assert abs(det(tao().U[:2, :2])) < 1e-15


def test_det_nonsquare():
    with pytest.raises(DimensionError):
        det(np.ones((2, 3)))


def test_det_adjoint_is_conjugate(rng):
    for n in range(1, 7):
        M = random_matrix(rng, n, n)
        assert det(M.conj().T) == pytest.approx(np.conj(det(M)), rel=1e-10)


def test_det_of_unitary_has_unit_modulus(rng):
    for d in range(2, 8):
        assert abs(det(haar_unitary(d, rng))) == pytest.approx(1.0, abs=1e-12)


# --- rank and kernel --------------------------------------------------------

def test_rank_identity():
    assert rank(np.eye(3)) == 3


def test_rank_empty():
    assert rank(np.zeros((0, 5))) == 0


def test_rank_tao_block():
    assert rank(tao().U[4:6, 0:3]) == 2


def test_rank_tiny_matrix_is_zero():
    assert rank(np.full((2, 2), 1e-12)) == 0


def test_rank_respects_relative_threshold():
    M = np.diag([1.0, 1e-6])
    assert rank(M) == 2
    assert rank(M, Tolerance(zero_abs=1e-9, rank_rel=1e-5)) == 1


def test_kernel_identity_empty():
    assert kernel_basis(np.eye(3)) == []


def test_kernel_row_of_ones():
    (v,) = kernel_basis(np.array([[1.0, 1.0]]))
    assert np.allclose(v, np.array([1, -1]) / math.sqrt(2))


def test_kernel_dft7_block():
    U = dft(7).U
    ker = kernel_basis(U[np.ix_([3, 4, 5], [0, 1, 2, 3])])
    assert len(ker) == 1


def test_kernel_of_empty_rows_is_everything():
    ker = kernel_basis(np.zeros((0, 3)))
    assert np.allclose(np.column_stack(ker), np.eye(3))


@settings(max_examples=200, deadline=None)
@given(m=st.integers(1, 7), n=st.integers(1, 7), data=st.data())
def test_rank_nullity_and_residual(m, n, data):
    r = data.draw(st.integers(0, min(m, n)))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    M = random_matrix(rng, m, r) @ random_matrix(rng, r, n)
    ker = kernel_basis(M)
    tol = Tolerance()
    assert rank(M) == r
    assert rank(M) + len(ker) == n
    for v in ker:
        assert np.linalg.norm(M @ v) <= 10 * tol.zero_abs * max(np.linalg.norm(M, 2), 1.0)
    if ker:
        B = np.column_stack(ker)
        assert np.allclose(B.conj().T @ B, np.eye(len(ker)), atol=1e-12)


# --- minors -----------------------------------------------------------------

def test_minors_identity2():
    r = enumerate_minors(np.eye(2))
    assert r.vanishing == (2, 0)
    assert r.first_vanishing == ((0,), (1,))


def test_minors_tao():
    r = enumerate_minors(tao().U)
    assert r.vanishing[2] == 0 and r.total(3) == 400
    assert r.vanishing[1] > 0


def test_minors_dft5_none_vanish():
    assert enumerate_minors(dft(5).U).n_vanishing == 0


@pytest.mark.parametrize("d", [2, 4, 6])
def test_minor_totals(d, rng):
    r = enumerate_minors(haar_unitary(d, rng))
    for k in range(1, d + 1):
        assert r.vanishing[k - 1] + r.nonvanishing[k - 1] == comb(d, k) ** 2 == r.total(k)


def test_largest_vanishing_is_recorded():
    r = enumerate_minors(dft(4).U)
    rows, cols = r.first_vanishing
    assert len(rows) == r.largest_vanishing_size == len(cols)
    assert abs(det(dft(4).U[np.ix_(rows, cols)])) <= 1e-9


def test_minor_cap():
    with pytest.raises(SizeCapError):
        minor_table(np.eye(13))


def test_minor_report_dict_is_one_based():
    doc = enumerate_minors(np.eye(2)).to_dict()
    assert doc["first_vanishing_rows"] == [1] and doc["first_vanishing_cols"] == [2]


def test_tolerance_must_be_positive():
    with pytest.raises(ValidationError):
        Tolerance(zero_abs=0.0)


# --- backend agreement ------------------------------------------------------

@pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")
def test_backends_agree(rng):
    from kdcoinc import _kernels_nb as nb

    for U in (tao().U, dft(6).U, haar_unitary(5, rng)):
        U = np.ascontiguousarray(U)
        d = U.shape[0]
        assert np.array_equal(nb.dim_table(U, 1e-10, 1e-9), _kernels_np.dim_table(U, 1e-10, 1e-9))
        for k in (1, 2, 3):
            idx = np.array(list(combinations(range(d), k)))
            assert np.allclose(nb.minor_moduli(U, idx, idx), _kernels_np.minor_moduli(U, idx, idx),
                               atol=1e-13)
        dims = nb.dim_table(U, 1e-10, 1e-9)
        a, b = nb.diagram_from_dims(dims, d), _kernels_np.diagram_from_dims(dims, d)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        masks = np.arange(1, 1 << d, dtype=np.int64)
        assert np.array_equal(nb.commute_table(U, masks, masks, 1e-9),
                              _kernels_np.commute_table(U, masks, masks, 1e-9))
    M = random_matrix(rng, 4, 6)
    assert nb.rank_qrcp(M.copy(), 1e-10, 1e-9) == _kernels_np.rank_qrcp(M.copy(), 1e-10, 1e-9)
    S = random_matrix(rng, 5, 5)
    assert nb.det_lu(S.copy()) == pytest.approx(_kernels_np.det_lu(S.copy()), rel=1e-10)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, KDCOINC_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import kdcoinc; print(kdcoinc.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
