"""Pure states, support profiles and the Kirkwood-Dirac distribution.

A state is stored by its A-components ``u[i] = <a_i|psi>``; the
B-components are ``v = U^dagger u``. The KD distribution is

    Q[i, j] = <a_i|psi> <psi|b_j> <b_j|a_i> = u[i] * conj(v[j]) * conj(U[i, j]).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bases import BasisStats, TransitionMatrix, decode_complex, encode_complex, stats
from .errors import DimensionError, FormatError, InapplicableError, ValidationError

NORM_ATOL = 1e-8

NONCLASSICAL = "Nonclassical"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class StateVector:
    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex).ravel().copy()
        if not np.all(np.isfinite(u)):
            raise ValidationError("state has non-finite components")
        n2 = float(np.vdot(u, u).real)
        if n2 == 0.0:
            raise ValidationError("zero vector is not a state")
        if abs(n2 - 1.0) > NORM_ATOL:
            raise ValidationError(f"state is not normalized (|u|^2 = {n2})")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @classmethod
    def from_vector(cls, x) -> "StateVector":
        """Normalize ``x`` and wrap it."""
        x = np.asarray(x, dtype=complex).ravel()
        n = np.linalg.norm(x)
        if n == 0.0:
            raise ValidationError("zero vector is not a state")
        return cls(x / n)

    @classmethod
    def from_b(cls, T: TransitionMatrix, v) -> "StateVector":
        """Build a state from its B-components (normalized here)."""
        v = np.asarray(v, dtype=complex).ravel()
        if v.shape != (T.d,):
            raise DimensionError(f"expected {T.d} components, got {v.shape}")
        return cls.from_vector(T.U @ v)

    @property
    def d(self) -> int:
        return self.u.shape[0]


def basis_a(d: int, i: int) -> StateVector:
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return StateVector(e)


def basis_b(T: TransitionMatrix, j: int) -> StateVector:
    return StateVector(T.U[:, j])


def haar_state(d: int, rng=None) -> StateVector:
    rng = np.random.default_rng(rng)
    return StateVector.from_vector(rng.standard_normal(d) + 1j * rng.standard_normal(d))


@dataclass(frozen=True)
class SupportProfile:
    S: tuple
    T: tuple

    @property
    def n_a(self) -> int:
        return len(self.S)

    @property
    def n_b(self) -> int:
        return len(self.T)

    @property
    def n_ab(self) -> int:
        return self.n_a + self.n_b


@dataclass(frozen=True, eq=False)
class KDDistribution:
    Q: np.ndarray
    min_real: float
    max_abs_imag: float
    total: complex

    @property
    def row_sums(self) -> np.ndarray:
        return self.Q.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.Q.sum(axis=0)


@dataclass(frozen=True)
class WitnessVerdict:
    outcome: str
    rule: str = None
    details: str = ""

    @property
    def nonclassical(self) -> bool:
        return self.outcome == NONCLASSICAL


def _check_dims(T: TransitionMatrix, psi: StateVector):
    if psi.d != T.d:
        raise DimensionError(f"state has d={psi.d}, transition matrix d={T.d}")


def b_representation(T: TransitionMatrix, psi: StateVector) -> np.ndarray:
    _check_dims(T, psi)
    return T.U.conj().T @ psi.u


def support_profile(T: TransitionMatrix, psi: StateVector) -> SupportProfile:
    v = b_representation(T, psi)
    z = T.tol.zero_abs
    S = tuple(int(i) for i in np.flatnonzero(np.abs(psi.u) > z))
    Tb = tuple(int(j) for j in np.flatnonzero(np.abs(v) > z))
    if not S or not Tb:
        raise ValidationError("state has empty support at this tolerance")
    return SupportProfile(S, Tb)


def kd_distribution(T: TransitionMatrix, psi: StateVector) -> KDDistribution:
    v = b_representation(T, psi)
    Q = psi.u[:, None] * v.conj()[None, :] * T.U.conj()
    Q.setflags(write=False)
    return KDDistribution(Q, float(Q.real.min()), float(np.abs(Q.imag).max()), complex(Q.sum()))


def is_kd_classical(T: TransitionMatrix, psi: StateVector) -> bool:
    q = kd_distribution(T, psi)
    z = T.tol.zero_abs
    return q.max_abs_imag <= z and q.min_real >= -z


def _shannon(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def entropies(T: TransitionMatrix, psi: StateVector) -> tuple:
    """Shannon entropies (natural log) of the A and B outcome distributions."""
    v = b_representation(T, psi)
    return _shannon(np.abs(psi.u) ** 2), _shannon(np.abs(v) ** 2)


def witness(T: TransitionMatrix, psi: StateVector, basis_stats: BasisStats = None) -> WitnessVerdict:
    """Certify KD nonclassicality from support sizes and the zero pattern of U.

    Rules are tried in order: ``Thm7`` (few zeros per pair of rows/columns
    and n_ab > d + 1), ``Prop10`` (the larger support beats the zero count
    and n_ab > d + 1), ``Thm9`` (M_ab < 1 and n_ab > floor(3d/2)). Never
    decides "classical".
    """
    st = basis_stats if basis_stats is not None else stats(T)
    prof = support_profile(T, psi)
    d = T.d
    zmax = max(st.Z_r, st.Z_c)
    n_ab = prof.n_ab
    if 2 * zmax <= d + 1 and n_ab > d + 1:
        return WitnessVerdict(NONCLASSICAL, "Thm7",
                              f"max(Z_r, Z_c)={zmax} <= (d+1)/2 and n_ab={n_ab} > {d + 1}")
    if max(prof.n_a, prof.n_b) > zmax and n_ab > d + 1:
        return WitnessVerdict(NONCLASSICAL, "Prop10",
                              f"max(n_a, n_b)={max(prof.n_a, prof.n_b)} > {zmax} and n_ab={n_ab} > {d + 1}")
    if st.M_ab < 1.0 - T.tol.zero_abs and n_ab > (3 * d) // 2:
        return WitnessVerdict(NONCLASSICAL, "Thm9",
                              f"M_ab={st.M_ab:.6g} < 1 and n_ab={n_ab} > {(3 * d) // 2}")
    return WitnessVerdict(INCONCLUSIVE, None, f"n_ab={n_ab}, max(Z_r, Z_c)={zmax}")


def classify_classical_constraint(T: TransitionMatrix, psi: StateVector,
                                  basis_stats: BasisStats = None) -> bool:
    """Necessary condition for classicality near MUB.

    Requires d >= 3 and (d-1)/(d+1) < (m_ab/M_ab)^2; then any KD-classical
    state is a basis vector or has n_ab <= d. Returns whether ``psi``
    meets that condition.
    """
    st = basis_stats if basis_stats is not None else stats(T)
    d = T.d
    ratio2 = (st.m_ab / st.M_ab) ** 2
    if d < 3 or not (d - 1) / (d + 1) < ratio2:
        raise InapplicableError(
            f"needs d >= 3 and (d-1)/(d+1) < (m/M)^2; got d={d}, (m/M)^2={ratio2:.6g}")
    prof = support_profile(T, psi)
    return prof.n_a == 1 or prof.n_b == 1 or prof.n_ab <= d


# --- JSON ------------------------------------------------------------------

def state_to_dict(psi: StateVector) -> dict:
    return {"d": psi.d, "u": [encode_complex(z) for z in psi.u]}


def state_from_dict(obj: dict, normalize: bool = False) -> StateVector:
    try:
        d = int(obj["d"])
        comps = obj["u"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed state JSON: {exc}") from None
    if len(comps) != d:
        raise FormatError(f"expected {d} components, got {len(comps)}")
    u = np.array([decode_complex(p) for p in comps], dtype=complex)
    return StateVector.from_vector(u) if normalize else StateVector(u)


def dumps_state(psi: StateVector) -> str:
    return json.dumps(state_to_dict(psi))


def loads_state(text: str, normalize: bool = False) -> StateVector:
    return state_from_dict(json.loads(text), normalize)
