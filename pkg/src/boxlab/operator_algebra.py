"""Dense Hermitian-operator toolkit for bipartite CHSH scenarios.

Alice's observables act on H_A, Bob's on H_B; joint operators live on
H_A (x) H_B with Alice's factor first (``np.kron(A, B)``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .box_model import BipartiteBox, BITS

HERM_TOL = 1e-12
EIG_TOL = 1e-10
STATE_TOL = 1e-12
PROJ_TOL = 1e-10
TSIRELSON = 2.0 * np.sqrt(2.0)
BOUND_SLACK = 1e-9
MAX_LOCAL_DIM = 8


class OperatorError(ValueError):
    pass


class DimensionMismatch(OperatorError):
    pass


class NonHermitian(OperatorError):
    pass


class SpectrumError(OperatorError):
    pass


class ProjectorError(OperatorError):
    pass


class StateError(OperatorError):
    pass


class BoundViolation(AssertionError):
    """Raised when |<C>| exceeds 2*sqrt(2); indicates a bug, not physics."""


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class Observable:
    m: np.ndarray
    label: str | None = None

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"observable must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERM_TOL:
            raise NonHermitian(f"matrix {self.label or ''} is not Hermitian")
        m = hermitize(m)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return self.m.shape[0]

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.m)

    def spectrum_bounded(self, tol: float = EIG_TOL) -> bool:
        return bool(np.all(np.abs(self.eigvals()) <= 1.0 + tol))

    def is_involution(self, tol: float = EIG_TOL) -> bool:
        return bool(np.allclose(self.m @ self.m, np.eye(self.dim), atol=tol))


def as_observable(m, label: str | None = None) -> Observable:
    if isinstance(m, Observable):
        return m
    return Observable(np.asarray(m), label)


def _matrix(m) -> np.ndarray:
    return m.m if isinstance(m, Observable) else np.asarray(m, dtype=complex)


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix on a finite-dimensional space."""

    data: np.ndarray

    def __post_init__(self):
        d = np.array(self.data, dtype=complex)
        if d.ndim == 1:
            if abs(np.linalg.norm(d) - 1.0) > STATE_TOL:
                raise StateError(f"state vector has norm {np.linalg.norm(d)!r}")
        elif d.ndim == 2 and d.shape[0] == d.shape[1]:
            if np.max(np.abs(d - d.conj().T)) > HERM_TOL:
                raise StateError("density matrix is not Hermitian")
            d = hermitize(d)
            if abs(np.trace(d).real - 1.0) > STATE_TOL:
                raise StateError(f"density matrix has trace {np.trace(d).real!r}")
            if np.linalg.eigvalsh(d).min() < -EIG_TOL:
                raise StateError("density matrix is not positive semidefinite")
        else:
            raise StateError(f"bad state shape {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "data", d)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data


def as_state(s) -> QuantumState:
    return s if isinstance(s, QuantumState) else QuantumState(np.asarray(s))


def tensor(A, B) -> Observable:
    return Observable(np.kron(_matrix(A), _matrix(B)))


def embed_alice(A, dim_b: int) -> np.ndarray:
    return np.kron(_matrix(A), np.eye(dim_b))


def embed_bob(B, dim_a: int) -> np.ndarray:
    return np.kron(np.eye(dim_a), _matrix(B))


def commutator(A, B) -> np.ndarray:
    a, b = _matrix(A), _matrix(B)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return a @ b - b @ a


def expectation(state, M) -> float:
    """<psi|M|psi> or Tr(rho M); the imaginary part must vanish."""
    st = as_state(state)
    m = _matrix(M)
    if m.shape != (st.dim, st.dim):
        raise DimensionMismatch(f"operator {m.shape} vs state dimension {st.dim}")
    if st.is_pure:
        val = np.vdot(st.data, m @ st.data)
    else:
        val = np.trace(st.data @ m)
    if abs(val.imag) > EIG_TOL:
        raise NonHermitian(f"expectation has imaginary part {val.imag!r}")
    return float(val.real)


@dataclass(frozen=True)
class ChshOperator:
    matrix: np.ndarray
    observables: tuple[Observable, Observable, Observable, Observable]

    @property
    def dims(self) -> tuple[int, int]:
        return self.observables[0].dim, self.observables[2].dim

    def max_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).max())


def _check_parties(A0, A1, B0, B1):
    obs = tuple(as_observable(m, lbl) for m, lbl in
                zip((A0, A1, B0, B1), ("A0", "A1", "B0", "B1")))
    if obs[0].dim != obs[1].dim or obs[2].dim != obs[3].dim:
        raise DimensionMismatch("each party's two observables must share a dimension")
    return obs


def _bell_combination(obs, signs) -> np.ndarray:
    a0, a1, b0, b1 = (o.m for o in obs)
    s00, s01, s10, s11 = signs
    return (s00 * np.kron(a0, b0) + s01 * np.kron(a0, b1)
            + s10 * np.kron(a1, b0) + s11 * np.kron(a1, b1))


def chsh_operator(A0, A1, B0, B1) -> ChshOperator:
    """A0 B0 + A0 B1 + A1 B0 - A1 B1 on H_A (x) H_B."""
    obs = _check_parties(A0, A1, B0, B1)
    return ChshOperator(hermitize(_bell_combination(obs, (1, 1, 1, -1))), obs)


@dataclass(frozen=True)
class LandauReport:
    identity_residual: float
    psd_margin: float
    mirror_identity_residual: float
    mirror_psd_margin: float

    def holds(self, tol: float = 1e-9) -> bool:
        return self.psd_margin >= -tol and self.mirror_psd_margin >= -tol


def landau_check(A0, A1, B0, B1, tol: float = EIG_TOL) -> LandauReport:
    """Evaluate Landau's operator bound on the CHSH operator and its mirror.

    With C = A0B0 + A0B1 + A1B0 - A1B1 and D = A0B0 - A0B1 + A1B0 + A1B1,

        4I + [A0, A1] (x) [B1, B0] - C^2   and   4I + [A0, A1] (x) [B0, B1] - D^2

    vanish when every observable squares to I and are positive
    semidefinite when every spectrum lies in [-1, 1].
    """
    obs = _check_parties(A0, A1, B0, B1)
    for o in obs:
        if not o.spectrum_bounded(tol):
            raise SpectrumError(f"{o.label}: eigenvalue outside [-1, 1]")
    a0, a1, b0, b1 = (o.m for o in obs)
    eye = np.eye(a0.shape[0] * b0.shape[0])
    ca = commutator(a0, a1)

    c = _bell_combination(obs, (1, 1, 1, -1))
    delta_c = hermitize(4 * eye + np.kron(ca, commutator(b1, b0)) - c @ c)
    d = _bell_combination(obs, (1, -1, 1, 1))
    delta_d = hermitize(4 * eye + np.kron(ca, commutator(b0, b1)) - d @ d)

    return LandauReport(
        identity_residual=float(np.linalg.norm(delta_c, 2)),
        psd_margin=float(np.linalg.eigvalsh(delta_c).min()),
        mirror_identity_residual=float(np.linalg.norm(delta_d, 2)),
        mirror_psd_margin=float(np.linalg.eigvalsh(delta_d).min()),
    )


def tsirelson_check(A0, A1, B0, B1, state) -> float:
    """|<C>| for the given state; raises BoundViolation above 2*sqrt(2)."""
    obs = _check_parties(A0, A1, B0, B1)
    for o in obs:
        if not o.spectrum_bounded():
            raise SpectrumError(f"{o.label}: eigenvalue outside [-1, 1]")
    value = abs(expectation(state, chsh_operator(*obs).matrix))
    if value > TSIRELSON + BOUND_SLACK:
        raise BoundViolation(f"|<C>| = {value!r} exceeds 2*sqrt(2)")
    return value


def projectors_from_observable(M, tol: float = PROJ_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenprojectors (for outcome 0, outcome 1) of a 0/1-valued observable."""
    m = _matrix(M)
    p1 = hermitize(m)
    p0 = np.eye(m.shape[0]) - p1
    _check_projectors(p0, p1, tol)
    return p0, p1


def _check_projectors(p0, p1, tol):
    if p0.shape != p1.shape:
        raise ProjectorError("projector shapes differ")
    for p in (p0, p1):
        if np.max(np.abs(p @ p - p)) > tol:
            raise ProjectorError("operator is not idempotent")
        if np.max(np.abs(p - p.conj().T)) > tol:
            raise ProjectorError("projector is not Hermitian")
    if np.max(np.abs(p0 + p1 - np.eye(p0.shape[0]))) > tol:
        raise ProjectorError("projectors do not sum to the identity")


def _measurement(meas, tol) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(meas, (tuple, list)) and len(meas) == 2:
        p0, p1 = (_matrix(m) for m in meas)
        _check_projectors(p0, p1, tol)
        return p0, p1
    return projectors_from_observable(meas, tol)


def signed_from_projectors(p0, p1) -> np.ndarray:
    """+1 on outcome 0, -1 on outcome 1 (equivalently I - 2 P1)."""
    return _matrix(p0) - _matrix(p1)


def signed_from_01(M) -> np.ndarray:
    m = _matrix(M)
    return np.eye(m.shape[0]) - 2 * m


def box_from_quantum(state, a_meas: Sequence, b_meas: Sequence,
                     tol: float = PROJ_TOL) -> BipartiteBox:
    """Born-rule table p(x,y,a,b) = <P^A_{x,a} (x) P^B_{y,b}>.

    Each measurement is either a pair of projectors ``(P0, P1)`` or a
    single observable with eigenvalues 0 and 1 (its own outcome-1 projector).
    """
    a_proj = [_measurement(m, tol) for m in a_meas]
    b_proj = [_measurement(m, tol) for m in b_meas]
    if len(a_proj) != 2 or len(b_proj) != 2:
        raise DimensionMismatch("need two measurements per party")
    st = as_state(state)
    da, db = a_proj[0][0].shape[0], b_proj[0][0].shape[0]
    if da * db != st.dim:
        raise DimensionMismatch(f"state dimension {st.dim} != {da}*{db}")
    p = np.zeros((2, 2, 2, 2))
    for x, y, a, b in itertools.product(BITS, repeat=4):
        p[x, y, a, b] = expectation(st, np.kron(a_proj[x][a], b_proj[y][b]))
    # Born probabilities carry rounding noise; clip and renormalize per slice
    p = np.clip(p, 0.0, None)
    p /= p.sum(axis=(2, 3), keepdims=True)
    return BipartiteBox(p, name="quantum")


# -- standard configurations and random ensembles ---------------------------

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def optimal_qubit_config() -> dict:
    """Maximally entangled state with observables reaching 2*sqrt(2).

    Returns signed (+/-1) observables and the matching 0/1 observables.
    """
    s = 1 / np.sqrt(2)
    signed = {
        "A0": PAULI_Z, "A1": PAULI_X,
        "B0": s * (PAULI_Z + PAULI_X), "B1": s * (PAULI_Z - PAULI_X),
    }
    zero_one = {k: 0.5 * (np.eye(2) - v) for k, v in signed.items()}
    return {"state": PHI_PLUS.copy(), "signed": signed, "zero_one": zero_one}


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitize(g)


def random_involution(d: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian with eigenvalues in {-1, +1}: sign of a Gaussian Hermitian."""
    w, v = np.linalg.eigh(random_hermitian(d, rng))
    s = np.where(w >= 0, 1.0, -1.0)
    return hermitize((v * s) @ v.conj().T)


def random_contraction(d: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian with eigenvalues uniform in [-1, 1] and random eigenbasis."""
    u = random_unitary(d, rng)
    w = rng.uniform(-1.0, 1.0, size=d)
    return hermitize((u * w) @ u.conj().T)


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return hermitize(rho / np.trace(rho).real)


def random_projective_measurement(d: int, rng: np.random.Generator,
                                  rank: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    u = random_unitary(d, rng)
    k = int(rng.integers(0, d + 1)) if rank is None else rank
    p1 = u[:, :k] @ u[:, :k].conj().T
    p1 = hermitize(p1)
    return np.eye(d) - p1, p1
