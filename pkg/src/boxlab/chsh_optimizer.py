"""Constructive CHSH maxima: local enumeration, quantum seesaw, NS linear program."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import box_model as bm
from . import operator_algebra as oa
from .simplex import linprog_exact


class ConvergenceWarning(UserWarning):
    pass


@dataclass
class OptimizationReport:
    value: float
    witness: dict[str, Any]
    iterations: int
    converged: bool
    method: str
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "iterations": self.iterations,
            "converged": self.converged,
            "witness": _jsonable(self.witness),
            **{k: _jsonable(v) for k, v in self.extra.items()},
        }


def _jsonable(obj):
    if isinstance(obj, bm.BipartiteBox):
        return {"p": obj.to_nested()}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


# -- classical ---------------------------------------------------------------

def local_strategies():
    """All 16 deterministic strategies in lexicographic (fa0, fa1, fb0, fb1) order."""
    for fa0, fa1, fb0, fb1 in itertools.product(bm.BITS, repeat=4):
        yield (fa0, fa1, fb0, fb1), bm.deterministic_box((fa0, fa1), (fb0, fb1))


def classical_max() -> OptimizationReport:
    best = None
    values = {}
    for strat, box in local_strategies():
        v = bm.chsh(box, bm.Valuation.SIGNED)
        values["".join(map(str, strat))] = v
        # strict comparison keeps the lexicographically first argmax
        if best is None or abs(v) > abs(best[0]):
            best = (v, strat, box)
    v, strat, box = best
    witness = {"fa": list(strat[:2]), "fb": list(strat[2:]), "box": box,
               "signed_value": v}
    return OptimizationReport(abs(v), witness, 16, True, "enumeration",
                              {"all_values": values})


# -- quantum seesaw ----------------------------------------------------------

def _sign_operator(m: np.ndarray) -> np.ndarray:
    """+/-1 observable maximizing Tr(O m); zero eigenvalues map to +1."""
    w, v = np.linalg.eigh(oa.hermitize(m))
    s = np.where(w >= -1e-14, 1.0, -1.0)
    return oa.hermitize((v * s) @ v.conj().T)


def _chsh_value(psi, A, B) -> float:
    return float(np.real(np.vdot(psi, _chsh_matrix(A, B) @ psi)))


def _chsh_matrix(A, B) -> np.ndarray:
    return (np.kron(A[0], B[0] + B[1]) + np.kron(A[1], B[0] - B[1]))


def _top_eigvec(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(oa.hermitize(m))
    return v[:, -1]


def _seesaw_run(dim, max_iters, rng, init, tol):
    eye = np.eye(dim, dtype=complex)
    if init == "identity":
        A = [eye.copy(), eye.copy()]
        B = [eye.copy(), eye.copy()]
    else:
        A = [oa.random_involution(dim, rng) for _ in range(2)]
        B = [oa.random_involution(dim, rng) for _ in range(2)]
    psi = _top_eigvec(_chsh_matrix(A, B))
    value = _chsh_value(psi, A, B)
    history = [value]
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        start = value
        Psi = psi.reshape(dim, dim)
        # <psi| A (x) K |psi> = Tr(A Psi K^T Psi^dag)
        A = [_sign_operator(Psi @ K.T @ Psi.conj().T) for K in (B[0] + B[1], B[0] - B[1])]
        history.append(_chsh_value(psi, A, B))
        # <psi| L (x) B |psi> = Tr(B (Psi^dag L Psi)^T)
        B = [_sign_operator((Psi.conj().T @ L @ Psi).T) for L in (A[0] + A[1], A[0] - A[1])]
        history.append(_chsh_value(psi, A, B))
        psi = _top_eigvec(_chsh_matrix(A, B))
        value = _chsh_value(psi, A, B)
        history.append(value)
        for prev, nxt in zip(history[-4:-1], history[-3:]):
            assert nxt >= prev - 1e-10, "seesaw step decreased the objective"
        if value - start < tol:
            converged = True
            break
    return value, psi, A, B, it, converged, history


def seesaw_quantum_max(dim: int = 2, restarts: int = 5, max_iters: int = 500,
                       seed: int | None = None, init: str = "random",
                       tol: float = 1e-10) -> OptimizationReport:
    """Alternating maximization of <A0B0 + A0B1 + A1B0 - A1B1>.

    Each sweep replaces Alice's observables by the sign of her effective
    operators, then Bob's, then the state by the top eigenvector of the
    CHSH operator; every step is a global maximization of one block, so
    the objective never decreases. ``init="identity"`` starts from
    A = B = I, a fixed point with value 2.
    """
    if dim < 2 or dim > oa.MAX_LOCAL_DIM:
        raise ValueError(f"dim must be in [2, {oa.MAX_LOCAL_DIM}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    children = np.random.SeedSequence(seed).spawn(restarts)
    best = None
    total_iters = 0
    any_converged = False
    for child in children:
        rng = np.random.default_rng(child)
        run = _seesaw_run(dim, max_iters, rng, init, tol)
        total_iters += run[4]
        any_converged |= run[5]
        if best is None or run[0] > best[0]:
            best = run
    if not any_converged:
        warnings.warn("no seesaw restart met the improvement threshold", ConvergenceWarning)
    value, psi, A, B, iters, converged, history = best
    if value > oa.TSIRELSON + oa.BOUND_SLACK:
        raise oa.BoundViolation(f"seesaw value {value!r} exceeds 2*sqrt(2)")
    witness = {"state": psi, "A0": A[0], "A1": A[1], "B0": B[0], "B1": B[1]}
    stationary = bool(np.ptp(history) < tol)
    return OptimizationReport(value, witness, total_iters, converged, "seesaw",
                              {"dim": dim, "restarts": restarts,
                               "stationary": stationary, "history": history})


def evaluate_quantum_witness(witness: dict) -> float:
    op = oa.chsh_operator(witness["A0"], witness["A1"], witness["B0"], witness["B1"])
    return oa.expectation(witness["state"], op.matrix)


# -- non-signaling polytope ---------------------------------------------------

_INDEX = list(itertools.product(bm.BITS, repeat=4))  # (x, y, a, b), C order


def functional_coefficients(signs=((1, 1), (1, -1)), valuation=bm.Valuation.SIGNED) -> list:
    """Coefficients of sum_xy s_xy C_xy as a linear form on the 16 table entries."""
    v = valuation.values()
    return [signs[x][y] * v[a] * v[b] for x, y, a, b in _INDEX]


def ns_constraints() -> tuple[list[list[int]], list[int]]:
    """Normalization of each (x, y) slice and both marginal equalities."""
    rows, rhs = [], []
    for x, y in itertools.product(bm.BITS, repeat=2):
        rows.append([int(k[0] == x and k[1] == y) for k in _INDEX])
        rhs.append(1)
    for x, a in itertools.product(bm.BITS, repeat=2):
        rows.append([(1 if k[1] == 0 else -1) * int(k[0] == x and k[2] == a) for k in _INDEX])
        rhs.append(0)
    for y, b in itertools.product(bm.BITS, repeat=2):
        rows.append([(1 if k[0] == 0 else -1) * int(k[1] == y and k[3] == b) for k in _INDEX])
        rhs.append(0)
    return rows, rhs


def ns_lp_max(coeffs, A_ub=(), b_ub=()) -> OptimizationReport:
    """Maximize a linear functional of the table over the NS polytope, exactly."""
    A_eq, b_eq = ns_constraints()
    res = linprog_exact(coeffs, A_eq, b_eq, A_ub, b_ub)
    if res.status != "optimal":
        raise RuntimeError(f"LP {res.status}")
    table = np.array([float(v) for v in res.x]).reshape(2, 2, 2, 2)
    box = bm.BipartiteBox(table, name="ns_vertex")
    witness = {"box": box, "exact": [str(v) for v in res.x]}
    return OptimizationReport(float(res.value), witness, res.pivots, True, "simplex",
                              {"exact_value": str(res.value)})


def nonsignaling_max() -> OptimizationReport:
    return ns_lp_max(functional_coefficients())


def chsh_variants() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Sign patterns of the eight CHSH-type functionals (one or three minus signs)."""
    out = []
    for s in itertools.product((1, -1), repeat=4):
        if s.count(-1) % 2 == 1:
            out.append(((s[0], s[1]), (s[2], s[3])))
    return out


def is_local(box: bm.BipartiteBox, tol: float = 1e-9) -> bool:
    """Membership in the local polytope: NS and every CHSH variant <= 2."""
    ok, _ = bm.is_nonsignaling(box, tol)
    if not ok:
        return False
    C = bm.correlators(box, bm.Valuation.SIGNED)
    return all(float((np.array(s) * C).sum()) <= 2 + tol for s in chsh_variants())
