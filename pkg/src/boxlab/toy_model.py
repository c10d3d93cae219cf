"""Angle-correlation toy model of a super-quantum box and its factorization check.

Alice measures spin directions A (pi/2) and A' (0), Bob measures B (pi/4)
and B' (3pi/4). The model prescribes E(pi/4) = +1 and E(3pi/4) = -1 for the
product expectation of two spins at that relative angle.

For a product state the four product expectations factorize as
<A_i B_j> = u_i v_j with every factor in [-1, 1]; ``separable_feasibility``
decides whether the prescribed targets admit such a factorization.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

ANGLE_TOL = 1e-12
DEFAULT_TOL = 1e-9

ALICE = ("A", "A'")   # factor index 0 -> A, 1 -> A'
BOB = ("B", "B'")     # factor index 0 -> B, 1 -> B'


class MissingAngle(KeyError):
    pass


@dataclass(frozen=True)
class AngleCorrelationModel:
    """Correlation table keyed by relative angle; lookups never interpolate."""

    table: Mapping[float, float]
    directions: Mapping[str, float] = field(default_factory=lambda: {
        "A'": 0.0, "B": math.pi / 4, "A": math.pi / 2, "B'": 3 * math.pi / 4})

    def __post_init__(self):
        for theta, e in self.table.items():
            if abs(e) > 1:
                raise ValueError(f"|E({theta})| = {abs(e)} > 1")

    def E(self, angle: float) -> float:
        angle = abs(angle)
        for key, val in self.table.items():
            if abs(key - angle) <= ANGLE_TOL:
                return float(val)
        raise MissingAngle(f"no tabulated value for angle {angle!r}")

    def relative_angle(self, alice: str, bob: str) -> float:
        return abs(self.directions[alice] - self.directions[bob])

    def correlation(self, alice: str, bob: str) -> float:
        return self.E(self.relative_angle(alice, bob))

    def targets(self) -> np.ndarray:
        """t[i][j] = E(angle between ALICE[i] and BOB[j])."""
        return np.array([[self.correlation(a, b) for b in BOB] for a in ALICE])


def pr_toy_model() -> AngleCorrelationModel:
    return AngleCorrelationModel({math.pi / 4: 1.0, 3 * math.pi / 4: -1.0})


def chsh_from_model(model: AngleCorrelationModel) -> float:
    """E(AB) + E(AB') + E(A'B) - E(A'B')."""
    return (model.correlation("A", "B") + model.correlation("A", "B'")
            + model.correlation("A'", "B") - model.correlation("A'", "B'"))


@dataclass(frozen=True)
class FeasibilitySystem:
    targets: np.ndarray

    def __post_init__(self):
        t = np.array(self.targets, dtype=float).reshape(2, 2)
        if np.any(np.abs(t) > 1):
            raise ValueError("targets must lie in [-1, 1]")
        t.setflags(write=False)
        object.__setattr__(self, "targets", t)

    def residual(self, u, v) -> float:
        return float(np.max(np.abs(np.outer(u, v) - self.targets)))


@dataclass(frozen=True)
class Feasible:
    u: tuple[float, float]
    v: tuple[float, float]
    residual: float

    verdict = "Feasible"


@dataclass(frozen=True)
class Infeasible:
    test: str              # "sign", "magnitude" or "zero-pattern"
    detail: str
    value: float           # the violating product / determinant

    verdict = "Infeasible"


def _rank_one(t: np.ndarray, rows, cols):
    """Factor the sub-block t[rows][:, cols] as u v^T with |u|, |v| <= 1."""
    u = np.zeros(2)
    v = np.zeros(2)
    if not rows or not cols:
        return u, v
    block = t[np.ix_(rows, cols)]
    i, j = np.unravel_index(np.argmax(np.abs(block)), block.shape)
    pivot = block[i, j]
    for jj, c in enumerate(cols):
        v[c] = block[i, jj]
    for ii, r in enumerate(rows):
        u[r] = block[ii, j] / pivot
    return u, v


def separable_feasibility(sys: FeasibilitySystem | np.ndarray,
                          tol: float = DEFAULT_TOL) -> Feasible | Infeasible:
    """Decide whether u_i v_j = t_ij (within tol) with u, v in [-1, 1]^2.

    All targets nonzero: each factor appears in exactly two products, so
    the sign product must be +1, and the 2x2 determinant must vanish.
    With zero targets each zero needs a zero factor; the 16 patterns of
    zeroed factors are enumerated and the remaining block factored.
    """
    if not isinstance(sys, FeasibilitySystem):
        sys = FeasibilitySystem(np.asarray(sys))
    t = sys.targets
    zero = np.abs(t) <= tol

    if not zero.any():
        sign = float(np.prod(np.sign(t)))
        if sign < 0:
            return Infeasible("sign", "product of the four target signs is -1; "
                              "each factor enters two products, so it must be +1", sign)
        det = float(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0])
        if abs(det) > tol:
            return Infeasible("magnitude", "t00*t11 != t01*t10", det)
        u, v = _rank_one(t, [0, 1], [0, 1])
        res = sys.residual(u, v)
        if res <= tol:
            return Feasible(tuple(map(float, u)), tuple(map(float, v)), res)
        return Infeasible("magnitude", "rank-one factorization misses a target", res)

    for zu0, zu1, zv0, zv1 in itertools.product((False, True), repeat=4):
        zu, zv = (zu0, zu1), (zv0, zv1)
        covered = np.array([[zu[i] or zv[j] for j in range(2)] for i in range(2)])
        if np.any(covered & ~zero) or np.any(zero & ~covered):
            continue
        rows = [i for i in range(2) if not zu[i]]
        cols = [j for j in range(2) if not zv[j]]
        u, v = _rank_one(t, rows, cols)
        res = sys.residual(u, v)
        if res <= tol:
            return Feasible(tuple(map(float, u)), tuple(map(float, v)), res)
    det = float(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0])
    return Infeasible("zero-pattern", "no assignment of zero factors covers the zero "
                      "targets while factoring the rest", det)


@dataclass(frozen=True)
class InconsistencyReport:
    equations: tuple[tuple[str, str, float], ...]
    targets: tuple[float, float, float, float]
    result: Feasible | Infeasible
    chsh: float
    argument: tuple[str, ...]

    @property
    def verdict(self) -> str:
        return self.result.verdict

    def to_dict(self) -> dict:
        res = {"verdict": self.verdict}
        if isinstance(self.result, Infeasible):
            res.update(test=self.result.test, detail=self.result.detail,
                       value=self.result.value)
        else:
            res.update(u=list(self.result.u), v=list(self.result.v))
        return {
            "chsh": self.chsh,
            "equations": [{"alice": a, "bob": b, "target": t} for a, b, t in self.equations],
            "targets": list(self.targets),
            "certificate": res,
            "argument": list(self.argument),
        }

    def render(self) -> str:
        lines = [f"CHSH of the angle model: {self.chsh:g}", "Factorized equations for a product state:"]
        for a, b, t in self.equations:
            lines.append(f"  <{a}{b}> = <{a}><{b}> = {t:+g}")
        lines.extend(self.argument)
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def paper_inconsistency_report(model: AngleCorrelationModel | None = None) -> InconsistencyReport:
    model = pr_toy_model() if model is None else model
    t = model.targets()
    equations = tuple((ALICE[i], BOB[j], float(t[i, j])) for i, j in
                      itertools.product(range(2), repeat=2))
    result = separable_feasibility(FeasibilitySystem(t))
    argument = ()
    if isinstance(result, Infeasible) and result.test == "sign":
        sg = lambda x: "+" if x > 0 else "-"
        forced = np.sign(t[0, 0] * t[0, 1] * t[1, 0])
        argument = (
            f"<A><B> {sg(t[0, 0])}, <A><B'> {sg(t[0, 1])}, <A'><B> {sg(t[1, 0])}.",
            "(<A><B>)(<A><B'>)(<A'><B>) = <A>^2 <B>^2 (<A'><B'>), so <A'><B'> "
            f"must be {sg(forced)}.",
            f"The model demands <A'><B'> = {t[1, 1]:+g}: the signs contradict.",
        )
    return InconsistencyReport(equations, tuple(float(x) for x in t.ravel()),
                               result, chsh_from_model(model), argument)
