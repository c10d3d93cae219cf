"""Bipartite boxes as conditional probability tables P(a, b | x, y).

Tables are numpy arrays of shape ``(2, 2, 2, 2)`` indexed ``[x, y, a, b]``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

NORM_TOL = 1e-12
NEG_TOL = 1e-15
DEFAULT_TOL = 1e-9

BITS = (0, 1)


class BoxError(ValueError):
    pass


class NormalizationError(BoxError):
    pass


class NegativeProbability(BoxError):
    pass


class WeightError(BoxError):
    pass


class Valuation(enum.Enum):
    """Map from a raw output k in {0, 1} to the number entering correlators."""

    RAW01 = "raw"
    SIGNED = "signed"

    def value_of(self, k: int) -> float:
        if self is Valuation.RAW01:
            return float(k)
        return float((-1) ** k)

    def values(self) -> np.ndarray:
        return np.array([self.value_of(0), self.value_of(1)])

    @classmethod
    def parse(cls, name: "str | Valuation") -> "Valuation":
        if isinstance(name, Valuation):
            return name
        key = name.strip().lower()
        aliases = {"raw": cls.RAW01, "raw01": cls.RAW01,
                   "signed": cls.SIGNED, "pm1": cls.SIGNED}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown valuation {name!r}") from None


@dataclass(frozen=True)
class BipartiteBox:
    """Validated, read-only 2x2x2x2 table of P(a, b | x, y)."""

    p: np.ndarray
    name: str = field(default="box", compare=False)

    def __post_init__(self):
        arr = np.array(self.p, dtype=float)
        if arr.shape != (2, 2, 2, 2):
            if arr.size != 16:
                raise BoxError(f"expected 16 entries, got {arr.size}")
            arr = arr.reshape(2, 2, 2, 2)
        if np.any(~np.isfinite(arr)):
            raise BoxError("table contains non-finite entries")
        if np.any(arr < -NEG_TOL):
            x, y, a, b = np.argwhere(arr < -NEG_TOL)[0]
            raise NegativeProbability(
                f"p(a={a},b={b}|x={x},y={y}) = {arr[x, y, a, b]!r} < 0")
        arr = np.where(arr < 0, 0.0, arr)
        sums = arr.sum(axis=(2, 3))
        bad = np.abs(sums - 1.0) > NORM_TOL
        if np.any(bad):
            x, y = np.argwhere(bad)[0]
            raise NormalizationError(
                f"slice (x={x}, y={y}) sums to {sums[x, y]!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    def __getitem__(self, idx):
        return self.p[idx]

    def __eq__(self, other):
        if not isinstance(other, BipartiteBox):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p))

    def __hash__(self):
        return hash(self.p.tobytes())

    def to_nested(self) -> list:
        return self.p.tolist()


@dataclass(frozen=True)
class NsViolation:
    party: str
    output: int
    input: int
    other_inputs: tuple[int, int]
    gap: float


@dataclass(frozen=True)
class NsWitness:
    violations: tuple[NsViolation, ...] = ()

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)


def new_box(table, name: str = "box") -> BipartiteBox:
    return BipartiteBox(np.asarray(table, dtype=float), name=name)


def pr_box() -> BipartiteBox:
    """The PR box: P(a, b | x, y) = 1/2 when a XOR b == x*y, else 0."""
    p = np.zeros((2, 2, 2, 2))
    for x, y, a, b in itertools.product(BITS, repeat=4):
        if a ^ b == x * y:
            p[x, y, a, b] = 0.5
    return BipartiteBox(p, name="pr")


def uniform_box() -> BipartiteBox:
    return BipartiteBox(np.full((2, 2, 2, 2), 0.25), name="uniform")


def _as_map(f) -> Callable[[int], int]:
    if callable(f):
        return f
    if isinstance(f, Mapping):
        return f.__getitem__
    seq = tuple(f)
    return seq.__getitem__


def deterministic_box(fa, fb) -> BipartiteBox:
    """Local deterministic strategy a = fa(x), b = fb(y).

    ``fa`` and ``fb`` may be callables, mappings or length-2 sequences.
    """
    fa, fb = _as_map(fa), _as_map(fb)
    p = np.zeros((2, 2, 2, 2))
    for x, y in itertools.product(BITS, repeat=2):
        p[x, y, int(fa(x)), int(fb(y))] = 1.0
    label = "det" + "".join(str(int(f(k))) for f in (fa, fb) for k in BITS)
    return BipartiteBox(p, name=label)


def signaling_box() -> BipartiteBox:
    """Bob's output copies Alice's input (b = x), Alice uniform."""
    p = np.zeros((2, 2, 2, 2))
    for x, y, a in itertools.product(BITS, repeat=3):
        p[x, y, a, x] = 0.5
    return BipartiteBox(p, name="signaling_b_eq_x")


def mix(boxes: Sequence[BipartiteBox], weights: Sequence[float]) -> BipartiteBox:
    if len(boxes) == 0 or len(boxes) != len(weights):
        raise WeightError("need equally many boxes and weights (at least one)")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise WeightError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > NORM_TOL:
        raise WeightError(f"weights sum to {w.sum()!r}, not 1")
    p = np.tensordot(w, np.stack([b.p for b in boxes]), axes=1)
    return BipartiteBox(p, name="mix")


def marginal_a(box: BipartiteBox, a: int, x: int, y: int | None = None) -> float:
    """P(a | x, y), or its average over y when y is omitted."""
    if y is None:
        return float(box.p[x, :, a, :].sum(axis=1).mean())
    return float(box.p[x, y, a, :].sum())


def marginal_b(box: BipartiteBox, b: int, y: int, x: int | None = None) -> float:
    """P(b | x, y), or its average over x when x is omitted."""
    if x is None:
        return float(box.p[:, y, :, b].sum(axis=1).mean())
    return float(box.p[x, y, :, b].sum())


def marginals(box: BipartiteBox) -> dict:
    """All conditional marginals, keyed for reporting."""
    out = {"alice": {}, "bob": {}}
    for x, a in itertools.product(BITS, repeat=2):
        out["alice"][f"a={a}|x={x}"] = {
            "y=0": marginal_a(box, a, x, 0),
            "y=1": marginal_a(box, a, x, 1),
            "avg": marginal_a(box, a, x),
        }
    for y, b in itertools.product(BITS, repeat=2):
        out["bob"][f"b={b}|y={y}"] = {
            "x=0": marginal_b(box, b, y, 0),
            "x=1": marginal_b(box, b, y, 1),
            "avg": marginal_b(box, b, y),
        }
    return out


def is_nonsignaling(box: BipartiteBox, tol: float = DEFAULT_TOL) -> tuple[bool, NsWitness]:
    violations = []
    for x, a in itertools.product(BITS, repeat=2):
        gap = abs(marginal_a(box, a, x, 0) - marginal_a(box, a, x, 1))
        if gap > tol:
            violations.append(NsViolation("alice", a, x, (0, 1), gap))
    for y, b in itertools.product(BITS, repeat=2):
        gap = abs(marginal_b(box, b, y, 0) - marginal_b(box, b, y, 1))
        if gap > tol:
            violations.append(NsViolation("bob", b, y, (0, 1), gap))
    witness = NsWitness(tuple(violations))
    return not witness, witness


def correlator(box: BipartiteBox, x: int, y: int,
               valuation: Valuation | str = Valuation.SIGNED) -> float:
    v = Valuation.parse(valuation).values()
    return float(v @ box.p[x, y] @ v)


CHSH_SIGNS = np.array([[1.0, 1.0], [1.0, -1.0]])


def correlators(box: BipartiteBox, valuation=Valuation.SIGNED) -> np.ndarray:
    return np.array([[correlator(box, x, y, valuation) for y in BITS] for x in BITS])


def chsh(box: BipartiteBox, valuation: Valuation | str = Valuation.SIGNED) -> float:
    """C00 + C01 + C10 - C11."""
    return float((CHSH_SIGNS * correlators(box, valuation)).sum())


def sequential_symmetry_check(box: BipartiteBox,
                              tol: float = NORM_TOL) -> tuple[bool, float]:
    """Compare P(a|b,x,y) P(b|y) with P(b|a,x,y) P(a|x) over the support.

    Marginals P(a|x), P(b|y) use the averaging convention, so the residual
    is zero exactly when the averaged marginals match the slice marginals.
    Cells whose conditioning event has probability zero are skipped.
    """
    worst = 0.0
    for x, y, a, b in itertools.product(BITS, repeat=4):
        pab = box.p[x, y, a, b]
        if pab <= 0:
            continue
        pa_xy = marginal_a(box, a, x, y)
        pb_xy = marginal_b(box, b, y, x)
        if pa_xy <= 0 or pb_xy <= 0:
            continue
        lhs = (pab / pb_xy) * marginal_b(box, b, y)
        rhs = (pab / pa_xy) * marginal_a(box, a, x)
        worst = max(worst, abs(lhs - rhs))
    return worst <= tol, float(worst)


def _slice_cdf(box: BipartiteBox) -> np.ndarray:
    cdf = np.cumsum(box.p.reshape(2, 2, 4), axis=2)
    cdf[..., -1] = 1.0
    return cdf


def sample_many(box: BipartiteBox, x, y, rng: np.random.Generator):
    """Vectorized draw of (a, b) arrays for input arrays x, y."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    cdf = _slice_cdf(box)[x, y]
    u = rng.random(x.shape)
    k = (u[..., None] >= cdf).sum(axis=-1)
    return k // 2, k % 2


def sample(box: BipartiteBox, x: int, y: int, rng: np.random.Generator) -> tuple[int, int]:
    a, b = sample_many(box, np.array([x]), np.array([y]), rng)
    return int(a[0]), int(b[0])
