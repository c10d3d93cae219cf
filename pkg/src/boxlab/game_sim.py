"""Monte Carlo play of the two-party box game and statistics on transcripts."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import box_model as bm


class EmptyCell(ValueError):
    pass


@dataclass(frozen=True)
class GameTranscript:
    """Rounds t = 0..n-1 stored column-wise; ``rounds()`` yields tuples."""

    x: np.ndarray
    y: np.ndarray
    a: np.ndarray
    b: np.ndarray
    box_id: str = "box"
    seed: int | None = None

    def __post_init__(self):
        cols = [np.asarray(c, dtype=np.int8) for c in (self.x, self.y, self.a, self.b)]
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("transcript columns differ in length")
        for name, c in zip("xyab", cols):
            if c.size and (c.min() < 0 or c.max() > 1):
                raise ValueError(f"column {name} must be binary")
            c.setflags(write=False)
            object.__setattr__(self, name, c)

    def __len__(self):
        return len(self.x)

    def rounds(self):
        for t in range(len(self)):
            yield t, int(self.x[t]), int(self.y[t]), int(self.a[t]), int(self.b[t])

    def input_counts(self) -> np.ndarray:
        counts = np.zeros((2, 2), dtype=np.int64)
        np.add.at(counts, (self.x, self.y), 1)
        return counts

    def to_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps({"meta": {"box_id": self.box_id, "seed": self.seed,
                                          "rounds": len(self)}}, sort_keys=True) + "\n")
            for t, x, y, a, b in self.rounds():
                fh.write(f'{{"a": {a}, "b": {b}, "t": {t}, "x": {x}, "y": {y}}}\n')

    @classmethod
    def from_jsonl(cls, path) -> "GameTranscript":
        meta = {}
        rows = []
        with open(path) as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                if "meta" in rec:
                    meta = rec["meta"]
                    continue
                rows.append((rec["t"], rec["x"], rec["y"], rec["a"], rec["b"]))
        rows.sort()
        arr = np.array(rows, dtype=np.int64).reshape(-1, 5)
        return cls(arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4],
                   box_id=meta.get("box_id", Path(path).stem), seed=meta.get("seed"))


def play(box: bm.BipartiteBox, rounds: int, seed: int | None = None,
         shards: int = 1) -> GameTranscript:
    """Play ``rounds`` i.i.d. rounds with uniformly chosen inputs.

    Shard k of ``shards`` uses child k of ``SeedSequence(seed).spawn(shards)``
    and plays ``rounds // shards`` rounds (the first ``rounds % shards``
    shards play one extra); shards are concatenated in index order.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    sizes = [rounds // shards + (k < rounds % shards) for k in range(shards)]
    parts = []
    for child, n in zip(np.random.SeedSequence(seed).spawn(shards), sizes):
        rng = np.random.default_rng(child)
        x = rng.integers(0, 2, size=n)
        y = rng.integers(0, 2, size=n)
        a, b = bm.sample_many(box, x, y, rng)
        parts.append((x, y, a, b))
    x, y, a, b = (np.concatenate(col) for col in zip(*parts))
    return GameTranscript(x, y, a, b, box_id=box.name, seed=seed)


@dataclass
class CorrelatorEstimate:
    values: np.ndarray       # [x, y]
    std_errors: np.ndarray   # [x, y]
    counts: np.ndarray       # [x, y]
    chsh: float
    chsh_std_error: float

    def to_dict(self) -> dict:
        return {"correlators": self.values.tolist(),
                "std_errors": self.std_errors.tolist(),
                "counts": self.counts.tolist(),
                "chsh": self.chsh, "chsh_std_error": self.chsh_std_error}


def estimate_correlators(transcript: GameTranscript,
                         valuation=bm.Valuation.SIGNED) -> CorrelatorEstimate:
    v = bm.Valuation.parse(valuation).values()
    prod = v[transcript.a] * v[transcript.b]
    values = np.zeros((2, 2))
    errs = np.zeros((2, 2))
    counts = transcript.input_counts()
    for x in bm.BITS:
        for y in bm.BITS:
            n = counts[x, y]
            if n == 0:
                raise EmptyCell(f"no rounds with (x, y) = ({x}, {y})")
            cell = prod[(transcript.x == x) & (transcript.y == y)]
            values[x, y] = cell.mean()
            errs[x, y] = cell.std(ddof=1) / math.sqrt(n) if n > 1 else math.inf
    chsh = float((bm.CHSH_SIGNS * values).sum())
    chsh_err = float(math.sqrt((errs ** 2).sum()))
    return CorrelatorEstimate(values, errs, counts, chsh, chsh_err)


@dataclass
class HomogeneityTest:
    party: str
    input: int
    table: list          # rows: other party's input, columns: output
    statistic: float
    p_value: float
    method: str


@dataclass
class SignalingReport:
    tests: list[HomogeneityTest]
    significance: float
    adjusted_p_values: list[float] = field(default_factory=list)

    @property
    def reject(self) -> bool:
        return any(p <= self.significance for p in self.adjusted_p_values)

    @property
    def min_p_value(self) -> float:
        return min(t.p_value for t in self.tests)

    def to_dict(self) -> dict:
        return {
            "significance": self.significance,
            "reject": self.reject,
            "tests": [{"party": t.party, "input": t.input, "table": t.table,
                       "statistic": t.statistic, "p_value": t.p_value,
                       "adjusted_p_value": q, "method": t.method}
                      for t, q in zip(self.tests, self.adjusted_p_values)],
        }


def homogeneity_test(table: np.ndarray) -> tuple[float, float, str]:
    """Two-sample test that both rows of a 2x2 count table share a distribution.

    Pearson chi-square with Yates' correction when every expected count is
    at least 5, otherwise Fisher's exact test. A table with an empty output
    column carries no evidence of a difference (statistic 0, p = 1).
    """
    table = np.asarray(table, dtype=np.int64)
    if np.any(table.sum(axis=1) == 0):
        raise EmptyCell("a row of the contingency table is empty")
    if np.any(table.sum(axis=0) == 0):
        return 0.0, 1.0, "degenerate"
    expected = stats.contingency.expected_freq(table)
    if expected.min() >= 5:
        res = stats.chi2_contingency(table, correction=True)
        return float(res.statistic), float(res.pvalue), "chi2-yates"
    res = stats.fisher_exact(table)
    return float(res.statistic), float(res.pvalue), "fisher-exact"


def signaling_test(transcript: GameTranscript, significance: float = 0.05) -> SignalingReport:
    """Test each party's output distribution for dependence on the other's input.

    One homogeneity test per (party, input); the overall decision rejects
    when any Holm-adjusted p-value is at or below ``significance``, so the
    family of four tests is held at the nominal level.
    """
    tests = []
    for party, own, other, out in (("alice", transcript.x, transcript.y, transcript.a),
                                   ("bob", transcript.y, transcript.x, transcript.b)):
        for k in bm.BITS:
            sel = own == k
            table = np.zeros((2, 2), dtype=np.int64)
            np.add.at(table, (other[sel], out[sel]), 1)
            stat, p, method = homogeneity_test(table)
            tests.append(HomogeneityTest(party, k, table.tolist(), stat, p, method))
    return SignalingReport(tests, significance, _holm([t.p_value for t in tests]))


def _holm(pvals: list[float]) -> list[float]:
    m = len(pvals)
    order = sorted(range(m), key=lambda i: pvals[i])
    adj = [0.0] * m
    running = 0.0
    for rank, i in enumerate(order):
        running = max(running, min(1.0, (m - rank) * pvals[i]))
        adj[i] = running
    return adj


def _lag1(stream: np.ndarray) -> tuple[float | None, float]:
    n = len(stream)
    s0, s1 = stream[:-1].astype(float), stream[1:].astype(float)
    se = 1.0 / math.sqrt(n - 1)
    if s0.std() == 0 or s1.std() == 0:
        return None, se
    return float(np.corrcoef(s0, s1)[0, 1]), se


@dataclass
class IndependenceReport:
    autocorrelations: dict[str, float | None]
    std_error: float
    conditional: list[dict]
    max_z: float

    def within(self, sigmas: float = 4.0) -> bool:
        ok = all(r is None or abs(r) <= sigmas * self.std_error
                 for r in self.autocorrelations.values())
        return ok and self.max_z <= sigmas

    def to_dict(self) -> dict:
        return {"autocorrelations": self.autocorrelations,
                "std_error": self.std_error, "conditional": self.conditional,
                "max_z": self.max_z}


def independence_test(transcript: GameTranscript,
                      valuation=bm.Valuation.SIGNED) -> IndependenceReport:
    """Lag-1 dependence between consecutive rounds.

    Autocorrelations of Alice's, Bob's and the product outcome streams
    (``None`` for a constant stream, which is trivially independent), and
    for every (x, a | x', a') the frequency of a at round t given x at t
    and (x', a') at t-1, compared with the unconditional frequency of a
    given x. The same check runs for Bob.
    """
    n = len(transcript)
    if n < 3:
        raise ValueError("need at least 3 rounds")
    v = bm.Valuation.parse(valuation).values()
    va, vb = v[transcript.a], v[transcript.b]
    autos = {}
    for name, s in (("alice", va), ("bob", vb), ("product", va * vb)):
        autos[name], se = _lag1(s)

    conditional = []
    max_z = 0.0
    for party, inp, out in (("alice", transcript.x, transcript.a),
                            ("bob", transcript.y, transcript.b)):
        cur_in, cur_out = inp[1:], out[1:]
        prev_in, prev_out = inp[:-1], out[:-1]
        for k, kp, ap in np.ndindex(2, 2, 2):
            base = inp == k
            n_base = int(base.sum())
            if n_base == 0:
                continue
            p_marg = float(out[base].mean())
            sel = (cur_in == k) & (prev_in == kp) & (prev_out == ap)
            n_sel = int(sel.sum())
            if n_sel == 0:
                continue
            p_cond = float(cur_out[sel].mean())
            var = p_marg * (1 - p_marg) * (1.0 / n_sel)
            z = 0.0 if var == 0 else abs(p_cond - p_marg) / math.sqrt(var)
            if var == 0 and p_cond != p_marg:
                z = math.inf
            max_z = max(max_z, z)
            conditional.append({"party": party, "input": int(k), "prev_input": int(kp),
                                "prev_output": int(ap), "count": n_sel,
                                "p_output1_given_prev": p_cond,
                                "p_output1": p_marg, "z": z})
    return IndependenceReport(autos, se, conditional, max_z)
