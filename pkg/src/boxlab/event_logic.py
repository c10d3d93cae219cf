"""Experimental propositions about a box game and their partial probability semantics.

An atom ``(party, input, output, time)`` reads "at round ``time`` the party
chose ``input`` and obtained ``output``". Two atoms are incompatible when
they describe the same party choosing different inputs in the same round;
a conjunction containing such a pair refers to no physical situation and
gets no probability.

Evaluation rules:

* if all atoms are pairwise compatible the proposition lives in one Boolean
  context and is evaluated classically from the box, with inputs as given,
  rounds independent, and a party's lone marginal averaged over the other
  party's uniformly chosen input;
* otherwise a disjunction of the two outcomes of one measurement is certain
  (probability 1) and drops out of any conjunction; a conjunction whose
  remaining atoms are incompatible is undefined; a disjunction is defined
  only when its terms are defined and mutually exclusive (then it sums);
  undefined propagates through every connective.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Union

from . import box_model as bm

PARTIES = ("A", "B")


class MalformedProposition(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    party: str
    input: int
    output: int
    time: int = 0

    def __post_init__(self):
        if self.party not in PARTIES:
            raise MalformedProposition(f"party must be A or B, got {self.party!r}")
        if self.input not in (0, 1) or self.output not in (0, 1):
            raise MalformedProposition("input and output must be 0 or 1")
        if not isinstance(self.time, int) or self.time < 0:
            raise MalformedProposition("time must be a nonnegative integer")

    def __str__(self):
        return f"{self.party}:{self.input}={self.output}@{self.time}"


@dataclass(frozen=True)
class And:
    terms: tuple

    def __post_init__(self):
        _check_terms(self.terms, "and")

    def __str__(self):
        return "and(" + ", ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True)
class Or:
    terms: tuple

    def __post_init__(self):
        _check_terms(self.terms, "or")

    def __str__(self):
        return "or(" + ", ".join(map(str, self.terms)) + ")"


Proposition = Union[Atom, And, Or]


def _check_terms(terms, name):
    if not isinstance(terms, tuple) or not terms:
        raise MalformedProposition(f"{name} needs a non-empty tuple of terms")
    for t in terms:
        if not isinstance(t, (Atom, And, Or)):
            raise MalformedProposition(f"{name} term {t!r} is not a proposition")


def conj(*terms) -> And:
    return And(tuple(terms))


def disj(*terms) -> Or:
    return Or(tuple(terms))


@dataclass(frozen=True)
class Defined:
    value: float

    def __str__(self):
        return f"Defined({self.value:g})"


@dataclass(frozen=True)
class Undefined:
    reason: str

    def __str__(self):
        return "Undefined"


Probability = Union[Defined, Undefined]


def compatible(p: Atom, q: Atom) -> bool:
    return not (p.party == q.party and p.time == q.time and p.input != q.input)


def atoms(prop: Proposition) -> list[Atom]:
    if isinstance(prop, Atom):
        return [prop]
    return [a for t in prop.terms for a in atoms(t)]


def _all_compatible(ats) -> bool:
    return all(compatible(p, q) for p, q in itertools.combinations(ats, 2))


def _truth(prop: Proposition, outcome: dict) -> bool:
    if isinstance(prop, Atom):
        return outcome[(prop.party, prop.time)] == prop.output
    if isinstance(prop, And):
        return all(_truth(t, outcome) for t in prop.terms)
    return any(_truth(t, outcome) for t in prop.terms)


def _classical(prop: Proposition, box: bm.BipartiteBox) -> float:
    """Probability inside a single Boolean context by enumerating outcomes."""
    inputs = {(a.party, a.time): a.input for a in atoms(prop)}
    times = sorted({t for _, t in inputs})
    per_time = []
    for t in times:
        x, y = inputs.get(("A", t)), inputs.get(("B", t))
        if x is not None and y is not None:
            table = {(a, b): float(box.p[x, y, a, b])
                     for a, b in itertools.product(bm.BITS, repeat=2)}
        elif x is not None:
            table = {(a, None): bm.marginal_a(box, a, x) for a in bm.BITS}
        else:
            table = {(None, b): bm.marginal_b(box, b, y) for b in bm.BITS}
        per_time.append((t, table))
    total = 0.0
    for combo in itertools.product(*(tbl.items() for _, tbl in per_time)):
        prob = 1.0
        outcome = {}
        for (t, _), ((a, b), p) in zip(per_time, combo):
            prob *= p
            outcome[("A", t)] = a
            outcome[("B", t)] = b
        if prob and _truth(prop, outcome):
            total += prob
    return total


def _is_complementary_pair(prop: Proposition) -> bool:
    if not isinstance(prop, Or) or len(prop.terms) != 2:
        return False
    p, q = prop.terms
    return (isinstance(p, Atom) and isinstance(q, Atom) and p.party == q.party
            and p.input == q.input and p.time == q.time and p.output != q.output)


def _conjunctive_atoms(prop: Proposition) -> list[Atom]:
    if isinstance(prop, Atom):
        return [prop]
    if isinstance(prop, And):
        return [a for t in prop.terms for a in _conjunctive_atoms(t)]
    return []


def _exclusive(p: Proposition, q: Proposition) -> bool:
    return any(a.party == b.party and a.input == b.input and a.time == b.time
               and a.output != b.output
               for a in _conjunctive_atoms(p) for b in _conjunctive_atoms(q))


def probability(prop: Proposition, box: bm.BipartiteBox) -> Probability:
    if not isinstance(prop, (Atom, And, Or)):
        raise MalformedProposition(f"{prop!r} is not a proposition")
    if _all_compatible(atoms(prop)):
        return Defined(_classical(prop, box))
    if isinstance(prop, And):
        kept = [t for t in prop.terms if not _is_complementary_pair(t)]
        if not kept:
            return Defined(1.0)
        for t in kept:
            r = probability(t, box)
            if isinstance(r, Undefined):
                return r
        rest = And(tuple(kept))
        if _all_compatible(atoms(rest)):
            return Defined(_classical(rest, box))
        bad = next((p, q) for p, q in itertools.combinations(atoms(rest), 2)
                   if not compatible(p, q))
        return Undefined(f"conjunction of incompatible {bad[0]} and {bad[1]}")
    # Or
    if _is_complementary_pair(prop):
        return Defined(1.0)
    values = []
    for t in prop.terms:
        r = probability(t, box)
        if isinstance(r, Undefined):
            return Undefined(f"disjunct {t} is undefined: {r.reason}")
        values.append(r.value)
    if all(_exclusive(p, q) for p, q in itertools.combinations(prop.terms, 2)):
        return Defined(sum(values))
    return Undefined("disjuncts are neither exclusive nor jointly measurable")


def phi(a: int = 0, t: int = 0) -> And:
    """(a/0)_t and [(0/1)_t or (1/1)_t]."""
    return conj(Atom("A", 0, a, t), disj(Atom("A", 1, 0, t), Atom("A", 1, 1, t)))


def phi_prime(a: int = 0, t: int = 0) -> Or:
    """[(a/0)_t and (0/1)_t] or [(a/0)_t and (1/1)_t]."""
    return disj(conj(Atom("A", 0, a, t), Atom("A", 1, 0, t)),
                conj(Atom("A", 0, a, t), Atom("A", 1, 1, t)))


@dataclass(frozen=True)
class DistributivityReport:
    phi: And
    phi_prime: Or
    p_phi: Probability
    p_phi_prime: Probability
    p_atom: Probability

    @property
    def pair(self) -> tuple[Probability, Probability]:
        return self.p_phi, self.p_phi_prime

    def to_dict(self) -> dict:
        def enc(r):
            if isinstance(r, Defined):
                return {"status": "Defined", "value": r.value}
            return {"status": "Undefined", "reason": r.reason}
        return {"phi": str(self.phi), "phi_prime": str(self.phi_prime),
                "p_phi": enc(self.p_phi), "p_phi_prime": enc(self.p_phi_prime),
                "p_atom": enc(self.p_atom)}

    def render(self) -> str:
        return "\n".join([
            f"Phi  = {self.phi}",
            f"Phi' = {self.phi_prime}",
            f"P[{self.phi.terms[0]}] = {self.p_atom}",
            f"P[Phi]  = {self.p_phi}",
            f"P[Phi'] = {self.p_phi_prime}"
            + (f"  ({self.p_phi_prime.reason})" if isinstance(self.p_phi_prime, Undefined) else ""),
        ])


def distributivity_counterexample(box: bm.BipartiteBox, a: int = 0, t: int = 0) -> DistributivityReport:
    f, fp = phi(a, t), phi_prime(a, t)
    return DistributivityReport(f, fp, probability(f, box), probability(fp, box),
                                probability(Atom("A", 0, a, t), box))


_TOKEN = re.compile(r"\s*(?:(and|or)\s*\(|(\))|(,)|([AB])\s*:\s*([01])\s*=\s*([01])(?:\s*@\s*(\d+))?)")


def parse(text: str) -> Proposition:
    """Parse the prefix syntax, e.g. ``and(A:0=0@1, or(A:1=0@1, A:1=1@1))``.

    Atoms are ``P:x=a@t`` with party P in {A, B}; ``@t`` defaults to 0.
    """
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedProposition(f"cannot parse at {text[pos:]!r}")
        tokens.append(m.groups())
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expr(i):
        if i >= len(tokens):
            raise MalformedProposition("unexpected end of input")
        op, close, comma, party, x, a, t = tokens[i]
        if party:
            return Atom(party, int(x), int(a), int(t or 0)), i + 1
        if not op:
            raise MalformedProposition("expected atom or connective")
        terms = []
        i += 1
        while True:
            term, i = expr(i)
            terms.append(term)
            if i >= len(tokens):
                raise MalformedProposition("missing ')'")
            if tokens[i][2]:
                i += 1
                continue
            if tokens[i][1]:
                i += 1
                break
            raise MalformedProposition("expected ',' or ')'")
        cls = And if op == "and" else Or
        return cls(tuple(terms)), i

    prop, end = expr(0)
    if end != len(tokens):
        raise MalformedProposition("trailing input")
    return prop
