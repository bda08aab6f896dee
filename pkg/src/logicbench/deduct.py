"""Finite deductive systems, their consequence operators and interpretations.

A rule is a finite premise set and a conclusion. The inductive interpretation
is the least fixpoint of the consequence operator, the coinductive one the
greatest, and the bi-inductive one takes least fixpoints on a designated part
of the universe and the greatest fixpoint on the rest.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from . import lang as L
from .space import BOT, Space, gfp, lfp, sorted_elems, subsets


class RuleError(Exception):
    pass


@dataclass(frozen=True)
class Rule:
    premises: frozenset
    conclusion: object

    def __repr__(self):
        ps = " ".join(map(repr, sorted_elems(self.premises)))
        return f"{ps} => {self.conclusion!r}"


@dataclass(frozen=True)
class RuleSystem:
    universe: frozenset
    rules: frozenset

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "rules", frozenset(self.rules))
        for r in self.rules:
            if r.conclusion not in self.universe or not r.premises <= self.universe:
                raise RuleError(f"rule {r!r} leaves the universe")

    @classmethod
    def of(cls, universe, pairs) -> "RuleSystem":
        """From (premises, conclusion) pairs."""
        return cls(universe, {Rule(frozenset(p), c) for p, c in pairs})

    def __len__(self):
        return len(self.rules)


def consequence_op(R: RuleSystem) -> Callable:
    """X -> {c | some rule P/c has P within X}."""
    rules = [(r.premises, r.conclusion) for r in R.rules]

    def F(X):
        X = X if isinstance(X, (set, frozenset)) else frozenset(X)
        return frozenset(c for P, c in rules if P <= X)

    return F


def interp(R: RuleSystem, mode: str = "inductive", V=None) -> frozenset:
    F = consequence_op(R)
    U = R.universe
    if mode == "inductive":
        return lfp(F, U).value
    if mode == "coinductive":
        return gfp(F, U).value
    if mode != "bi":
        raise ValueError(f"unknown interpretation {mode!r}")
    if V is None:
        raise ValueError("the bi-inductive interpretation needs the inductive part V")
    V = frozenset(V)
    rest = U - V

    def least(Y):
        return lfp(lambda X: F(X | Y) & V, V).value

    Y = gfp(lambda Y: F(least(Y) | Y) & rest, rest).value
    return least(Y) | Y


@dataclass
class ProofVerdict:
    ok: bool
    step: int | None = None  # 1-based index of the first invalid term
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_proof(R: RuleSystem, seq) -> ProofVerdict:
    """Each term must conclude a rule whose premises all occur earlier."""
    by_concl: dict = {}
    for r in R.rules:
        by_concl.setdefault(r.conclusion, []).append(r.premises)
    seen: set = set()
    for k, t in enumerate(seq, 1):
        cands = by_concl.get(t)
        if not cands:
            return ProofVerdict(False, k, f"no rule concludes {t!r}")
        if not any(P <= seen for P in cands):
            miss = min((P - seen for P in cands), key=len)
            return ProofVerdict(False, k, f"premises {sorted_elems(miss)!r} of {t!r} not yet proved")
        seen.add(t)
    return ProofVerdict(True)


def proof_of(R: RuleSystem, t) -> list | None:
    """A proof of t in the order terms become derivable, or None."""
    F = consequence_op(R)
    order, seen = [], frozenset()
    while t not in seen:
        nxt = F(seen)
        new = sorted_elems(nxt - seen)
        if not new:
            return None
        order.extend(new)
        seen = seen | nxt
    return order


def rules_from_operator(F: Callable, U) -> RuleSystem:
    """Rules P/c for every c in F(P) with P minimal for inclusion."""
    U = frozenset(U)
    mins: dict = {}
    for P in subsets(U):  # by increasing size, so minimal premises come first
        for c in F(P):
            if not any(Q <= P for Q in mins.get(c, ())):
                mins.setdefault(c, []).append(P)
    return RuleSystem(U, {Rule(P, c) for c, ps in mins.items() for P in ps})


def abstract_rules(R: RuleSystem, alpha: Callable, abstract_universe) -> RuleSystem:
    """{alpha(P)/c' | P/c in R, c' in alpha({c})} over the abstract universe."""
    out = set()
    for r in R.rules:
        P = frozenset(alpha(r.premises))
        for c in alpha(frozenset({r.conclusion})):
            out.add(Rule(P, c))
    return RuleSystem(abstract_universe, out)


# rule files

def parse_rules(text: str) -> RuleSystem:
    """``universe: a b c`` then one ``premise: a b => c`` line per rule."""
    universe = None
    pairs = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        head = head.strip()
        if not sep or head not in ("universe", "premise"):
            raise RuleError(f"line {n}: expected 'universe:' or 'premise:'")
        if head == "universe":
            if universe is not None:
                raise RuleError(f"line {n}: universe declared twice")
            universe = frozenset(body.split())
            continue
        if universe is None:
            raise RuleError(f"line {n}: rule before the universe header")
        lhs, arrow, rhs = body.partition("=>")
        concl = rhs.split()
        if not arrow or len(concl) != 1:
            raise RuleError(f"line {n}: expected 'premise: a b => c'")
        pairs.append((lhs.split(), concl[0]))
    if universe is None:
        raise RuleError("missing universe header")
    try:
        return RuleSystem.of(universe, pairs)
    except RuleError as e:
        raise RuleError(f"{e}") from None


def dump_rules(R: RuleSystem) -> str:
    lines = ["universe: " + " ".join(map(str, sorted_elems(R.universe)))]
    for r in sorted(R.rules, key=lambda r: (str(r.conclusion), sorted(map(str, r.premises)))):
        lines.append("premise: " + " ".join(map(str, sorted_elems(r.premises))) + " => " + str(r.conclusion))
    return "\n".join(lines) + "\n"


# the loop rules of the natural semantics as a finite rule system

def while_rules(w: L.While, space: Space, body) -> tuple:
    """Judgements ('i', s, s2) (reachable after some iterations),
    ('e', s, s2) (loop exit) and ('inf', s) (divergence) for loop ``w``,
    given the body's semantic triple. Returns the system and the inductive
    part (the i and e judgements); divergence judgements are coinductive."""
    sig = space.states
    B = space.cond(w.cond)
    succ_e: dict = {}
    for x, y in body.e:
        succ_e.setdefault(x, []).append(y)
    succ_b: dict = {}
    for x, y in body.b:
        succ_b.setdefault(x, []).append(y)
    body_div = {x for x, _ in body.bot}

    pairs = []
    for s in sig:
        pairs.append(((), ("i", s, s)))
    for s in B:
        for s1 in succ_e.get(s, ()):
            for s2 in sig:
                pairs.append(([("i", s1, s2)], ("i", s, s2)))
            pairs.append(([("inf", s1)], ("inf", s)))
    for s, s1 in itertools.product(sig, sig):
        if s1 not in B:
            pairs.append(([("i", s, s1)], ("e", s, s1)))
        else:
            for s2 in succ_b.get(s1, ()):
                pairs.append(([("i", s, s1)], ("e", s, s2)))
            if s1 in body_div:
                pairs.append(([("i", s, s1)], ("inf", s)))
    V = {("i", a, b) for a in sig for b in sig} | {("e", a, b) for a in sig for b in sig}
    U = V | {("inf", s) for s in sig}
    return RuleSystem.of(U, pairs), frozenset(V)


def while_components(w: L.While, space: Space, body) -> tuple:
    """The (e, bot) relations derived bi-inductively from the loop rules."""
    R, V = while_rules(w, space, body)
    D = interp(R, "bi", V)
    e = frozenset((j[1], j[2]) for j in D if j[0] == "e")
    bot = frozenset((j[1], BOT) for j in D if j[0] == "inf")
    return e, bot
