"""Exact membership deciders for named program logics.

A logic is a transformer applied to the relational semantics (angelic or
natural), compared with the remaining predicate in one of four ways. Forward
transformers take the precondition, backward ones the postcondition.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import lang as L
from . import transformers as T
from .relsem import SemTriple, angelic, sem
from .space import BOT, Space, sorted_elems

TRANSFORMERS = ("post", "pre", "post~", "pre~")
SEMANTICS = ("angelic", "natural")
COMPARISONS = ("res<=other", "other<=res", "disjoint", "meets")
CARRIERS = ("assertional", "relational")


class CarrierError(Exception):
    pass


@dataclass(frozen=True)
class LogicSpec:
    transformer: str
    semantics: str
    comparison: str
    carrier: str = "assertional"
    total: bool = False  # the postcondition may not mention nontermination

    def __post_init__(self):
        if self.transformer not in TRANSFORMERS or self.semantics not in SEMANTICS \
                or self.comparison not in COMPARISONS or self.carrier not in CARRIERS:
            raise ValueError(f"bad logic spec {self}")
        if self.carrier == "relational" and self.transformer not in ("post", "post~"):
            raise ValueError("relational logics use forward transformers only")

    @property
    def forward(self) -> bool:
        return self.transformer.startswith("post")


@dataclass(frozen=True)
class Result:
    holds: bool
    witness: object = None  # a state, BOT, or pair violating the comparison
    note: str = ""

    def __bool__(self):
        return self.holds


CATALOG: dict[str, LogicSpec] = {
    "hoare": LogicSpec("post", "angelic", "res<=other"),
    "subgoal-induction": LogicSpec("pre~", "angelic", "other<=res"),
    "apt-plotkin": LogicSpec("post", "natural", "res<=other", total=True),
    "total-subgoal-induction": LogicSpec("pre~", "natural", "other<=res", total=True),
    "reverse-hoare": LogicSpec("post", "angelic", "other<=res"),
    "incorrectness": LogicSpec("post", "angelic", "other<=res"),
    "possible-reach": LogicSpec("pre", "angelic", "other<=res"),
    "possible-accessibility": LogicSpec("pre", "natural", "other<=res"),
    "hoare-violation": LogicSpec("post", "natural", "meets"),
    "definite-inaccessibility": LogicSpec("pre", "angelic", "res<=other"),
    "definite-inaccessibility-some": LogicSpec("post~", "angelic", "meets"),
    "definite-accessibility-some": LogicSpec("pre", "angelic", "meets"),
    "possible-nonfinal-all": LogicSpec("pre~", "angelic", "res<=other"),
    "possible-nonfinal-some": LogicSpec("post~", "angelic", "res<=other"),
    "total-definite-some": LogicSpec("pre~", "natural", "meets"),
    "manna-partial": LogicSpec("post", "angelic", "res<=other", "relational", total=True),
    "manna-pnueli": LogicSpec("post", "natural", "res<=other", "relational", total=True),
    "natural-over": LogicSpec("post", "natural", "res<=other", "relational"),
    "natural-under": LogicSpec("post", "natural", "other<=res", "relational"),
}


def triple_of(s, space: Space) -> SemTriple:
    if isinstance(s, SemTriple):
        return s
    return sem(s, space)


def is_relational(pred) -> bool:
    """Relational predicates hold (entry state, state-or-BOT) pairs."""
    for x in pred:
        return x is not BOT and len(x) == 2 and isinstance(x[0], tuple)
    return False


def lift_pre(P) -> frozenset:
    """An assertional precondition as a relational one pinning the entry state."""
    return frozenset((x, x) for x in P if x is not BOT)


def lift_post(Q, space: Space) -> frozenset:
    return frozenset((o, v) for o in space.states for v in Q)


def _has_bot(Q) -> bool:
    return any(v is BOT or (isinstance(v, tuple) and len(v) == 2 and v[1] is BOT) for v in Q)


def _first(xs):
    xs = sorted_elems(xs)
    return xs[0] if xs else None


def _compare(comparison: str, res, other) -> Result:
    res, other = frozenset(res), frozenset(other)
    if comparison == "res<=other":
        bad = res - other
        return Result(not bad, _first(bad))
    if comparison == "other<=res":
        bad = other - res
        return Result(not bad, _first(bad))
    common = res & other
    if comparison == "disjoint":
        return Result(not common, _first(common))
    return Result(bool(common), None, "" if common else "empty intersection")


def _relation(t: SemTriple, semantics: str):
    return angelic(t) if semantics == "angelic" else t.natural


def apply_spec(spec: LogicSpec, t: SemTriple, P, Q, space: Space) -> Result:
    """Decide ``spec`` on a semantic triple with predicates in the spec's carrier."""
    if spec.total and _has_bot(Q):
        raise CarrierError("this logic forbids nontermination in the postcondition")
    r = _relation(t, spec.semantics)
    cod = space.sigma if spec.semantics == "angelic" else space.sigma_bot
    tr = spec.transformer
    if spec.carrier == "relational":
        if tr == "post":
            res = T.Post(r, P)
        else:
            carrier = frozenset((o, v) for o in space.states for v in cod)
            res = T.Post_tilde(r, P, carrier)
        return _compare(spec.comparison, res, Q)
    if tr == "post":
        res, other = T.post(r, P), Q
    elif tr == "post~":
        res, other = T.post_tilde(r, P, cod), Q
    elif tr == "pre":
        res, other = T.pre(r, Q), P
    else:
        res, other = T.pre_tilde(r, Q, space.sigma), P
    return _compare(spec.comparison, res, other)


def holds(logic, s, P, Q, space: Space) -> Result:
    """Decide a named (or explicit) logic on statement ``s``.

    Relational logics accept assertional predicates by pinning the entry
    state; the witness is then reported on the current state.
    """
    spec = CATALOG[logic] if isinstance(logic, str) else logic
    t = triple_of(s, space)
    P, Q = frozenset(P), frozenset(Q)
    rel = is_relational(P) or is_relational(Q)
    if spec.carrier == "assertional":
        if rel:
            raise CarrierError(f"{logic} needs assertional predicates")
        return apply_spec(spec, t, P, Q, space)
    if rel:
        if P and not is_relational(P) or Q and not is_relational(Q):
            raise CarrierError("mixed assertional and relational predicates")
        return apply_spec(spec, t, P, Q, space)
    out = apply_spec(spec, t, lift_pre(P), lift_post(Q, space), space)
    w = out.witness
    return Result(out.holds, w[1] if isinstance(w, tuple) else w, out.note)


def classify(s, P, Q, space: Space) -> dict:
    """Every catalog logic whose carrier fits the predicates, in catalog order.

    Logics that forbid nontermination in Q are skipped when Q mentions it.
    """
    t = triple_of(s, space)
    rel = is_relational(frozenset(P)) or is_relational(frozenset(Q))
    out = {}
    for name, spec in CATALOG.items():
        if rel and spec.carrier == "assertional":
            continue
        if spec.total and _has_bot(Q):
            continue
        out[name] = holds(spec, t, P, Q, space)
    return out


# the extended Hoare logic with breaks, and the backward possible-accessibility logic

def holds_ehl(s, P, Q, T_, space: Space) -> Result:
    """Normal and nonterminating outcomes of P land in Q, breaks land in T."""
    t = triple_of(s, space)
    P, Q, T_ = frozenset(P), frozenset(Q), frozenset(T_)
    if is_relational(P) or is_relational(Q) or is_relational(T_):
        if not is_relational(P):
            P = lift_pre(P)
        if Q and not is_relational(Q):
            Q = lift_post(Q, space)
        if T_ and not is_relational(T_):
            T_ = lift_post(T_, space)
        ok, br = T.Post(t.e | t.bot, P), T.Post(t.b, P)
    else:
        ok, br = T.post(t.e | t.bot, P), T.post(t.b, P)
    bad = ok - Q
    if bad:
        return Result(False, ("ok", _first(bad)))
    bad = br - T_
    if bad:
        return Result(False, ("br", _first(bad)))
    return Result(True)


def holds_prelogic(s, P, Q, T_, space: Space) -> Result:
    """Every state of P has one execution reaching Q (possibly by diverging),
    or every state of P has one execution breaking into T; P is not split."""
    t = triple_of(s, space)
    P = frozenset(P)
    ok = T.pre(t.e | t.bot, Q)
    if P <= ok:
        return Result(True)
    br = T.pre(t.b, T_)
    if P <= br:
        return Result(True)
    return Result(False, (_first(P - ok), _first(P - br)))


def catalog_names() -> list:
    return list(CATALOG)


def parse_for(spec: LogicSpec, text: str, space: Space, which: str) -> frozenset:
    """Parse a predicate in the carrier a logic expects (``which`` is pre or post)."""
    if spec.carrier == "relational":
        return parse_relational(text, space, which)
    return space.pred(L.parse_predicate(text, space.variables))


def parse_relational(text: str, space: Space, which: str) -> frozenset:
    """Relational predicate; a precondition is read at entry, where old(x) = x."""
    rel = space.relpred(L.parse_predicate(text, space.variables, relational=True))
    return pin(rel) if which == "pre" else rel


def pin(P) -> frozenset:
    return frozenset((o, x) for o, x in P if o == x)
