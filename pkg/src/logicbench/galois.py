"""Abstraction combinators on finite carriers and a Galois-connection verifier.

Every combinator is a plain function on frozensets. The ``*_gc`` factories pair
it with its concretization and the orders it is adjoint for, so that
``verify_gc`` can check ``alpha(x) <= y  <=>  x <= gamma(y)`` on carriers.

Transformers that appear as elements of a carrier are ``Table`` objects:
immutable finite maps that are also callable.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable

from . import transformers as T
from .space import BOT, sorted_elems, subsets

EXHAUSTIVE_LIMIT = 2 ** 12
SAMPLES = 10 ** 4


class GaloisError(Exception):
    pass


# orders

def subset(a, b) -> bool:
    return a <= b


def superset(a, b) -> bool:
    return a >= b


def pointwise(leq: Callable) -> Callable:
    def order(f, g):
        return all(leq(f(x), g(x)) for x in f.keys())
    return order


def componentwise(*leqs) -> Callable:
    def order(a, b):
        return all(leq(x, y) for leq, x, y in zip(leqs, a, b))
    return order


# finite maps

class Table:
    """A finite map usable as a function; hashable and comparable by graph."""

    __slots__ = ("_m", "_h")

    def __init__(self, mapping):
        self._m = dict(mapping)
        self._h = None

    @classmethod
    def of(cls, f: Callable, dom) -> "Table":
        return cls((x, frozenset(f(x))) for x in dom)

    def __call__(self, x):
        return self._m[x]

    def keys(self):
        return self._m.keys()

    def items(self):
        return self._m.items()

    def __len__(self):
        return len(self._m)

    def __eq__(self, other):
        return isinstance(other, Table) and self._m == other._m

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._m.items()))
        return self._h

    def __repr__(self):
        return f"Table({len(self._m)} entries)"


# carriers

class PowerSet:
    """All subsets of a finite universe; sized, iterable and sampleable."""

    def __init__(self, universe):
        self.universe = frozenset(universe)
        self._items = sorted_elems(self.universe)

    def __len__(self):
        return 2 ** len(self._items)

    def __iter__(self):
        return subsets(self.universe)

    def sample(self, rng: random.Random):
        return frozenset(x for x in self._items if rng.random() < 0.5)


class Functions:
    """All maps from a finite list of arguments into a finite carrier of values."""

    def __init__(self, dom, values):
        self.dom = list(dom)
        self.values = values

    def __len__(self):
        return len(self.values) ** len(self.dom)

    def __iter__(self):
        vals = list(self.values)
        for combo in itertools.product(vals, repeat=len(self.dom)):
            yield Table(zip(self.dom, combo))

    def sample(self, rng: random.Random):
        return Table((x, _sample(self.values, rng)) for x in self.dom)


class Image:
    """The image of a carrier under a map; sampled through the source."""

    def __init__(self, f: Callable, source):
        self.f = f
        self.source = source
        self._cache = None

    def _all(self):
        if self._cache is None:
            self._cache = list(dict.fromkeys(self.f(x) for x in self.source))
        return self._cache

    def __len__(self):
        return len(self.source) if len(self.source) > EXHAUSTIVE_LIMIT else len(self._all())

    def __iter__(self):
        return iter(self._all())

    def sample(self, rng: random.Random):
        return self.f(_sample(self.source, rng))


def _sample(carrier, rng):
    if hasattr(carrier, "sample"):
        return carrier.sample(rng)
    if not isinstance(carrier, (list, tuple)):
        carrier = list(carrier)
    return carrier[rng.randrange(len(carrier))]


# connections

@dataclass(frozen=True)
class GaloisPair:
    alpha: Callable
    gamma: Callable
    src_leq: Callable = subset
    tgt_leq: Callable = subset
    name: str = ""

    def then(self, outer: "GaloisPair") -> "GaloisPair":
        """``outer`` after ``self``: abstractions compose forward, concretizations backward."""
        a1, g1, a2, g2 = self.alpha, self.gamma, outer.alpha, outer.gamma
        return GaloisPair(lambda x: a2(a1(x)), lambda y: g1(g2(y)), self.src_leq,
                          outer.tgt_leq, f"{outer.name}.{self.name}")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    counterexample: tuple | None  # (x, y) with alpha(x) <= y  xor  x <= gamma(y)
    exhaustive: bool
    checked: int


def verify_gc(g: GaloisPair, src, tgt, samples: int | None = None,
              rng: random.Random | None = None) -> Verdict:
    """Check the adjunction on every pair when both carriers hold at most 2^12
    elements, otherwise on ``samples`` random pairs."""
    small = len(src) <= EXHAUSTIVE_LIMIT and len(tgt) <= EXHAUSTIVE_LIMIT
    if small:
        xs = list(src)
        ys = list(tgt)
        ax = [g.alpha(x) for x in xs]
        gy = [g.gamma(y) for y in ys]
        n = 0
        for x, a in zip(xs, ax):
            for y, c in zip(ys, gy):
                n += 1
                if g.tgt_leq(a, y) != g.src_leq(x, c):
                    return Verdict(False, (x, y), True, n)
        return Verdict(True, None, True, n)
    if samples is None:
        raise GaloisError(f"carriers of sizes {len(src)} and {len(tgt)} need a sampling budget")
    rng = rng or random.Random(0)
    for n in range(1, samples + 1):
        x, y = _sample(src, rng), _sample(tgt, rng)
        if g.tgt_leq(g.alpha(x), y) != g.src_leq(x, g.gamma(y)):
            return Verdict(False, (x, y), False, n)
    return Verdict(True, None, False, samples)


def preserves_joins(g: GaloisPair, src, join_src: Callable, join_tgt: Callable,
                    samples: int = 200, rng: random.Random | None = None):
    """A pair (x, y) with alpha(x v y) != alpha(x) v alpha(y), or None."""
    rng = rng or random.Random(0)
    for _ in range(samples):
        x, y = _sample(src, rng), _sample(src, rng)
        if g.alpha(join_src(x, y)) != join_tgt(g.alpha(x), g.alpha(y)):
            return x, y
    return None


def preserves_meets(g: GaloisPair, tgt, meet_tgt: Callable, meet_src: Callable,
                    samples: int = 200, rng: random.Random | None = None):
    """A pair (x, y) with gamma(x ^ y) != gamma(x) ^ gamma(y), or None."""
    rng = rng or random.Random(0)
    for _ in range(samples):
        x, y = _sample(tgt, rng), _sample(tgt, rng)
        if g.gamma(meet_tgt(x, y)) != meet_src(g.gamma(x), g.gamma(y)):
            return x, y
    return None


# helpers on relations and relational predicates

def _is_bot_entry(v) -> bool:
    return v is BOT or (isinstance(v, tuple) and len(v) == 2 and v[1] is BOT)


def bot_pairs(sigma) -> frozenset:
    """Sigma x {BOT}."""
    return frozenset((s, BOT) for s in sigma)


def image_gc(f: Callable, universe, name: str = "") -> GaloisPair:
    """The direct image of a map, adjoint to the preimage within ``universe``."""
    universe = frozenset(universe)

    def alpha(X):
        return frozenset(f(x) for x in X)

    def gamma(Y):
        return frozenset(x for x in universe if f(x) in Y)

    return GaloisPair(alpha, gamma, subset, subset, name)


# collecting semantics (degenerate: a singleton set of relations)

def collect(H) -> frozenset:
    """Union of a set of relations."""
    out = set()
    for r in H:
        out |= r
    return frozenset(out)


def collecting_gc(universe) -> GaloisPair:
    """Union of a set of relations, adjoint to all subrelations."""
    universe = frozenset(universe)

    def gamma(r):
        return frozenset(subsets(frozenset(r) & universe))

    return GaloisPair(collect, gamma, subset, subset, "collect")


# transformer connections

def post_gc(r, dom, cod) -> GaloisPair:
    return GaloisPair(lambda P: T.post(r, P), lambda Q: T.pre_tilde(r, Q, dom),
                      subset, subset, "post")


def pre_gc(r, dom, cod) -> GaloisPair:
    """pre(r) from subsets of ``cod`` to subsets of ``dom``, adjoint to post~."""
    return GaloisPair(lambda Q: T.pre(r, Q), lambda P: T.post_tilde(r, P, cod),
                      subset, subset, "pre")


def Post_gc(r, src_universe) -> GaloisPair:
    """Relational Post(r), adjoint to inv . Pre~(r) . inv."""
    carrier = invert(src_universe)
    return GaloisPair(lambda P: T.Post(r, P),
                      lambda Q: invert(T.Pre_tilde(r, invert(Q), carrier)),
                      subset, subset, "Post")


def Pre_gc(r, tgt_universe) -> GaloisPair:
    """Relational Pre(r), adjoint to inv . Post~(r) . inv."""
    carrier = invert(tgt_universe)
    return GaloisPair(lambda Q: T.Pre(r, Q),
                      lambda P: invert(T.Post_tilde(r, invert(P), carrier)),
                      subset, subset, "Pre")


# graph of a transformer

def graph(f, dom=None) -> frozenset:
    """{(P, f(P))}; ``dom`` defaults to the keys of a Table."""
    dom = f.keys() if dom is None else dom
    return frozenset((P, frozenset(f(P))) for P in dom)


def graph_leq(g1, g2) -> bool:
    m2 = dict(g2)
    return all(Q <= m2[P] for P, Q in g1)


def graph_gc() -> GaloisPair:
    """A transformer is isomorphic to its graph."""
    return GaloisPair(graph, Table, pointwise(subset), graph_leq, "graph")


# consequence closures

def consequence_over(R, p_carrier, q_carrier) -> frozenset:
    """{(P', Q') | exists (P, Q) in R. P' <= P and Q <= Q'}."""
    R = list(R)
    return frozenset((P2, Q2) for P2 in p_carrier for Q2 in q_carrier
                     if any(P2 <= P and Q <= Q2 for P, Q in R))


def consequence_under(R, p_carrier, q_carrier) -> frozenset:
    """{(P', Q') | exists (P, Q) in R. P <= P' and Q' <= Q}."""
    R = list(R)
    return frozenset((P2, Q2) for P2 in p_carrier for Q2 in q_carrier
                     if any(P <= P2 and Q2 <= Q for P, Q in R))


def consequence_gc(p_carrier, q_carrier, under: bool = False) -> GaloisPair:
    """Closure onto consequence-closed sets; the concretization is inclusion."""
    p_carrier, q_carrier = list(p_carrier), list(q_carrier)
    close = consequence_under if under else consequence_over
    return GaloisPair(lambda R: close(R, p_carrier, q_carrier), lambda R: R,
                      subset, subset, "consequence_under" if under else "consequence_over")


# nontermination

def termination_excl(R) -> frozenset:
    """Keep the pairs whose postcondition mentions no nontermination."""
    return frozenset((P, Q) for P, Q in R if not any(_is_bot_entry(v) for v in Q))


def termination_excl_gc(pair_universe) -> GaloisPair:
    pair_universe = frozenset(pair_universe)
    has_bot = frozenset(pq for pq in pair_universe if any(_is_bot_entry(v) for v in pq[1]))
    return GaloisPair(termination_excl, lambda R: frozenset(R) | has_bot,
                      subset, subset, "termination_excl")


def termination_incl(R, bots) -> frozenset:
    """Allow nontermination: add ``bots`` to every postcondition."""
    bots = frozenset(bots)
    return frozenset((P, frozenset(Q) | bots) for P, Q in R)


def termination_incl_gc(pair_universe, bots) -> GaloisPair:
    pair_universe = frozenset(pair_universe)
    bots = frozenset(bots)

    def gamma(R):
        return frozenset((P, Q) for P, Q in pair_universe if (P, Q | bots) in R)

    return GaloisPair(lambda R: termination_incl(R, bots), gamma, subset, subset,
                      "termination_incl")


def termination_drop(R) -> frozenset:
    """Restrict every postcondition to terminating outcomes."""
    return frozenset((P, frozenset(v for v in Q if not _is_bot_entry(v))) for P, Q in R)


def termination_drop_gc(pair_universe) -> GaloisPair:
    pair_universe = frozenset(pair_universe)

    def gamma(R):
        return frozenset(pq for pq in pair_universe if termination_drop({pq}) <= R)

    return GaloisPair(termination_drop, gamma, subset, subset, "termination_drop")


# projections and inversion

def proj2(P) -> frozenset:
    return frozenset(s for _, s in P)


def proj1(P) -> frozenset:
    return frozenset(s0 for s0, _ in P)


def proj2_gc(firsts) -> GaloisPair:
    firsts = frozenset(firsts)
    return GaloisPair(proj2, lambda Q: frozenset(itertools.product(firsts, Q)),
                      subset, subset, "proj2")


def proj1_gc(seconds) -> GaloisPair:
    seconds = frozenset(seconds)
    return GaloisPair(proj1, lambda Q: frozenset(itertools.product(Q, seconds)),
                      subset, subset, "proj1")


def proj2_pairs(R) -> frozenset:
    """Projection applied to both components of every pair."""
    return frozenset((proj2(P), proj2(Q)) for P, Q in R)


def proj2_pairs_gc(pair_universe) -> GaloisPair:
    return image_gc(lambda pq: (proj2(pq[0]), proj2(pq[1])), pair_universe, "proj2_pairs")


def invert(R) -> frozenset:
    return frozenset((y, x) for x, y in R)


def invert_gc() -> GaloisPair:
    return GaloisPair(invert, invert, subset, subset, "invert")


# complement

def negate(S, universe) -> frozenset:
    return frozenset(universe) - frozenset(S)


def negate_gc(universe) -> GaloisPair:
    """Complement, from inclusion to reverse inclusion."""
    universe = frozenset(universe)
    return GaloisPair(lambda S: universe - S, lambda S: universe - S, subset, superset,
                      "negate")


def complement_dual(f, dom_universe, cod_universe) -> Table:
    """The map X -> not f(not X), tabulated on all subsets of ``dom_universe``."""
    du, cu = frozenset(dom_universe), frozenset(cod_universe)
    return Table((X, cu - frozenset(f(du - X))) for X in subsets(du))


def complement_dual_gc(dom_universe, cod_universe) -> GaloisPair:
    du, cu = frozenset(dom_universe), frozenset(cod_universe)

    def dual(f):
        return complement_dual(f, du, cu)

    return GaloisPair(dual, dual, pointwise(subset), pointwise(superset), "complement_dual")


# emptiness abstractions

EMPTINESS_VARIANTS = ("->empty", "->nonempty", "<-empty", "<-nonempty")


def emptiness_abs(tau, variant: str, p_carrier, q_carrier) -> frozenset:
    """Pairs (P, Q) whose postcondition meets (or misses) tau(P); the backward
    variants swap the components."""
    if variant not in EMPTINESS_VARIANTS:
        raise ValueError(f"unknown emptiness variant {variant!r}")
    want_empty = variant.endswith("empty") and not variant.endswith("nonempty")
    R = frozenset((P, Q) for P in p_carrier for Q in q_carrier
                  if (not (Q & frozenset(tau(P)))) == want_empty)
    return invert(R) if variant.startswith("<-") else R


def emptiness_gc(variant: str, p_carrier, q_carrier) -> GaloisPair:
    """Transformers ordered pointwise against sets of pairs; the order on pairs
    is reverse inclusion for emptiness and inclusion for non-emptiness."""
    p_carrier, q_carrier = list(p_carrier), list(q_carrier)
    q_top = frozenset().union(*q_carrier) if q_carrier else frozenset()
    universe = frozenset(itertools.product(p_carrier, q_carrier))
    backward = variant.startswith("<-")
    empty = not variant.endswith("nonempty")

    def alpha(tau):
        return emptiness_abs(tau, variant, p_carrier, q_carrier)

    def gamma(R):
        R = invert(R) if backward else frozenset(R)
        if not empty:
            R = universe - R
        touched: dict = {}
        for P, Q in R:
            touched.setdefault(P, set()).update(Q)
        return Table((P, q_top - frozenset(touched.get(P, ()))) for P in p_carrier)

    return GaloisPair(alpha, gamma, pointwise(subset), superset if empty else subset,
                      f"emptiness{variant}")


# transformer combinators

def combine(op: str, t1: Callable, t2: Callable) -> Callable:
    if op == "meet":
        return lambda x: frozenset(t1(x)) & frozenset(t2(x))
    if op == "join":
        return lambda x: frozenset(t1(x)) | frozenset(t2(x))
    if op == "cartesian":
        return lambda x: (t1(x), t2(x))
    raise ValueError(f"unknown combinator {op!r}")


def meet_gc(g1: GaloisPair, g2: GaloisPair) -> GaloisPair:
    """Two connections into the same abstract domain, joined by the abstract
    union and concretized by the concrete meet."""
    return GaloisPair(lambda x: g1.alpha(x) | g2.alpha(x),
                      lambda y: g1.gamma(y) & g2.gamma(y),
                      g1.src_leq, g1.tgt_leq, f"meet({g1.name},{g2.name})")


def cartesian_gc(g1: GaloisPair, g2: GaloisPair) -> GaloisPair:
    """Pairing of two connections from the same concrete domain."""
    return GaloisPair(lambda x: (g1.alpha(x), g2.alpha(x)),
                      lambda y: g1.gamma(y[0]) & g2.gamma(y[1]),
                      g1.src_leq, componentwise(g1.tgt_leq, g2.tgt_leq),
                      f"cartesian({g1.name},{g2.name})")


# composed chains used by the logic theories

@dataclass(frozen=True)
class ChainCarriers:
    """Relational predicate carriers over a (small) set of states."""
    sigma: frozenset
    pre_preds: tuple  # subsets of Sigma x Sigma
    post_preds: tuple  # subsets of Sigma x Sigma_bot

    @classmethod
    def over(cls, sigma) -> "ChainCarriers":
        sigma = frozenset(sigma)
        pu = frozenset(itertools.product(sigma, sigma))
        qu = pu | bot_pairs(sigma)
        return cls(sigma, tuple(subsets(pu)), tuple(subsets(qu)))


def natural_over_chain(r, cc: ChainCarriers) -> frozenset:
    """consequence_over . graph . Post of a natural relation r, computed literally."""
    Pt = Table.of(lambda P: T.Post(r, P), cc.pre_preds)
    return consequence_over(graph(Pt), cc.pre_preds, cc.post_preds)


def natural_under_chain(r, cc: ChainCarriers) -> frozenset:
    Pt = Table.of(lambda P: T.Post(r, P), cc.pre_preds)
    return consequence_under(graph(Pt), cc.pre_preds, cc.post_preds)


def hoare_chain(r, cc: ChainCarriers) -> frozenset:
    """proj2 . termination_incl . consequence_over . graph . Post . collect."""
    r = collect({frozenset(r)})
    return proj2_pairs(termination_incl(natural_over_chain(r, cc), bot_pairs(cc.sigma)))


def manna_pnueli_chain(r, cc: ChainCarriers) -> frozenset:
    return termination_excl(natural_over_chain(collect({frozenset(r)}), cc))


def apt_plotkin_chain(r, cc: ChainCarriers) -> frozenset:
    return proj2_pairs(manna_pnueli_chain(r, cc))


def manna_partial_chain(r, cc: ChainCarriers) -> frozenset:
    return termination_drop(natural_over_chain(collect({frozenset(r)}), cc))


CHAINS = {
    "hoare": hoare_chain,
    "manna-pnueli": manna_pnueli_chain,
    "apt-plotkin": apt_plotkin_chain,
    "manna-partial": manna_partial_chain,
    "natural-over": natural_over_chain,
    "natural-under": natural_under_chain,
}
