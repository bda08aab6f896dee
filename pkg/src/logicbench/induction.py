"""Certificate checkers for fixpoint induction principles on finite powersets.

Each checker takes the function, the property and a certificate, verifies the
hypotheses it can (monotonicity, join or meet preservation) and then the side
conditions of the principle. Well-founded sets are the naturals. The
``canonical_*`` functions build the certificates used by completeness proofs.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .relsem import find_cycle
from .space import gfp, is_monotone, lfp, sorted_elems, subsets
from .transformers import post

# beyond this many subsets, join/meet preservation and the quantifications
# over sub- or supersets are sampled instead of enumerated
ENUM_LIMIT = 2 ** 12
SAMPLES = 1000


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    hypothesis: bool = False  # a hypothesis of the principle fails, not the certificate
    notice: str = ""

    def __bool__(self):
        return self.ok


ACCEPT = Verdict(True)


def _reject(reason: str) -> Verdict:
    return Verdict(False, reason)


def _bad_hypothesis(reason: str) -> Verdict:
    return Verdict(False, reason, hypothesis=True)


@dataclass
class ParkCert:
    invariant: frozenset


@dataclass
class SeqCert:
    sequence: list


@dataclass
class VariantCert:
    invariant: frozenset
    variant: object  # callable or mapping into the naturals
    sequence: list = field(default_factory=list)


def nu(v, x):
    """The variant's value at x; None where a mapping leaves it undefined."""
    return v(x) if callable(v) else v.get(x)


def _natural(n) -> bool:
    return isinstance(n, int) and not isinstance(n, bool) and n >= 0


def _show(x) -> str:
    if isinstance(x, frozenset):
        return "{" + ", ".join(map(repr, sorted_elems(x))) + "}"
    return repr(x)


def _monotone(f, universe):
    if universe is None:
        return None
    bad = is_monotone(f, universe)
    if bad:
        return _bad_hypothesis(f"f is not monotone: {_show(bad[0])} <= {_show(bad[1])}")
    return None


def _pairs(universe, rng):
    n = 2 ** len(universe)
    if n * n <= ENUM_LIMIT * 16:
        subs = list(subsets(universe))
        return itertools.product(subs, subs)
    items = sorted_elems(universe)
    return (tuple(frozenset(x for x in items if rng.random() < 0.5) for _ in range(2))
            for _ in range(SAMPLES))


def preserves_joins(f, universe, rng=None):
    """A pair of non-empty-family witnesses (X, Y) with f(X | Y) != f(X) | f(Y), or None."""
    rng = rng or random.Random(0)
    for x, y in _pairs(frozenset(universe), rng):
        if frozenset(f(x | y)) != frozenset(f(x)) | frozenset(f(y)):
            return x, y
    return None


def preserves_meets(f, universe, rng=None):
    rng = rng or random.Random(0)
    for x, y in _pairs(frozenset(universe), rng):
        if frozenset(f(x & y)) != frozenset(f(x)) & frozenset(f(y)):
            return x, y
    return None


def _between(lo, hi, rng=None):
    """Sets X with lo <= X <= hi, enumerated or sampled."""
    free = sorted_elems(frozenset(hi) - frozenset(lo))
    lo = frozenset(lo)
    if 2 ** len(free) <= ENUM_LIMIT:
        for k in range(len(free) + 1):
            for c in itertools.combinations(free, k):
                yield lo | frozenset(c)
        return
    rng = rng or random.Random(0)
    yield lo
    yield lo | frozenset(free)
    for _ in range(SAMPLES):
        yield lo | frozenset(x for x in free if rng.random() < 0.5)


# over-approximation of least fixpoints

def check_park(f, p, cert: ParkCert, universe=None) -> Verdict:
    """f(I) <= I and I <= p, hence lfp f <= p."""
    bad = _monotone(f, universe)
    if bad is not None:
        return bad
    I = frozenset(cert.invariant)
    out = frozenset(f(I)) - I
    if out:
        return _reject(f"invariant not inductive: f(I) adds {_show(out)}")
    out = I - frozenset(p)
    if out:
        return _reject(f"invariant not within p: {_show(out)}")
    return ACCEPT


def check_image_over(F, alpha, p, I, universe) -> Verdict:
    """alpha(lfp F) <= p from an abstract invariant I.

    Conditions: alpha(empty) <= I; every X with alpha(X) <= I has
    alpha(F(X)) <= I; I <= p. Chains are finite, so limits need no check.
    """
    universe = frozenset(universe)
    bad = _monotone(F, universe)
    if bad is None:
        bad = _monotone(alpha, universe)
    if bad is not None:
        return bad
    I = frozenset(I)
    if not frozenset(alpha(frozenset())) <= I:
        return _reject("alpha of the empty set is not below I")
    for X in _between(frozenset(), universe):
        if frozenset(alpha(X)) <= I and not frozenset(alpha(F(X))) <= I:
            return _reject(f"I not preserved at X = {_show(X)}")
    out = I - frozenset(p)
    if out:
        return _reject(f"I not within p: {_show(out)}")
    return ACCEPT


# under-approximation of least fixpoints

def normalize_sequence(seq) -> list:
    """Prefix unions of a sequence: increasing, and still below the iterates."""
    out, acc = [], frozenset()
    for x in seq:
        acc = acc | frozenset(x)
        out.append(acc)
    return out


def check_under_seq(f, p, cert: SeqCert, universe=None, normalize: bool = False) -> Verdict:
    """X^0 = empty, X^(k+1) <= f(X^k), increasing, p <= X^l; hence p <= lfp f.

    With ``normalize`` a non-increasing but otherwise valid sequence is
    replaced by its prefix unions, and the verdict carries a notice.
    """
    bad = _monotone(f, universe)
    if bad is not None:
        return bad
    seq = [frozenset(x) for x in cert.sequence]
    if not seq:
        return _reject("empty sequence")
    if seq[0]:
        return _reject("sequence does not start at the empty set")
    for k in range(len(seq) - 1):
        out = seq[k + 1] - frozenset(f(seq[k]))
        if out:
            return _reject(f"step {k + 1} not below f of step {k}: {_show(out)}")
    notice = ""
    if any(not seq[k] <= seq[k + 1] for k in range(len(seq) - 1)):
        if not normalize:
            k = next(k for k in range(len(seq) - 1) if not seq[k] <= seq[k + 1])
            return _reject(f"sequence decreases at step {k + 1}")
        seq = normalize_sequence(seq)
        for k in range(len(seq) - 1):
            if not seq[k + 1] <= frozenset(f(seq[k])):
                return _reject(f"normalized step {k + 1} not below f of step {k}")
        notice = "sequence replaced by its prefix unions"
    out = frozenset(p) - seq[-1]
    if out:
        return _reject(f"last element misses {_show(out)}")
    return Verdict(True, notice=notice)


def check_under_variant(f, p, cert: VariantCert, universe=None) -> Verdict:
    """Sequence with X^0 = empty and X^(d+1) <= f(X^d), plus a variant on its
    elements that strictly decreases from any X^b missing part of p to every
    later X^d. The finite sequence is extended by repeating its last element,
    which needs X^l <= f(X^l)."""
    bad = _monotone(f, universe)
    if bad is not None:
        return bad
    seq = [frozenset(x) for x in cert.sequence]
    p = frozenset(p)
    if not seq or seq[0]:
        return _reject("sequence does not start at the empty set")
    for k in range(len(seq) - 1):
        if not seq[k + 1] <= frozenset(f(seq[k])):
            return _reject(f"step {k + 1} not below f of step {k}")
    if not seq[-1] <= frozenset(f(seq[-1])):
        return _reject("last element cannot be repeated: not below its image")
    v = cert.variant
    for x in seq:
        if not _natural(nu(v, x)):
            return _reject(f"variant not a natural at {_show(x)}")
    # the repeated tail makes the last element occur at two ranks
    ext = seq + [seq[-1]]
    for d in range(1, len(ext)):
        for b in range(d):
            if not p <= ext[b] and not nu(v, ext[b]) > nu(v, ext[d]):
                return _reject(f"variant does not decrease from rank {b} to rank {d}")
    return ACCEPT


# void intersections

def check_void_lfp(f, q, cert: VariantCert, universe) -> Verdict:
    """lfp f misses q, from an invariant I and a variant on subsets of I."""
    universe = frozenset(universe)
    w = preserves_joins(f, universe)
    if w:
        return _bad_hypothesis(f"f does not preserve non-empty joins: {_show(w[0])}, {_show(w[1])}")
    I = frozenset(cert.invariant)
    if not frozenset(f(I)) <= I:
        return _reject("f(I) is not below I")
    return _void_common(f, frozenset(q), cert.variant, _between(frozenset(), I), "subset")


def check_void_gfp(f, q, cert: VariantCert, universe) -> Verdict:
    """gfp f misses q, from a coinvariant I and a variant on supersets of I."""
    universe = frozenset(universe)
    w = preserves_meets(f, universe)
    if w:
        return _bad_hypothesis(f"f does not preserve non-empty meets: {_show(w[0])}, {_show(w[1])}")
    I = frozenset(cert.invariant)
    if not I <= frozenset(f(I)):
        return _reject("I is not below f(I)")
    return _void_common(f, frozenset(q), cert.variant, _between(I, universe), "superset")


def _void_common(f, q, v, xs, where) -> Verdict:
    for x in xs:
        fx = frozenset(f(x))
        a, b = nu(v, x), nu(v, fx)
        if not (_natural(a) and _natural(b)):
            return _reject(f"variant not a natural at {where} {_show(x)}")
        if x != fx and not a > b:
            return _reject(f"variant does not decrease at {where} {_show(x)}")
        if not a > b and x & q:
            return _reject(f"stable {where} {_show(x)} meets q")
    return ACCEPT


# greatest fixpoint non-emptiness

def check_gfp_nonempty(f, p, chain, universe) -> Verdict:
    """gfp f meets p, from a decreasing chain over-approximating the iterates
    from the top: X^0 = U, f(X^k) <= X^(k+1) <= X^k, every f(X^k) meets p,
    and the last element is below its image."""
    universe = frozenset(universe)
    bad = _monotone(f, universe)
    if bad is not None:
        return bad
    p = frozenset(p)
    if not p:
        return _bad_hypothesis("p is empty")
    seq = [frozenset(x) for x in chain]
    if not seq or seq[0] != universe:
        return _reject("chain does not start at the universe")
    for k in range(len(seq) - 1):
        fx = frozenset(f(seq[k]))
        if not (fx <= seq[k + 1] <= seq[k]):
            return _reject(f"step {k + 1} is not between f of step {k} and step {k}")
    for k, x in enumerate(seq):
        if not frozenset(f(x)) & p:
            return _reject(f"f of step {k} misses p")
    if not seq[-1] <= frozenset(f(seq[-1])):
        return _reject("last element is not below its image")
    return ACCEPT


# Turing/Floyd termination

def check_turing_floyd(r, p, cert: VariantCert) -> Verdict:
    """No infinite r-chain from p: p and post(r)I within I, and the variant
    strictly decreases along every r-step out of I."""
    I = frozenset(cert.invariant)
    out = (frozenset(p) | post(r, I)) - I
    if out:
        return _reject(f"invariant misses {_show(out)}")
    v = cert.variant
    for y in sorted_elems(I):
        if not _natural(nu(v, y)):
            return _reject(f"variant not a natural at {y!r}")
    for y, y2 in sorted_elems(r):
        if y in I and not nu(v, y) > nu(v, y2):
            return _reject(f"variant not strictly decreasing at ({y!r}, {y2!r})")
    return ACCEPT


# canonical certificates

def canonical_park(f, universe) -> ParkCert:
    return ParkCert(lfp(f, universe).value)


def canonical_seq(f, universe) -> SeqCert:
    return SeqCert(list(lfp(f, universe).trace))


def canonical_under_variant(f, p, universe) -> VariantCert:
    """The exact iterates, cut at the first one containing p; variant counts
    the remaining steps."""
    trace = list(lfp(f, universe).trace)
    p = frozenset(p)
    cut = next((k for k, x in enumerate(trace) if p <= x), len(trace) - 1)
    seq = trace[:cut + 1]
    ranks = {x: len(seq) - 1 - k for k, x in enumerate(seq)}
    return VariantCert(frozenset(), ranks, seq)


def _steps_to(f, target, x, limit):
    n = 0
    while x != target:
        x = frozenset(f(x))
        n += 1
        if n > limit:
            return None  # undefined: the iteration from x misses the fixpoint
    return n


def canonical_void_lfp(f, universe) -> VariantCert:
    """I = lfp f; the variant of x is the number of f-steps from x to lfp f."""
    universe = frozenset(universe)
    top = lfp(f, universe).value
    limit = len(universe) + 2
    return VariantCert(top, lambda x: _steps_to(f, top, frozenset(x), limit))


def canonical_void_gfp(f, universe) -> VariantCert:
    universe = frozenset(universe)
    g = gfp(f, universe).value
    limit = len(universe) + 2
    return VariantCert(g, lambda x: _steps_to(f, g, frozenset(x), limit))


def canonical_gfp_chain(f, universe) -> list:
    return list(gfp(f, universe).trace)


def canonical_image_over(F, alpha, universe):
    """The least abstract invariant: alpha(empty) closed under X -> alpha(F(X))
    for every X with alpha(X) within it. It contains alpha(lfp F) and can be
    strictly larger, in which case no certificate proves the tighter bound."""
    universe = frozenset(universe)
    xs = [(X, frozenset(alpha(X)), frozenset(alpha(F(X)))) for X in _between(frozenset(), universe)]
    inv = frozenset(alpha(frozenset()))
    while True:
        nxt = inv.union(*(aF for _, aX, aF in xs if aX <= inv))
        if nxt == inv:
            return inv
        inv = nxt


def canonical_turing_floyd(r, p) -> VariantCert:
    """I = states reachable from p; variant = longest remaining r-path.

    Raises ValueError when an infinite chain exists from p.
    """
    succ: dict = {}
    for x, y in r:
        succ.setdefault(x, set()).add(y)
    reach, todo = set(p), list(p)
    while todo:
        x = todo.pop()
        for y in succ.get(x, ()):
            if y not in reach:
                reach.add(y)
                todo.append(y)
    if find_cycle(r, p) is not None:
        raise ValueError("an infinite chain exists from p")
    rank: dict = {}

    def height(x):
        stack = [x]
        while stack:
            y = stack[-1]
            if y in rank:
                stack.pop()
                continue
            pending = [z for z in succ.get(y, ()) if z not in rank]
            if pending:
                stack.extend(pending)
            else:
                rank[y] = 1 + max((rank[z] for z in succ.get(y, ())), default=-1)
                stack.pop()
        return rank[x]

    for x in reach:
        height(x)
    return VariantCert(frozenset(reach), dict(rank))


# complement duality

def complement_dual_fn(f, universe) -> Callable:
    universe = frozenset(universe)
    return lambda X: universe - frozenset(f(universe - frozenset(X)))


def park_duality(f, universe) -> tuple:
    """(lfp of the complement dual, complement of gfp f); equal for monotone f."""
    universe = frozenset(universe)
    g = complement_dual_fn(f, universe)
    return lfp(g, universe).value, universe - gfp(f, universe).value
