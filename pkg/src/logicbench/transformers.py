"""Assertional and relational predicate transformers, exact on finite carriers.

The complement-dual transformers quantify over a codomain (for ``pre_tilde``)
or domain (for ``post_tilde``) carrier; by default the carrier is whatever the
relation mentions, callers pass the full one when it matters.
"""
from __future__ import annotations

from .space import BOT, successors


def post(r, P) -> frozenset:
    P = set(P)
    return frozenset(y for x, y in r if x in P)


def pre(r, Q) -> frozenset:
    Q = set(Q)
    return frozenset(x for x, y in r if y in Q)


def post_tilde(r, P, codomain=None) -> frozenset:
    """{y | for all x, (x, y) in r implies x in P}, y ranging over codomain."""
    P = set(P)
    codomain = frozenset(y for _, y in r) if codomain is None else frozenset(codomain)
    bad = {y for x, y in r if x not in P}
    return codomain - bad


def pre_tilde(r, Q, domain=None) -> frozenset:
    """{x | for all y, (x, y) in r implies y in Q}, x ranging over domain."""
    Q = set(Q)
    domain = frozenset(x for x, _ in r) if domain is None else frozenset(domain)
    bad = {x for x, y in r if y not in Q}
    return domain - bad


# relational transformers; relational predicates are sets of (entry, current)

def Post(r, P) -> frozenset:
    succ = successors(r)
    out = set()
    for s0, s in P:
        if s is BOT:
            continue
        for t in succ.get(s, ()):
            out.add((s0, t))
    return frozenset(out)


def Pre(r, Q) -> frozenset:
    """{(s, sf) | exists s', (s, s') in r and (s', sf) in Q}."""
    qs = successors(Q)
    out = set()
    for s, t in r:
        for f in qs.get(t, ()):
            out.add((s, f))
    return frozenset(out)


def Post_tilde(r, P, carrier) -> frozenset:
    """{(s0, s') in carrier | for all s, (s, s') in r implies (s0, s) in P}."""
    P = set(P)
    preds: dict = {}
    for s, t in r:
        preds.setdefault(t, []).append(s)
    return frozenset((s0, t) for s0, t in carrier
                     if all((s0, s) in P for s in preds.get(t, ())))


def Pre_tilde(r, Q, carrier) -> frozenset:
    """{(s, sf) in carrier | for all s', (s, s') in r implies (s', sf) in Q}."""
    Q = set(Q)
    succ = successors(r)
    return frozenset((s, f) for s, f in carrier
                     if all((t, f) in Q for t in succ.get(s, ())))


# Dijkstra-style transformers on a semantic triple

def _full(t):
    return t.e | t.b | t.bot


def wp(t, Q, space) -> frozenset:
    r = _full(t)
    return pre(r, Q) & pre_tilde(r, Q, space.sigma)


def wlp(t, Q, space) -> frozenset:
    return wp(t, frozenset(Q) | {BOT}, space)


def sp(t, P, space) -> frozenset:
    r = _full(t)
    return post(r, P) & post_tilde(r, P, space.sigma_bot)


def slp(t, P, space) -> frozenset:
    return sp(t, P, space) - {BOT}
