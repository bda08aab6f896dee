"""Natural relational semantics (e, b, bot) and an independent execution oracle."""
from __future__ import annotations

from dataclasses import dataclass

from . import lang as L
from .space import (BOT, Fixpoint, Space, compose, gfp, guard, lfp, no_bot,
                    successors)


@dataclass(frozen=True)
class SemTriple:
    e: frozenset  # normal exit, Sigma x Sigma
    b: frozenset  # break exit, Sigma x Sigma
    bot: frozenset  # nontermination, Sigma x {BOT}

    @property
    def natural(self) -> frozenset:
        """All pairs, nontermination included."""
        return self.e | self.b | self.bot

    def __iter__(self):
        return iter((self.e, self.b, self.bot))


EMPTY = frozenset()


def nondet_range(space: Space, lo, hi) -> range:
    d = space.domain
    a = d.lo if lo == L.NEG_INF else d.hi + 1 if lo == L.POS_INF else max(lo, d.lo)
    b = d.hi if hi == L.POS_INF else d.lo - 1 if hi == L.NEG_INF else min(hi, d.hi)
    return range(a, b + 1)


def assign_rel(space: Space, s) -> frozenset:
    if isinstance(s, L.Assign):
        return frozenset((x, space.update(x, s.var, space.eval_a(s.expr, x))) for x in space.states)
    vals = nondet_range(space, s.lo, s.hi)
    return frozenset((x, space.update(x, s.var, v)) for x in space.states for v in vals)


@dataclass
class LoopFixpoints:
    step: frozenset  # [[B]] ; [[S]]^e
    finite: Fixpoint  # lfp F^e
    infinite: Fixpoint  # gfp F^bot


class Semantics:
    """Structural fixpoint semantics with per-evaluation memoization."""

    def __init__(self, space: Space):
        self.space = space
        self.ident = space.identity()
        self._memo: dict = {}
        self.loops: dict = {}

    def __call__(self, s) -> SemTriple:
        hit = self._memo.get(s)
        if hit is None:
            hit = self._memo[s] = self._sem(s)
        return hit

    def _sem(self, s) -> SemTriple:
        sp = self.space
        if isinstance(s, L.Skip):
            return SemTriple(self.ident, EMPTY, EMPTY)
        if isinstance(s, L.Break):
            return SemTriple(EMPTY, self.ident, EMPTY)
        if isinstance(s, (L.Assign, L.Nondet)):
            return SemTriple(assign_rel(sp, s), EMPTY, EMPTY)
        if isinstance(s, L.Seq):
            e1, b1, o1 = self(s.first)
            e2, b2, o2 = self(s.second)
            return SemTriple(compose(e1, e2), b1 | compose(e1, b2), o1 | compose(e1, o2))
        if isinstance(s, L.If):
            t = guard(sp.cond(s.cond))
            f = guard(sp.sigma - sp.cond(s.cond))
            a, b = self(s.then), self(s.orelse)
            return SemTriple(*(compose(t, x) | compose(f, y) for x, y in zip(a, b)))
        if isinstance(s, L.While):
            fx = self.loop(s)
            t = guard(sp.cond(s.cond))
            f = guard(sp.sigma - sp.cond(s.cond))
            body = self(s.body)
            star = fx.finite.value
            e = compose(star, f | compose(t, body.b))
            bot = compose(star, compose(t, body.bot)) | fx.infinite.value
            return SemTriple(e, EMPTY, bot)
        raise TypeError(f"not a statement: {s!r}")

    def loop(self, w: L.While) -> LoopFixpoints:
        hit = self.loops.get(w)
        if hit is not None:
            return hit
        sp = self.space
        step = compose(guard(sp.cond(w.cond)), self(w.body).e)
        n = len(sp)

        def f_fin(x):
            return self.ident | compose(step, no_bot(x))

        def f_inf(x):
            return compose(step, x)

        fx = LoopFixpoints(step, lfp(f_fin, (), max_steps=n * n + 2),
                           gfp(f_inf, sp.all_bot()))
        self.loops[w] = fx
        return fx


def sem(s, space: Space) -> SemTriple:
    if isinstance(s, L.Program):
        s = s.body
    return Semantics(space)(s)


def angelic(t: SemTriple) -> frozenset:
    return no_bot(t.e | t.b)


# oracle: explore the configuration graph

def _step(space: Space, k: tuple, x):
    """Successors of configuration (k, x).

    Returns a list of ('go', k', x') moves, ('exit', x) or ('break', x).
    """
    if not k:
        return [("exit", x)]
    top, rest = k[0], k[1:]
    if top[0] == "again":
        return [("go", (("run", top[1]),) + rest, x)]
    s = top[1]
    if isinstance(s, L.Skip):
        return [("go", rest, x)]
    if isinstance(s, L.Assign):
        return [("go", rest, space.update(x, s.var, space.eval_a(s.expr, x)))]
    if isinstance(s, L.Nondet):
        return [("go", rest, space.update(x, s.var, v)) for v in nondet_range(space, s.lo, s.hi)]
    if isinstance(s, L.Seq):
        return [("go", (("run", s.first), ("run", s.second)) + rest, x)]
    if isinstance(s, L.If):
        branch = s.then if space.eval_b(s.cond, x) else s.orelse
        return [("go", (("run", branch),) + rest, x)]
    if isinstance(s, L.While):
        if space.eval_b(s.cond, x):
            return [("go", (("run", s.body), ("again", s)) + rest, x)]
        return [("go", rest, x)]
    if isinstance(s, L.Break):
        for i, fr in enumerate(rest):
            if fr[0] == "again":
                return [("go", rest[i + 1:], x)]
        return [("break", x)]
    raise TypeError(f"not a statement: {s!r}")


def interp_oracle(s, space: Space) -> SemTriple:
    """Outcomes of every state by exhaustive exploration.

    A start state diverges iff a cycle of configurations is reachable from it
    (the configuration graph is finite).
    """
    if isinstance(s, L.Program):
        s = s.body
    start = {x: ((("run", s),), x) for x in space.states}
    graph: dict = {}
    outs: dict = {}
    todo = list(start.values())
    while todo:
        c = todo.pop()
        if c in graph:
            continue
        nxt, fin = [], []
        for mv in _step(space, *c):
            if mv[0] == "go":
                d = (mv[1], mv[2])
                nxt.append(d)
                if d not in graph:
                    todo.append(d)
            else:
                fin.append(mv)
        graph[c] = nxt
        outs[c] = fin

    comp = _sccs(graph)
    # per component: finals reachable and whether a cycle is reachable
    members: dict = {}
    for c, i in comp.items():
        members.setdefault(i, []).append(c)
    info: dict = {}
    # Tarjan numbers components in reverse topological order
    for i in sorted(members):
        cs = members[i]
        cyclic = len(cs) > 1 or cs[0] in graph[cs[0]]
        finals = set()
        div = cyclic
        for c in cs:
            finals.update(outs[c])
            for d in graph[c]:
                j = comp[d]
                if j != i:
                    f2, d2 = info[j]
                    finals |= f2
                    div = div or d2
        info[i] = (frozenset(finals), div)

    e, b, bot = set(), set(), set()
    for x, c in start.items():
        finals, div = info[comp[c]]
        for kind, y in finals:
            (e if kind == "exit" else b).add((x, y))
        if div:
            bot.add((x, BOT))
    return SemTriple(frozenset(e), frozenset(b), frozenset(bot))


def _sccs(graph: dict) -> dict:
    """Iterative Tarjan; component ids come out in reverse topological order."""
    index, low, comp = {}, {}, {}
    stack, on = [], set()
    counter = 0
    ncomp = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(graph[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(graph[w])))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


# termination lemma

@dataclass(frozen=True)
class TerminationReport:
    gfp_value: frozenset
    gfp_empty: bool
    cycle: tuple | None  # a cycle of the step relation, if one exists

    @property
    def no_infinite_chain(self) -> bool:
        return self.cycle is None

    @property
    def agree(self) -> bool:
        return self.gfp_empty == self.no_infinite_chain


def find_cycle(r, roots=None) -> tuple | None:
    """Some cycle of the finite relation r reachable from ``roots`` (default:
    anywhere), by depth-first search."""
    succ = successors(r)
    color: dict = {}
    for root in sorted(succ if roots is None else roots, key=repr):
        if root in color:
            continue
        path = [root]
        color[root] = 1
        iters = [iter(sorted(succ.get(root, ()), key=repr))]
        while iters:
            for w in iters[-1]:
                c = color.get(w, 0)
                if c == 1:
                    return tuple(path[path.index(w):])
                if c == 0:
                    color[w] = 1
                    path.append(w)
                    iters.append(iter(sorted(succ.get(w, ()), key=repr)))
                    break
            else:
                color[path.pop()] = 2
                iters.pop()
    return None


def nonterm_empty_check(w, space: Space) -> TerminationReport:
    if isinstance(w, L.Program):
        w = w.body
    if not isinstance(w, L.While):
        raise TypeError("expected a while loop")
    fx = Semantics(space).loop(w)
    g = fx.infinite.value
    return TerminationReport(g, not g, find_cycle(fx.step))
