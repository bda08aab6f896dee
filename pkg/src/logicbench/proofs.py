"""Checkers for the extended Hoare logic with breaks (EHL) and the backward
possible-accessibility logic, with canonical derivation synthesis.

EHL quadruples {P} S {ok: Q, br: T} are checked forward. Predicates carry a
context: the tuple of entry states of the enclosing loops, outermost first,
the first one being the program entry. A row is (context, state-or-BOT) and
``old(x)`` always reads the innermost entry. Non-loop statements use the exact
transformer; loop nodes are checked against their certificate.

Pre-logic triples {P} S <-{ok: Q, br: T} are checked backward: the derivation
proves some precondition for (Q, T) and P must lie inside it. Loops nested in
a loop body are handled exactly, so only outermost loops carry certificates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import lang as L
from . import transformers as Tr
from .relsem import Semantics
from .space import BOT, Space, sorted_elems
from .theories import holds_ehl, holds_prelogic, is_relational, lift_post

EMPTY = frozenset()
_AEXPR = (L.Num, L.Var, L.Old, L.Neg, L.BinOp)
_BEXPR = (L.BConst, L.BotAtom, L.Cmp, L.Not, L.And, L.Or)


class DerivationError(Exception):
    """Malformed derivation, or a quadruple outside the theory for synthesis."""


@dataclass
class Verdict:
    ok: bool
    node: str = ""  # "loop k" (preorder index) or "conclusion"
    condition: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok

    @property
    def message(self) -> str:
        if self.ok:
            return "accepted"
        w = "" if self.witness is None else f" at {self.witness!r}"
        return f"{self.node}: {self.condition}{w}"


class _Fail(Exception):
    def __init__(self, node, condition, witness=None):
        super().__init__(condition)
        self.verdict = Verdict(False, node, condition, witness)


@dataclass
class EhlNode:
    """Certificate of one loop.

    Sets of rows are used as given; callables ``(entry, state) -> bool`` and
    predicates are instantiated on the rows of the loop's contexts. The
    variant maps (entry, state) to a natural number.
    """
    invariant: object
    variant: object = None
    post: object = None  # the loop's conclusion, default the exact one
    body_post: object = None  # R, default the derived body postcondition
    body_break: object = None  # T of the body, default derived


@dataclass
class EhlDerivation:
    loops: dict = field(default_factory=dict)  # preorder loop index -> EhlNode


@dataclass
class PreNode:
    sequence: list  # I^0 .. I^l
    rb: frozenset | None = None
    rbot: frozenset | None = None
    j: frozenset = EMPTY  # states that may iterate forever, only with BOT in Q
    jbody: frozenset | None = None


@dataclass
class PreDerivation:
    loops: dict = field(default_factory=dict)  # preorder loop index -> PreNode
    mode: str | None = None  # "ok", "br", or None to try both


class StateTable(dict):
    """A variant given by the current state only."""

    def __call__(self, entry, state):
        return self[state]


def _body(s):
    return s.body if isinstance(s, L.Program) else s


def _loop_index(s) -> dict:
    return {id(w): i for i, w in enumerate(L.while_loops(s))}


def direct_loops(s) -> list:
    """Loops of ``s`` not nested inside another loop of ``s``."""
    if isinstance(s, L.While):
        return [s]
    if isinstance(s, L.Seq):
        return direct_loops(s.first) + direct_loops(s.second)
    if isinstance(s, L.If):
        return direct_loops(s.then) + direct_loops(s.orelse)
    return []


def _ang(rows):
    return frozenset(r for r in rows if r[1] is not BOT)


def _first(xs):
    xs = sorted_elems(xs)
    return xs[0] if xs else None


class _Checker:
    def __init__(self, space: Space, s, synth: bool):
        self.sp = space
        self.S = Semantics(space)
        self.index = _loop_index(s)
        self.synth = synth
        self._succ: dict = {}

    def succ(self, s):
        """Per-state successors: (normal or diverging, break, normal only)."""
        key = id(s)
        hit = self._succ.get(key)
        if hit is None:
            t = self.S(s)
            maps = ({}, {}, {})
            for m, rel in zip(maps, (t.e | t.bot, t.b, t.e)):
                for x, y in rel:
                    m.setdefault(x, []).append(y)
            hit = self._succ[key] = (s, maps)  # keep s alive so ids stay unique
        return hit[1]

    def node(self, w) -> str:
        return f"loop {self.index[id(w)]}"


# extended Hoare logic

class _Ehl(_Checker):
    def __init__(self, space, s, d: EhlDerivation | None):
        super().__init__(space, s, d is None)
        self.loops = {} if d is None else d.loops

    def exact(self, s, P):
        ok_m, br_m, _ = self.succ(s)
        ok, br = set(), set()
        for k, v in P:
            if v is BOT:
                ok.add((k, BOT))
                continue
            ok.update((k, y) for y in ok_m.get(v, ()))
            br.update((k, y) for y in br_m.get(v, ()))
        return frozenset(ok), frozenset(br)

    def run(self, s, P):
        if isinstance(s, L.While):
            return self.loop(s, P)
        if isinstance(s, L.Seq):
            ok1, br1 = self.run(s.first, P)
            ok2, br2 = self.run(s.second, ok1)
            return ok2, br1 | br2
        if isinstance(s, L.If):
            B = self.sp.cond(s.cond)
            bots = P - _ang(P)
            ok1, br1 = self.run(s.then, frozenset(r for r in P if r[1] is not BOT and r[1] in B))
            ok2, br2 = self.run(s.orelse, frozenset(r for r in P if r[1] is not BOT and r[1] not in B))
            return ok1 | ok2 | bots, br1 | br2
        return self.exact(s, P)

    def rows(self, obj, ctxs):
        if isinstance(obj, (set, frozenset)):
            return frozenset(obj)
        if isinstance(obj, _BEXPR):
            e = obj
            obj = lambda o, v: self.sp.holds(e, v, old=o)  # noqa: E731
        vals = list(self.sp.states) + [BOT]
        return frozenset((c, v) for c in ctxs for v in vals if obj(c[-1], v))

    def variant(self, nu, c, v, node):
        try:
            if isinstance(nu, _AEXPR):
                n = self.sp.eval_a(nu, v, old=c[-1])
            else:
                n = nu(c[-1], v)
        except (KeyError, TypeError, IndexError):
            raise _Fail(node, "variant undefined", (c[-1], v)) from None
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise _Fail(node, f"variant value {n!r} is not a natural number", (c[-1], v))
        return n

    def loop(self, w, P):
        node = self.node(w)
        B = self.sp.cond(w.cond)
        P_ang = _ang(P)
        P_bot = P - P_ang
        entry = frozenset((k + (v,), v) for k, v in P_ang)
        ctxs = frozenset(c for c, _ in entry)
        ok_m, _, e_m = self.succ(w.body)
        if self.synth:
            cert = self.canonical(w, P, entry)
            self.loops[self.index[id(w)]] = cert
        else:
            cert = self.loops.get(self.index[id(w)])
            if cert is None:
                raise _Fail(node, "missing certificate")
        I = self.rows(cert.invariant, ctxs)
        miss = entry - I
        if miss:
            raise _Fail(node, "invariant does not hold at loop entry", _first(miss))
        body_pre = frozenset(r for r in _ang(I) if r[1] in B)
        ok_b, br_b = self.run(w.body, body_pre)
        R = ok_b if cert.body_post is None else self.rows(cert.body_post, ctxs)
        if not ok_b <= R:
            raise _Fail(node, "body postcondition R does not follow from the body", _first(ok_b - R))
        Tb = br_b if cert.body_break is None else self.rows(cert.body_break, ctxs)
        if not br_b <= Tb:
            raise _Fail(node, "body break condition does not follow from the body", _first(br_b - Tb))
        bad = _ang(R) - I
        if bad:
            raise _Fail(node, "invariant not preserved by the body", _first(bad))
        exits = {(c[:-1], v) for c, v in _ang(I) if v not in B}
        exits |= {(c[:-1], v) for c, v in Tb}
        exits |= {(c[:-1], BOT) for c, v in R if v is BOT}
        exits |= P_bot
        if cert.post is None:
            Q = self.exact(w, P)[0]
        else:
            Q = self.rows(cert.post, frozenset(k for k, _ in P))
        bad = exits - Q
        if bad:
            raise _Fail(node, "loop postcondition misses an exit", _first(bad))
        diverging = {k for k, v in Q if v is BOT}
        for c, v in sorted_elems(body_pre):
            if c[:-1] in diverging:
                continue
            if cert.variant is None:
                raise _Fail(node, "variant required where the postcondition excludes nontermination",
                            (c[-1], v))
            a = self.variant(cert.variant, c, v, node)
            for y in sorted_elems(e_m.get(v, ())):
                b = self.variant(cert.variant, c, y, node)
                if not a > b:
                    raise _Fail(node, "variant not strictly decreasing", ((c[-1], v), y))
        return Q, EMPTY

    def canonical(self, w, P, entry) -> EhlNode:
        B = self.sp.cond(w.cond)
        e_m = self.succ(w.body)[2]
        I = set(entry)
        todo = list(entry)
        while todo:
            c, v = todo.pop()
            if v in B:
                for y in e_m.get(v, ()):
                    if (c, y) not in I:
                        I.add((c, y))
                        todo.append((c, y))
        step = {v: e_m.get(v, ()) if v in B else () for _, v in I}
        h = heights(step, sorted_elems(step))
        table = StateTable((v, n) for v, n in h.items() if n is not None)
        return EhlNode(frozenset(I), table)


def heights(succ: dict, roots) -> dict:
    """Longest path length from each reachable node, None if a cycle is reachable."""
    height: dict = {}
    on_stack: set = set()
    end = object()
    for root in roots:
        if root in height:
            continue
        stack = [(root, iter(succ.get(root, ())))]
        on_stack.add(root)
        while stack:
            v, it = stack[-1]
            nxt = next(it, end)
            if nxt is end:
                stack.pop()
                on_stack.discard(v)
                hs = [height.get(y) for y in succ.get(v, ())]
                height[v] = None if any(x is None for x in hs) else 1 + max(hs, default=-1)
            elif nxt not in height and nxt not in on_stack:
                stack.append((nxt, iter(succ.get(nxt, ()))))
                on_stack.add(nxt)
    return height


def _ehl_rows(P, Q, T, space: Space):
    P, Q, T = frozenset(P), frozenset(Q), frozenset(T)
    if is_relational(P):
        P = frozenset(((o,), v) for o, v in P)
    else:
        P = frozenset(((x,), x) for x in P if x is not BOT)
    Q = Q if is_relational(Q) else lift_post(Q, space)
    T = T if is_relational(T) else lift_post(T, space)
    return P, frozenset(((o,), v) for o, v in Q), frozenset(((o,), v) for o, v in T)


def check_ehl(s, P, Q, T, d: EhlDerivation, space: Space) -> Verdict:
    """Check a derivation of {P} s {ok: Q, br: T}; predicates are sets of
    states or of (entry, state) pairs."""
    s = _body(s)
    P, Q, T = _ehl_rows(P, Q, T, space)
    chk = _Ehl(space, s, d)
    try:
        ok, br = chk.run(s, P)
    except _Fail as f:
        return f.verdict
    bad = ok - Q
    if bad:
        c, v = _first(bad)
        return Verdict(False, "conclusion", "outcome outside the postcondition", (c[0], v))
    bad = br - T
    if bad:
        c, v = _first(bad)
        return Verdict(False, "conclusion", "break outside the break condition", (c[0], v))
    return Verdict(True)


# backward possible-accessibility logic

class _Pre(_Checker):
    def __init__(self, space, s, d: PreDerivation | None):
        super().__init__(space, s, d is None)
        self.loops = {} if d is None else d.loops

    def exact(self, s, Q, T, mode):
        t = self.S(s)
        if mode == "ok":
            return Tr.pre(t.e | t.bot, Q)
        return Tr.pre(t.b, T)

    def run(self, s, Q, T, mode, nested=False):
        if isinstance(s, L.While):
            if mode == "br":
                return EMPTY
            if nested:
                return self.exact(s, Q, T, mode)
            return self.loop(s, Q)
        if isinstance(s, L.Seq):
            if mode == "ok":
                mid = self.run(s.second, Q, T, "ok", nested) | (Q & {BOT})
                return self.run(s.first, mid, T, "ok", nested)
            mid = self.run(s.second, EMPTY, T, "br", nested)
            return self.run(s.first, EMPTY, T, "br", nested) | self.run(s.first, mid, EMPTY, "ok", nested)
        if isinstance(s, L.If):
            B = self.sp.cond(s.cond)
            a = self.run(s.then, Q, T, mode, nested)
            b = self.run(s.orelse, Q, T, mode, nested)
            return (a & B) | (b - B)
        return self.exact(s, Q, T, mode)

    def loop(self, w, Q):
        node = self.node(w)
        B = self.sp.cond(w.cond)
        Qa = frozenset(Q) - {BOT}
        has_bot = BOT in Q
        if self.synth:
            cert = self.canonical(w, Q)
            self.loops[self.index[id(w)]] = cert
        else:
            cert = self.loops.get(self.index[id(w)])
            if cert is None:
                raise _Fail(node, "missing certificate")
        body = w.body
        rb_d = self.run(body, EMPTY, Qa, "br", True)
        rb = rb_d if cert.rb is None else frozenset(cert.rb)
        if not rb <= rb_d:
            raise _Fail(node, "RB is not derivable for the body", _first(rb - rb_d))
        rbot_d = self.run(body, Q & {BOT}, EMPTY, "ok", True)
        rbot = rbot_d if cert.rbot is None else frozenset(cert.rbot)
        if not rbot <= rbot_d:
            raise _Fail(node, "RBOT is not derivable for the body", _first(rbot - rbot_d))
        seq = [frozenset(x) for x in cert.sequence]
        if not seq or seq[0]:
            raise _Fail(node, "the sequence must start with the empty set")
        if len(seq) > len(self.sp) + 2:
            raise _Fail(node, f"sequence longer than {len(self.sp) + 2}")
        base = (Qa - B) | (B & (rb | rbot))
        for n in range(len(seq) - 1):
            if not seq[n] <= seq[n + 1]:
                raise _Fail(node, f"sequence not increasing at n={n}", _first(seq[n] - seq[n + 1]))
            re = self.run(body, seq[n], EMPTY, "ok", True)
            bad = seq[n + 1] - (base | (B & re))
            if bad:
                raise _Fail(node, f"I^{n + 1} not justified by I^{n}", _first(bad))
        J = frozenset(cert.j)
        if J:
            if not has_bot:
                raise _Fail(node, "nontermination precondition needs BOT in the postcondition", _first(J))
            jb_d = self.run(body, J, EMPTY, "ok", True)
            jb = jb_d if cert.jbody is None else frozenset(cert.jbody)
            if not jb <= jb_d:
                raise _Fail(node, "JBODY is not derivable for the body", _first(jb - jb_d))
            bad = J - (B & jb)
            if bad:
                raise _Fail(node, "J is not closed under some iteration", _first(bad))
        return seq[-1] | J

    def canonical(self, w, Q) -> PreNode:
        B = self.sp.cond(w.cond)
        Qa = frozenset(Q) - {BOT}
        body = w.body
        base = (Qa - B) | (B & (self.run(body, EMPTY, Qa, "br", True)
                                | self.run(body, Q & {BOT}, EMPTY, "ok", True)))
        seq = [EMPTY]
        while True:
            nxt = base | (B & self.run(body, seq[-1], EMPTY, "ok", True))
            if nxt == seq[-1]:
                break
            seq.append(nxt)
        J = EMPTY
        if BOT in Q:
            J = B
            while True:
                nxt = B & self.run(body, J, EMPTY, "ok", True)
                if nxt == J:
                    break
                J = nxt
        return PreNode(seq, j=J)


def check_prelogic(s, P, Q, T, d: PreDerivation, space: Space) -> Verdict:
    """Check a derivation of {P} s <-{ok: Q, br: T} (assertional predicates)."""
    s = _body(s)
    P, Q, T = frozenset(P) - {BOT}, frozenset(Q), frozenset(T) - {BOT}
    modes = [d.mode] if d.mode else ["ok", "br"]
    first_failure = None
    for mode in modes:
        chk = _Pre(space, s, d)
        try:
            proved = chk.run(s, Q, T, mode)
        except _Fail as f:
            if first_failure is None:
                first_failure = f.verdict
            continue
        if P <= proved:
            return Verdict(True)
        if first_failure is None:
            first_failure = Verdict(False, "conclusion", f"precondition not covered in {mode} mode",
                                    _first(P - proved))
    return first_failure


# canonical synthesis

def synth_canonical(s, P, Q, T, logic: str, space: Space):
    """The canonical derivation of a valid quadruple; raises DerivationError
    when the quadruple is not in the theory."""
    s = _body(s)
    if logic == "ehl":
        res = holds_ehl(s, P, Q, T, space)
        if not res:
            raise DerivationError(f"not a valid EHL quadruple (witness {res.witness!r})")
        chk = _Ehl(space, s, None)
        chk.run(s, _ehl_rows(P, Q, T, space)[0])
        return EhlDerivation(dict(chk.loops))
    if logic == "prelogic":
        res = holds_prelogic(s, P, Q, T, space)
        if not res:
            raise DerivationError(f"not a valid pre-logic quadruple (witness {res.witness!r})")
        t = Semantics(space)(s)
        mode = "ok" if frozenset(P) - {BOT} <= Tr.pre(t.e | t.bot, Q) else "br"
        chk = _Pre(space, s, None)
        chk.run(s, frozenset(Q), frozenset(T) - {BOT}, mode)
        return PreDerivation(dict(chk.loops), mode)
    raise ValueError(f"unknown logic {logic!r}")


# derivation files
#
#   mode: ok                    (pre-logic only, optional)
#   while:                      (one entry per loop, nested like the program)
#     INVARIANT: <predicate or [list]>
#     VARIANT: <expression or [list]>
#     SEQUENCE:
#       0: false
#       1: n == 0
#     while:
#       ...
#
# Lists are ';'-separated: states {x=1,y=2} or BOT for sets of states,
# entry -> state pairs for EHL rows, state: number for variants.

EHL_SECTIONS = ("INVARIANT", "VARIANT", "POST", "BODYPOST", "BODYBREAK")
PRE_SECTIONS = ("SEQUENCE", "RB", "RBOT", "J", "JBODY")


@dataclass
class _Entry:
    line: int
    indent: int
    sections: dict = field(default_factory=dict)
    children: list = field(default_factory=list)


def _parse_tree(text: str):
    root = _Entry(0, -1)
    stack = [root]
    mode = None
    open_seq = None  # (entry, indent of the SEQUENCE line)
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if open_seq is not None and indent > open_seq[1]:
            k, sep, val = body.partition(":")
            if not sep or not k.strip().isdigit():
                raise DerivationError(f"line {n}: expected 'k: predicate' in SEQUENCE")
            open_seq[0].sections["SEQUENCE"].append((int(k), val.strip(), n))
            continue
        open_seq = None
        while indent <= stack[-1].indent:
            stack.pop()
        cur = stack[-1]
        if body == "while:":
            e = _Entry(n, indent)
            cur.children.append(e)
            stack.append(e)
            continue
        name, sep, val = body.partition(":")
        name, val = name.strip(), val.strip()
        if not sep:
            raise DerivationError(f"line {n}: expected 'while:' or 'SECTION: value'")
        if name == "mode" and cur is root:
            if val not in ("ok", "br"):
                raise DerivationError(f"line {n}: mode must be ok or br")
            mode = val
            continue
        if cur is root:
            raise DerivationError(f"line {n}: section {name} outside any while entry")
        if name not in EHL_SECTIONS + PRE_SECTIONS:
            raise DerivationError(f"line {n}: unknown section {name!r}")
        if name in cur.sections:
            raise DerivationError(f"line {n}: section {name} given twice")
        if name == "SEQUENCE":
            if val:
                raise DerivationError(f"line {n}: SEQUENCE entries go on the following lines")
            cur.sections[name] = []
            open_seq = (cur, indent)
        else:
            cur.sections[name] = (val, n)
    return root, mode


def _match(entries, stmt, index, out):
    loops = direct_loops(stmt)
    if len(entries) != len(loops):
        where = f"line {entries[0].line}: " if entries else ""
        raise DerivationError(f"{where}expected {len(loops)} while entries, found {len(entries)}")
    for e, w in zip(entries, loops):
        out[index[id(w)]] = e
        _match(e.children, w.body, index, out)


def _split_list(val: str, n: int) -> list:
    if not val.endswith("]"):
        raise DerivationError(f"line {n}: unterminated list")
    return [x.strip() for x in val[1:-1].split(";") if x.strip()]


def _state(space, text, n):
    try:
        return space.parse_state(text)
    except Exception as ex:
        raise DerivationError(f"line {n}: {ex}") from None


def _states(space: Space, val: str, n: int) -> frozenset:
    if val.startswith("["):
        return frozenset(_state(space, x, n) for x in _split_list(val, n))
    try:
        return space.pred(L.parse_predicate(val, space.variables))
    except L.LangError as ex:
        raise DerivationError(f"line {n}: {ex}") from None


def _rowpred(space: Space, val: str, n: int) -> Callable:
    if val.startswith("["):
        pairs = set()
        for item in _split_list(val, n):
            a, sep, b = item.partition("->")
            if not sep:
                raise DerivationError(f"line {n}: expected 'entry -> state' in list")
            pairs.add((_state(space, a, n), _state(space, b, n)))
        return lambda o, v: (o, v) in pairs
    try:
        e = L.parse_predicate(val, space.variables, relational=True)
    except L.LangError as ex:
        raise DerivationError(f"line {n}: {ex}") from None
    return lambda o, v: space.holds(e, v, old=o)


def _variant(space: Space, val: str, n: int):
    if val.startswith("["):
        table = StateTable()
        for item in _split_list(val, n):
            a, sep, b = item.rpartition(":")
            if not sep or not b.strip().lstrip("-").isdigit():
                raise DerivationError(f"line {n}: expected 'state: number' in variant list")
            table[_state(space, a, n)] = int(b)
        return table
    try:
        return L.parse_aexpr(val, space.variables, relational=True)
    except L.LangError as ex:
        raise DerivationError(f"line {n}: {ex}") from None


def parse_derivation(text: str, program, space: Space, logic: str):
    root, mode = _parse_tree(text)
    s = _body(program)
    entries: dict = {}
    _match(root.children, s, _loop_index(s), entries)
    loops = {}
    if logic == "ehl":
        for i, e in entries.items():
            sec = {k: v for k, v in e.sections.items() if k != "SEQUENCE"}
            extra = set(sec) - set(EHL_SECTIONS) | ({"SEQUENCE"} & set(e.sections))
            if extra:
                raise DerivationError(f"line {e.line}: sections {sorted(extra)} do not belong to EHL")
            if "INVARIANT" not in sec:
                raise DerivationError(f"line {e.line}: missing INVARIANT")
            get = lambda k: None if k not in sec else _rowpred(space, *sec[k])  # noqa: E731
            loops[i] = EhlNode(get("INVARIANT"),
                               None if "VARIANT" not in sec else _variant(space, *sec["VARIANT"]),
                               get("POST"), get("BODYPOST"), get("BODYBREAK"))
        return EhlDerivation(loops)
    if logic != "prelogic":
        raise ValueError(f"unknown logic {logic!r}")
    for i, e in entries.items():
        extra = set(e.sections) - set(PRE_SECTIONS)
        if extra:
            raise DerivationError(f"line {e.line}: sections {sorted(extra)} do not belong to the pre-logic")
        if not e.sections:
            continue  # nested loops are handled exactly
        if "SEQUENCE" not in e.sections:
            raise DerivationError(f"line {e.line}: missing SEQUENCE")
        seq = sorted(e.sections["SEQUENCE"])
        if [k for k, _, _ in seq] != list(range(len(seq))):
            raise DerivationError(f"line {e.line}: SEQUENCE must be numbered 0, 1, 2, ...")
        sets = {k: None if k not in e.sections else _states(space, *e.sections[k]) - {BOT}
                for k in ("RB", "RBOT", "J", "JBODY")}
        loops[i] = PreNode([_states(space, v, n) - {BOT} for _, v, n in seq],
                           sets["RB"], sets["RBOT"], sets["J"] or EMPTY, sets["JBODY"])
    return PreDerivation(loops, mode)


def _show_states(space: Space, xs) -> str:
    return "[" + "; ".join(space.fmt(x) for x in sorted_elems(xs)) + "]"


def dump_derivation(d, program, space: Space) -> str:
    """Derivation text with explicit lists; only set- and table-valued
    certificates (as produced by synthesis) can be written."""
    s = _body(program)
    index = _loop_index(s)
    out = []
    if isinstance(d, PreDerivation) and d.mode:
        out.append(f"mode: {d.mode}")

    def walk(stmt, depth):
        for w in direct_loops(stmt):
            pad = "  " * depth
            out.append(pad + "while:")
            node = d.loops.get(index[id(w)])
            if isinstance(node, EhlNode):
                rows = sorted_elems({(c[-1], v) for c, v in _as_set(node.invariant)})
                items = "; ".join(f"{space.fmt(o)} -> {space.fmt(v)}" for o, v in rows)
                out.append(f"{pad}  INVARIANT: [{items}]")
                if node.variant is not None:
                    table = _as_table(node.variant)
                    items = "; ".join(f"{space.fmt(v)}: {table[v]}" for v in sorted_elems(table))
                    out.append(f"{pad}  VARIANT: [{items}]")
            elif isinstance(node, PreNode):
                out.append(f"{pad}  SEQUENCE:")
                for k, x in enumerate(node.sequence):
                    out.append(f"{pad}    {k}: {_show_states(space, x)}")
                for name, x in (("RB", node.rb), ("RBOT", node.rbot), ("J", node.j or None),
                                ("JBODY", node.jbody)):
                    if x is not None:
                        out.append(f"{pad}  {name}: {_show_states(space, x)}")
            walk(w.body, depth + 1)

    walk(s, 0)
    return "\n".join(out) + "\n"


def _as_set(x):
    if not isinstance(x, (set, frozenset)):
        raise DerivationError("only set-valued invariants can be written out")
    return x


def _as_table(x):
    if not isinstance(x, StateTable):
        raise DerivationError("only table variants can be written out")
    return x
