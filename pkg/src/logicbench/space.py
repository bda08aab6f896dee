"""Finite state spaces, predicates, relations and Kleene fixpoints.

States are tuples of ints ordered like the declared variables. ``BOT`` stands
for nontermination; it is not a state. Relations and predicates are plain
frozensets (of pairs, resp. of states and possibly ``BOT``).
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import lang as L


class _Bot:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "BOT"

    def __reduce__(self):
        return (_Bot, ())


BOT = _Bot()


class SpaceError(Exception):
    pass


class MonotonicityError(Exception):
    def __init__(self, msg, trace):
        super().__init__(msg)
        self.trace = trace


@dataclass(frozen=True)
class Domain:
    lo: int = -8
    hi: int = 7
    cap: int = 4096

    def __post_init__(self):
        if self.lo > self.hi:
            raise SpaceError(f"empty domain {self.lo}..{self.hi}")

    @property
    def values(self) -> range:
        return range(self.lo, self.hi + 1)

    def clamp(self, v: int) -> int:
        return self.lo if v < self.lo else self.hi if v > self.hi else v

    @classmethod
    def parse(cls, text: str, cap: int = 4096) -> "Domain":
        m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
        if not m:
            raise SpaceError(f"bad domain {text!r}, expected LO..HI")
        return cls(int(m.group(1)), int(m.group(2)), cap)


def enumerate_states(domain: Domain, variables) -> list:
    n = (domain.hi - domain.lo + 1) ** len(variables)
    if n > domain.cap:
        raise SpaceError(f"{n} states exceed the cap of {domain.cap}")
    return list(itertools.product(domain.values, repeat=len(variables)))


def order_key(x):
    """Total order on states, BOT, pairs and contexts; BOT sorts last."""
    if x is BOT:
        return (2,)
    if isinstance(x, tuple):
        return (1, tuple(order_key(y) for y in x))
    if isinstance(x, frozenset):
        return (1, (len(x),) + tuple(sorted(order_key(y) for y in x)))
    if isinstance(x, str):
        return (0, 0, x)
    return (0, x)


def sorted_elems(xs) -> list:
    return sorted(xs, key=order_key)


@dataclass
class Space:
    variables: tuple
    domain: Domain = field(default_factory=Domain)

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.states = enumerate_states(self.domain, self.variables)
        self.index = {s: i for i, s in enumerate(self.states)}
        self.pos = {v: i for i, v in enumerate(self.variables)}
        self.sigma = frozenset(self.states)
        self.sigma_bot = self.sigma | {BOT}

    def __len__(self):
        return len(self.states)

    def get(self, state, var: str) -> int:
        return state[self.pos[var]]

    def update(self, state, var: str, value: int):
        i = self.pos[var]
        return state[:i] + (self.domain.clamp(value),) + state[i + 1:]

    def fmt(self, x) -> str:
        if x is BOT:
            return "BOT"
        return "{" + ",".join(f"{v}={x[i]}" for i, v in enumerate(self.variables)) + "}"

    def parse_state(self, text: str):
        text = text.strip()
        if text == "BOT":
            return BOT
        m = re.fullmatch(r"\{(.*)\}", text)
        if not m:
            raise SpaceError(f"bad state {text!r}")
        vals = {}
        for part in filter(None, (p.strip() for p in m.group(1).split(","))):
            k, _, v = part.partition("=")
            vals[k.strip()] = int(v)
        if set(vals) != set(self.variables):
            raise SpaceError(f"state {text!r} must bind exactly {', '.join(self.variables)}")
        s = tuple(vals[v] for v in self.variables)
        if s not in self.index:
            raise SpaceError(f"state {text!r} is outside the domain")
        return s

    def identity(self) -> frozenset:
        return frozenset((s, s) for s in self.states)

    def all_bot(self) -> frozenset:
        return frozenset((s, BOT) for s in self.states)

    # expressions

    def eval_a(self, e, state, old=None) -> int:
        """Integer value in Z; callers clamp when storing into a state."""
        if isinstance(e, L.Num):
            return e.value
        if isinstance(e, L.Var):
            return state[self.pos[e.name]]
        if isinstance(e, L.Old):
            if old is None:
                raise SpaceError("old(x) needs an entry state")
            return old[self.pos[e.name]]
        if isinstance(e, L.Neg):
            return -self.eval_a(e.arg, state, old)
        a, b = self.eval_a(e.left, state, old), self.eval_a(e.right, state, old)
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b

    def eval_b(self, e, state, old=None) -> bool:
        """Boolean value at a proper state."""
        if isinstance(e, L.BConst):
            return e.value
        if isinstance(e, L.BotAtom):
            return False
        if isinstance(e, L.Cmp):
            return _CMP[e.op](self.eval_a(e.left, state, old), self.eval_a(e.right, state, old))
        if isinstance(e, L.Not):
            return not self.eval_b(e.arg, state, old)
        if isinstance(e, L.And):
            return self.eval_b(e.left, state, old) and self.eval_b(e.right, state, old)
        return self.eval_b(e.left, state, old) or self.eval_b(e.right, state, old)

    def eval_at_bot(self, e, old=None):
        """Strong Kleene value at BOT: True, False or None (undetermined).

        ``bot`` holds there; atoms about the current state are undetermined;
        comparisons that only read old(x) keep their value.
        """
        if isinstance(e, L.BotAtom):
            return True
        if isinstance(e, L.BConst):
            return None
        if isinstance(e, L.Cmp):
            if old is not None and _only_old(e):
                return _CMP[e.op](self.eval_a(e.left, None, old), self.eval_a(e.right, None, old))
            return None
        if isinstance(e, L.Not):
            v = self.eval_at_bot(e.arg, old)
            return None if v is None else not v
        a = self.eval_at_bot(e.left, old)
        b = self.eval_at_bot(e.right, old)
        if isinstance(e, L.And):
            if a is False or b is False:
                return False
            return True if a and b else None
        if a is True or b is True:
            return True
        return False if a is False and b is False else None

    def holds(self, e, x, old=None) -> bool:
        if x is BOT:
            return self.eval_at_bot(e, old) is True
        return self.eval_b(e, x, old)

    def pred(self, e) -> frozenset:
        """Assertional predicate: subset of states plus BOT."""
        return frozenset(x for x in itertools.chain(self.states, (BOT,)) if self.holds(e, x))

    def relpred(self, e, olds: Iterable | None = None) -> frozenset:
        """Relational predicate: pairs (entry state, state or BOT)."""
        olds = self.states if olds is None else olds
        return frozenset((o, x) for o in olds for x in itertools.chain(self.states, (BOT,))
                         if self.holds(e, x, o))

    def cond(self, e) -> frozenset:
        """States satisfying a program condition."""
        return frozenset(s for s in self.states if self.eval_b(e, s))

    def parse_pred(self, text: str) -> frozenset:
        return self.pred(L.parse_predicate(text, self.variables))

    def parse_relpred(self, text: str) -> frozenset:
        return self.relpred(L.parse_predicate(text, self.variables, relational=True))


_CMP = {
    "==": lambda a, b: a == b, "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
}


def _only_old(e) -> bool:
    found = {"old": False, "cur": False}

    def walk(a):
        if isinstance(a, L.Old):
            found["old"] = True
        elif isinstance(a, L.Var):
            found["cur"] = True
        elif isinstance(a, L.Neg):
            walk(a.arg)
        elif isinstance(a, L.BinOp):
            walk(a.left)
            walk(a.right)

    walk(e.left)
    walk(e.right)
    return found["old"] and not found["cur"]


# relation algebra

def successors(r) -> dict:
    succ: dict = {}
    for x, y in r:
        succ.setdefault(x, set()).add(y)
    return succ


def compose(r1, r2) -> frozenset:
    """Left-to-right composition r1 ; r2, with BOT absorbing on the left."""
    succ = successors(r2)
    out = set()
    for x, z in r1:
        if z is BOT:
            out.add((x, BOT))
        else:
            for y in succ.get(z, ()):
                out.add((x, y))
    return frozenset(out)


def inverse(r) -> frozenset:
    return frozenset((y, x) for x, y in r)


def image(r, xs) -> frozenset:
    xs = set(xs)
    return frozenset(y for x, y in r if x in xs)


def restrict(r, xs) -> frozenset:
    """Pairs of r whose first component lies in xs."""
    xs = set(xs)
    return frozenset((x, y) for x, y in r if x in xs)


def guard(states) -> frozenset:
    """The test relation {(s, s) | s in states}."""
    return frozenset((s, s) for s in states)


def no_bot(r) -> frozenset:
    return frozenset(p for p in r if p[1] is not BOT)


def only_bot(r) -> frozenset:
    return frozenset(p for p in r if p[1] is BOT)


# fixpoints

@dataclass
class Fixpoint:
    value: frozenset
    trace: list

    @property
    def steps(self) -> int:
        return len(self.trace) - 1


def lfp(f: Callable, universe, bottom=frozenset(), max_steps: int | None = None) -> Fixpoint:
    """Least fixpoint by increasing iteration from ``bottom``.

    Raises MonotonicityError when two consecutive iterates are not ordered.
    """
    x = frozenset(bottom)
    trace = [x]
    limit = max_steps if max_steps is not None else len(universe) + 2
    for _ in range(limit):
        y = frozenset(f(x))
        if not x <= y:
            raise MonotonicityError("iterates are not increasing", trace + [y])
        if y == x:
            return Fixpoint(x, trace)
        trace.append(y)
        x = y
    raise MonotonicityError("no fixpoint within the step bound", trace)


def gfp(f: Callable, universe, max_steps: int | None = None) -> Fixpoint:
    """Greatest fixpoint by decreasing iteration from ``universe``."""
    x = frozenset(universe)
    trace = [x]
    limit = max_steps if max_steps is not None else len(universe) + 2
    for _ in range(limit):
        y = frozenset(f(x))
        if not y <= x:
            raise MonotonicityError("iterates are not decreasing", trace + [y])
        if y == x:
            return Fixpoint(x, trace)
        trace.append(y)
        x = y
    raise MonotonicityError("no fixpoint within the step bound", trace)


def subsets(universe) -> Iterable[frozenset]:
    items = sorted_elems(universe)
    for k in range(len(items) + 1):
        for c in itertools.combinations(items, k):
            yield frozenset(c)


def random_subset(rng: random.Random, universe, p: float = 0.5) -> frozenset:
    return frozenset(x for x in sorted_elems(universe) if rng.random() < p)


def is_monotone(f: Callable, universe, rng: random.Random | None = None,
                exhaustive_limit: int = 10, samples: int = 1000):
    """Return a violating pair (X, Y) with X <= Y and f(X) not <= f(Y), or None.

    Exhaustive below 2**exhaustive_limit subsets, sampled above.
    """
    universe = frozenset(universe)
    if len(universe) <= exhaustive_limit:
        subs = list(subsets(universe))
        image_of = {s: frozenset(f(s)) for s in subs}
        for x in subs:
            for y in subs:
                if x <= y and not image_of[x] <= image_of[y]:
                    return x, y
        return None
    rng = rng or random.Random(0)
    for _ in range(samples):
        y = random_subset(rng, universe)
        x = random_subset(rng, y)
        if not frozenset(f(x)) <= frozenset(f(y)):
            return x, y
    return None


# serialization

def dump_rel(space: Space, r) -> str:
    lines = [f"{space.fmt(x)} -> {space.fmt(y)}" for x, y in sorted_elems(r)]
    return "\n".join(lines) + ("\n" if lines else "")


def dump_pred(space: Space, p) -> str:
    lines = [space.fmt(x) for x in sorted_elems(p)]
    return "\n".join(lines) + ("\n" if lines else "")


def load_rel(space: Space, text: str) -> frozenset:
    out = set()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        a, sep, b = line.partition("->")
        if not sep:
            raise SpaceError(f"bad relation line {line!r}")
        out.add((space.parse_state(a), space.parse_state(b)))
    return frozenset(out)


def load_pred(space: Space, text: str) -> frozenset:
    return frozenset(space.parse_state(line) for line in text.splitlines() if line.strip())
