"""Fuzzing harness for the fixpoint induction checkers.

For each checker: random monotone functions and properties, the canonical
certificate (must be accepted whenever the conclusion holds) and fuzzed
certificates. Every acceptance is checked against the conclusion computed
directly from the fixpoints.
"""
import random
from dataclasses import dataclass

from logicbench import induction as I
from logicbench.space import gfp, lfp, subsets
from logicbench.transformers import post, pre, pre_tilde

U = frozenset(range(5))


def rset(rng, universe=U, p=0.5):
    return frozenset(x for x in sorted(universe) if rng.random() < p)


def rule_op(rng):
    """Consequence operator of a random rule system: monotone, joins not preserved."""
    rules = [(rset(rng, p=0.25), rng.choice(sorted(U))) for _ in range(rng.randint(1, 8))]
    return lambda X: frozenset(c for P, c in rules if P <= X)


def join_op(rng):
    seeds = rset(rng, p=0.3)
    m = frozenset((a, b) for a in U for b in U if rng.random() < 0.25)
    return lambda X: seeds | post(m, X)


def meet_op(rng):
    keep = rset(rng, p=0.8)
    m = frozenset((a, b) for a in U for b in U if rng.random() < 0.25)
    return lambda X: keep & pre_tilde(m, X, U)


def infinite_from(r, p):
    """Some infinite r-chain starts in p: p reaches a state of the greatest
    fixpoint of pre(r)."""
    live = gfp(lambda X: pre(r, X), frozenset(x for pair in r for x in pair) | frozenset(p)).value
    reach = lfp(lambda X: frozenset(p) | post(r, X), U | frozenset(p)).value
    return bool(reach & live)


def mutate_set(rng, X):
    return X ^ frozenset({rng.choice(sorted(U))})


def fuzz_variant(rng, v):
    table = {}

    def f(x):
        if x not in table:
            base = I.nu(v, x) if v is not None else rng.randint(0, 6)
            table[x] = max(-1, base + rng.choice((-1, 0, 0, 1)))
        return table[x]
    return f


@dataclass
class Stats:
    canonical: int = 0  # canonical certificates of true conclusions, all accepted
    canonical_rejected: int = 0
    rejected: int = 0
    accepted_fuzz: int = 0
    violations: int = 0
    unprovable: int = 0  # true conclusions no certificate of the principle proves


def _instances(name, rng):
    """(check(cert), conclusion, canonical-or-None, fuzzed certificates)."""
    if name == "park":
        f = rule_op(rng)
        top = lfp(f, U).value
        p = top | rset(rng, p=0.3) if rng.random() < 0.6 else rset(rng)
        canon = I.canonical_park(f, U)
        fuzz = [I.ParkCert(mutate_set(rng, canon.invariant)), I.ParkCert(rset(rng))]
        return (lambda c: I.check_park(f, p, c, U), top <= p, canon, fuzz)
    if name == "under_seq":
        f = rule_op(rng)
        top = lfp(f, U).value
        p = rset(rng, top) if rng.random() < 0.6 else rset(rng, p=0.4)
        canon = I.canonical_seq(f, U)
        seq = canon.sequence
        fuzz = [I.SeqCert([frozenset()] + [mutate_set(rng, x) for x in seq[1:]]),
                I.SeqCert([frozenset()] + sorted((rset(rng) for _ in range(3)), key=len)),
                I.SeqCert(seq[:-1])]
        return (lambda c: I.check_under_seq(f, p, c, U), p <= top, canon, fuzz)
    if name == "under_variant":
        f = rule_op(rng)
        top = lfp(f, U).value
        p = rset(rng, top) if rng.random() < 0.6 else rset(rng, p=0.4)
        canon = I.canonical_under_variant(f, p, U)
        seq = canon.sequence
        fuzz = [I.VariantCert(frozenset(), fuzz_variant(rng, canon.variant), seq),
                I.VariantCert(frozenset(), fuzz_variant(rng, None), seq[:max(1, len(seq) - 1)]),
                I.VariantCert(frozenset(), canon.variant,
                              [frozenset()] + [mutate_set(rng, x) for x in seq[1:]])]
        return (lambda c: I.check_under_variant(f, p, c, U), p <= top, canon, fuzz)
    if name == "void_lfp":
        f = join_op(rng)
        top = lfp(f, U).value
        q = rset(rng, U - top) if rng.random() < 0.6 else rset(rng, p=0.3)
        canon = I.canonical_void_lfp(f, U)
        fuzz = [I.VariantCert(mutate_set(rng, canon.invariant), canon.variant),
                I.VariantCert(canon.invariant, fuzz_variant(rng, canon.variant)),
                I.VariantCert(rset(rng), fuzz_variant(rng, None))]
        return (lambda c: I.check_void_lfp(f, q, c, U), not top & q, canon, fuzz)
    if name == "void_gfp":
        f = meet_op(rng)
        g = gfp(f, U).value
        q = rset(rng, U - g) if rng.random() < 0.6 else rset(rng, p=0.3)
        canon = I.canonical_void_gfp(f, U)
        fuzz = [I.VariantCert(mutate_set(rng, canon.invariant), canon.variant),
                I.VariantCert(canon.invariant, fuzz_variant(rng, canon.variant)),
                I.VariantCert(rset(rng), fuzz_variant(rng, None))]
        return (lambda c: I.check_void_gfp(f, q, c, U), not g & q, canon, fuzz)
    if name == "gfp_nonempty":
        f = meet_op(rng) if rng.random() < 0.5 else rule_op(rng)
        g = gfp(f, U).value
        p = (frozenset({rng.choice(sorted(g))}) | rset(rng, p=0.2)) if g and rng.random() < 0.6 \
            else rset(rng, p=0.3)
        canon = I.canonical_gfp_chain(f, U)
        fuzz = [[U] + [mutate_set(rng, x) for x in canon[1:]],
                [U] + sorted((rset(rng) for _ in range(3)), key=len, reverse=True),
                canon[:-1] or [U]]
        return (lambda c: I.check_gfp_nonempty(f, p, c, U), bool(g & p), canon, fuzz)
    if name == "image_over":
        F = rule_op(rng)
        h = {x: rng.randrange(3) for x in U}
        alpha = lambda X: frozenset(h[x] for x in X)  # noqa: E731
        A = frozenset(range(3))
        target = alpha(lfp(F, U).value)
        p = target | rset(rng, A, 0.3) if rng.random() < 0.6 else rset(rng, A)
        canon = I.canonical_image_over(F, alpha, U)
        fuzz = [canon ^ frozenset({rng.randrange(3)}), rset(rng, A), rset(rng, A) | canon]
        check = lambda c: I.check_image_over(F, alpha, p, c, U)  # noqa: E731
        if target <= p and not canon <= p:
            # the principle cannot prove this bound: confirm no certificate exists
            assert not any(check(c) for c in subsets(A))
            canon = None
        return (check, target <= p, canon, fuzz)
    if name == "turing_floyd":
        r = frozenset((a, b) for a in U for b in U if rng.random() < 0.15)
        if rng.random() < 0.5:  # mostly acyclic: keep only descending steps
            r = frozenset((a, b) for a, b in r if a > b)
        p = rset(rng, p=0.4)
        bad = infinite_from(r, p)
        canon = None if bad else I.canonical_turing_floyd(r, p)
        base = canon or I.VariantCert(U, {x: x for x in U})
        fuzz = [I.VariantCert(mutate_set(rng, base.invariant), base.variant),
                I.VariantCert(base.invariant, {x: rng.randint(0, 5) for x in U}),
                I.VariantCert(U, {x: 4 - x for x in U})]
        return (lambda c: I.check_turing_floyd(r, p, c), not bad, canon, fuzz)
    raise ValueError(name)


CHECKERS = ("park", "under_seq", "under_variant", "void_lfp", "void_gfp", "gfp_nonempty",
            "image_over", "turing_floyd")


def run(name, trials, seed=0) -> Stats:
    rng = random.Random(f"{name}:{seed}")
    st = Stats()
    for _ in range(trials):
        check, conclusion, canon, fuzz = _instances(name, rng)
        if conclusion and canon is None and name == "image_over":
            st.unprovable += 1
        if conclusion and canon is not None:
            st.canonical += 1
            if not check(canon):
                st.canonical_rejected += 1
        for c in fuzz:
            v = check(c)
            if v:
                st.accepted_fuzz += 1
                if not conclusion:
                    st.violations += 1
            else:
                st.rejected += 1
    return st
