"""Acceptance criteria 1-8, each at its stated size and time limit.

Every test prints its own result line, and the session summary lists one
PASS/FAIL line per criterion.
"""
import itertools
import random
import time

import pytest

from logicbench import corpus, deduct, proofs
from logicbench import galois as G
from logicbench import induction as I
from logicbench import lang as L
from logicbench import theories as TH
from logicbench import transformers as T
from logicbench.relsem import Semantics, angelic, interp_oracle, nonterm_empty_check, sem
from logicbench.space import BOT, Domain, Space, gfp, lfp, subsets
from gc_catalog import catalog
import induction_harness as H

ENTRIES = corpus.entries()
RANDOM_TRIPLES = 10


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False

    def check(self):
        assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def report(n, text):
    print(f"criterion {n}: {text}")


def corpus_triples(e, n=RANDOM_TRIPLES, seed=0):
    """Annotated triples, then seeded random ones; T is empty for annotated
    triples whose break condition is false."""
    out = [e.predicates(tr) for tr in e.triples]
    return out + corpus.random_triples(e, n, seed)


# 1. semantics against the execution oracle

def test_criterion_1_semantics_oracle():
    names = {e.name for e in ENTRIES}
    assert len(ENTRIES) >= 25
    assert {"cd", "bk", "loop", "nested_break", "blocking"} <= names
    with Timer(30) as t:
        bad = [e.name for e in ENTRIES
               if len(e.space) > 256 or sem(e.program, e.space) != interp_oracle(e.program, e.space)]
    assert not bad
    t.check()
    report(1, f"{len(ENTRIES)} programs, sem == oracle, {t.elapsed:.1f}s")


# 2. adjunctions

def _adjunction_violations(r, sigma, Ps, Qs):
    sb = sigma | {BOT}
    n = 0
    for P in Ps:
        for Q in Qs:
            if (T.post(r, P) <= Q) != (P <= T.pre_tilde(r, Q, sigma)):
                n += 1
            if (T.pre(r, Q) <= P) != (Q <= T.post_tilde(r, P, sb)):
                n += 1
    return n


def test_criterion_2_adjunctions():
    rng = random.Random(2)
    violations = 0
    with Timer(10) as t:
        # every relation for |S| <= 2, random ones up to 5; all P and Q
        for n in range(1, 6):
            sigma = frozenset(range(n))
            sb = sigma | {BOT}
            all_pairs = [(a, b) for a in sigma for b in sb]
            if len(all_pairs) <= 6:
                rels = [frozenset(c) for k in range(len(all_pairs) + 1)
                        for c in itertools.combinations(all_pairs, k)]
            else:
                rels = [frozenset(p for p in all_pairs if rng.random() < 0.3) for _ in range(10)]
            Ps, Qs = list(subsets(sigma)), list(subsets(sb))
            for r in rels:
                violations += _adjunction_violations(r, sigma, Ps, Qs)
        # 1000 random relations up to |S| = 8, random P and Q
        for _ in range(1000):
            n = rng.randint(1, 8)
            sigma = frozenset(range(n))
            sb = sigma | {BOT}
            r = frozenset((a, b) for a in sigma for b in sb if rng.random() < 0.3)
            Ps = [frozenset(x for x in sigma if rng.random() < 0.5) for _ in range(5)]
            Qs = [frozenset(x for x in sb if rng.random() < 0.5) for _ in range(5)]
            violations += _adjunction_violations(r, sigma, Ps, Qs)
        r = frozenset({(1, 2), (1, 3)})
        meets_fail = T.pre(r, {2}) & T.pre(r, {3}) == {1} and T.pre(r, frozenset()) == frozenset()
    assert violations == 0
    assert meets_fail
    t.check()
    report(2, f"0 violations, pre-meets counterexample reproduced, {t.elapsed:.1f}s")


# 3. Galois connections and the composed chains

def tiny_space(e):
    """The corpus program over a domain small enough for literal chains."""
    d = Domain(0, 1) if len(e.program.vars) == 1 else Domain(0, 0)
    return Space(e.program.vars, d)


def _chain_mismatches(t, sp):
    cc = G.ChainCarriers.over(sp.sigma)
    nat, ang = t.natural, angelic(t)
    bad = []
    chains = {name: ch(nat, cc) for name, ch in G.CHAINS.items()}
    # relational chains: every pair of relational predicates
    for P in cc.pre_preds:
        for Q in cc.post_preds:
            has_bot = any(v is BOT for _, v in Q)
            post_nat = T.Post(nat, P)
            direct = {
                "natural-over": post_nat <= Q,
                "natural-under": Q <= post_nat,
                "manna-pnueli": not has_bot and post_nat <= Q,
                "manna-partial": not has_bot and T.Post(ang, P) <= Q,
            }
            for name, want in direct.items():
                if ((P, Q) in chains[name]) != want:
                    bad.append((name, P, Q))
            if not has_bot:
                for name in ("manna-pnueli", "manna-partial", "natural-over", "natural-under"):
                    if TH.holds(name, t, P, Q, sp).holds != direct[name]:
                        bad.append(("theories:" + name, P, Q))
    # assertional chains: every pair of assertional predicates
    for p in subsets(sp.sigma):
        for q in subsets(sp.sigma):
            hoare = T.post(ang, p) <= q
            apt = T.post(nat, p) <= q
            if ((p, q | {BOT}) in chains["hoare"]) != hoare \
                    or TH.holds("hoare", t, p, q, sp).holds != hoare:
                bad.append(("hoare", p, q))
            if ((p, q) in chains["apt-plotkin"]) != apt or TH.holds("apt-plotkin", t, p, q, sp).holds != apt:
                bad.append(("apt-plotkin", p, q))
    return bad


def test_criterion_3_galois():
    with Timer(30) as t:
        failed = [name for name, g, src, tgt in catalog() if not G.verify_gc(g, src, tgt).ok]
        mismatches = []
        for e in ENTRIES:
            sp = tiny_space(e)
            mismatches += [(e.name,) + m for m in _chain_mismatches(sem(e.program, sp), sp)]
    assert not failed
    assert not mismatches[:5]
    t.check()
    report(3, f"{len(catalog())} connections verified, chains agree on {len(ENTRIES)} programs, "
              f"{t.elapsed:.1f}s")


# 4. taxonomy coherence

def test_criterion_4_taxonomy():
    violations = []
    for e in ENTRIES:
        t = sem(e.program, e.space)
        post_ang = lambda P: T.post(angelic(t), P)  # noqa: E731
        for P, Q, _ in corpus_triples(e):
            Qs = Q - {BOT}
            if TH.holds("manna-pnueli", t, P, Qs, e.space) and not TH.holds("hoare", t, P, Qs, e.space):
                violations.append(("mp=>hoare", e.name))
            if TH.holds("hoare", t, P, Q, e.space) and TH.holds("incorrectness", t, P, Q, e.space) \
                    and post_ang(P) != Q:
                violations.append(("exact", e.name))
    # wlp against the oracle: every outcome in Q or nonterminating, and some outcome
    rng = random.Random(4)
    for _ in range(200):
        e = rng.choice(ENTRIES)
        Q = frozenset(x for x in e.space.sigma if rng.random() < 0.5)
        o = interp_oracle(e.program, e.space)
        outs: dict = {}
        for x, y in o.natural:
            outs.setdefault(x, set()).add(y)
        direct = frozenset(x for x, ys in outs.items() if ys <= Q | {BOT})
        t = sem(e.program, e.space)
        if T.wlp(t, Q, e.space) != direct or T.wlp(t, Q, e.space) != T.wp(t, Q | {BOT}, e.space):
            violations.append(("wlp", e.name))
    # while (true) skip over three states
    loop = L.parse_program("vars x; while (true) { skip; }")
    sp = Space(("x",), Domain(0, 2))
    t = sem(loop, sp)
    for P in subsets(sp.sigma):
        for Q in subsets(sp.sigma):
            if not TH.holds("hoare", t, P, Q, sp):
                violations.append(("universal", P, Q))
            if TH.holds("manna-pnueli", t, P, Q, sp).holds != (not P):
                violations.append(("empty", P, Q))
    assert not violations
    report(4, "0 violations")


# 5. induction checkers and Park duality

def _monotone_bool(n):
    subs = list(subsets(frozenset(range(n))))
    out = []
    for bits in range(2 ** len(subs)):
        val = {X: bool(bits >> i & 1) for i, X in enumerate(subs)}
        if all(not val[X] or val[Y] for X in subs for Y in subs if X <= Y):
            out.append(val)
    return out


def _from_bits(n, parts):
    return lambda X: frozenset(i for i in range(n) if parts[i][frozenset(X)])


def _random_monotone(rng, n):
    """Monotone map whose output bits are random monotone DNFs."""
    terms = [[frozenset(rng.sample(range(n), rng.randint(0, n))) for _ in range(rng.randint(0, 3))]
             for _ in range(n)]
    return lambda X: frozenset(i for i in range(n) if any(t <= X for t in terms[i]))


def test_criterion_5_induction():
    with Timer(60) as t:
        stats = {name: H.run(name, 150, seed=5) for name in H.CHECKERS}
        dual_bad = 0
        # every monotone map for |U| <= 3
        for n in range(1, 4):
            U = frozenset(range(n))
            for parts in itertools.product(_monotone_bool(n), repeat=n):
                a, b = I.park_duality(_from_bits(n, parts), U)
                dual_bad += a != b
        # |U| = 4: every join-preserving map, and uniform random monotone maps
        U = frozenset(range(4))
        pairs = list(itertools.product(range(4), range(4)))
        for bits in range(2 ** 16):
            m = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
            a, b = I.park_duality(lambda X, m=m: T.post(m, X), U)
            dual_bad += a != b
        rng = random.Random(5)
        mb4 = _monotone_bool(4)
        for _ in range(5000):
            a, b = I.park_duality(_from_bits(4, [rng.choice(mb4) for _ in range(4)]), U)
            dual_bad += a != b
        for _ in range(3000):
            n = rng.randint(5, 6)
            a, b = I.park_duality(_random_monotone(rng, n), frozenset(range(n)))
            dual_bad += a != b
    for name, s in stats.items():
        assert s.canonical > 0 and s.canonical_rejected == 0, name
        assert s.rejected >= 100, name
        assert s.violations == 0, name
    assert dual_bad == 0
    t.check()
    detail = ", ".join(f"{n} {s.rejected}" for n, s in stats.items())
    report(5, f"canonical accepted, rejections: {detail}; duality holds; {t.elapsed:.1f}s")


# 6. deductive systems

def _random_system(rng, n):
    U = frozenset(range(n))
    pairs = [(rng.sample(sorted(U), min(n, rng.choice((0, 1, 1, 2, 2)))), rng.randrange(n))
             for _ in range(rng.randint(0, 14))]
    return deduct.RuleSystem.of(U, pairs)


def _provable(R):
    proofs_ = {}
    changed = True
    while changed:
        changed = False
        for r in R.rules:
            if r.conclusion not in proofs_ and r.premises <= set(proofs_):
                seq = [x for p in sorted(r.premises) for x in proofs_[p]] + [r.conclusion]
                if deduct.check_proof(R, seq):
                    proofs_[r.conclusion] = seq
                    changed = True
    return frozenset(proofs_)


def small_space(e, limit=6):
    k = len(e.program.vars)
    width = max(1, int(round(limit ** (1 / k) + 1e-9)))
    while width ** k > limit:
        width -= 1
    d = e.domain
    return Space(e.program.vars, Domain(d.lo, min(d.hi, d.lo + width - 1)))


def test_criterion_6_deduction():
    rng = random.Random(6)
    bad = []
    with Timer(60) as t:
        for _ in range(200):
            R = _random_system(rng, rng.randint(1, 8))
            if _provable(R) != deduct.interp(R):
                bad.append(("proofs", R))
        for _ in range(100):
            n = rng.randint(1, 5)
            F = _random_monotone(rng, n)
            U = frozenset(range(n))
            R = deduct.rules_from_operator(F, U)
            if deduct.interp(R) != lfp(F, U).value:
                bad.append(("round trip", n))
        loops = 0
        for e in ENTRIES:
            sp = small_space(e)
            engine = Semantics(sp)
            for w in L.while_loops(e.program.body):
                e_rel, bot = deduct.while_components(w, sp, engine(w.body))
                loops += 1
                if (e_rel, bot) != (engine(w).e, engine(w).bot):
                    bad.append(("while", e.name))
    assert not bad
    t.check()
    report(6, f"200 systems, 100 operators, {loops} loops; {t.elapsed:.1f}s")


# 7. derived proof systems

CHECK = {"ehl": (TH.holds_ehl, proofs.check_ehl), "prelogic": (TH.holds_prelogic, proofs.check_prelogic)}


def _mutations(rng, d, sp):
    """Derivations one row or state away from d."""
    out = []
    for _ in range(2):
        if isinstance(d, proofs.EhlDerivation):
            loops = {}
            for i, node in d.loops.items():
                rows = sorted(node.invariant, key=repr)
                flip = rng.choice(rows) if rows and rng.random() < 0.5 else None
                inv = frozenset(node.invariant - {flip}) if flip else node.invariant | {
                    (rows[0][0] if rows else (sp.states[0],), rng.choice(sorted(sp.sigma_bot, key=repr)))}
                var = node.variant
                if var is not None and rng.random() < 0.5:
                    var = proofs.StateTable({k: max(0, v + rng.choice((-1, 1))) for k, v in var.items()})
                loops[i] = proofs.EhlNode(inv, var)
            out.append(proofs.EhlDerivation(loops))
        else:
            loops = {}
            for i, node in d.loops.items():
                seq = list(node.sequence)
                k = rng.randrange(len(seq))
                seq[k] = seq[k] ^ {rng.choice(sp.states)}
                loops[i] = proofs.PreNode(seq, node.rb, node.rbot, node.j, node.jbody)
            out.append(proofs.PreDerivation(loops, d.mode))
    return out


def test_criterion_7_proof_systems():
    rng = random.Random(7)
    counts = {"valid": 0, "invalid": 0, "fuzz_accepted": 0}
    bad = []
    with Timer(60) as t:
        for e in ENTRIES:
            sp = e.space
            tr = sem(e.program, sp)
            synthesized = []
            for P, Q, Tb in corpus_triples(e, 6):
                for logic, (holds, check) in CHECK.items():
                    valid = holds(tr, P, Q, Tb, sp).holds
                    if valid:
                        counts["valid"] += 1
                        d = proofs.synth_canonical(e.program, P, Q, Tb, logic, sp)
                        if not check(e.program, P, Q, Tb, d, sp):
                            bad.append(("incomplete", e.name, logic))
                        synthesized.append((logic, d))
                    else:
                        counts["invalid"] += 1
                        try:
                            proofs.synth_canonical(e.program, P, Q, Tb, logic, sp)
                            bad.append(("synthesized invalid", e.name, logic))
                        except proofs.DerivationError:
                            pass
            # soundness: derivations made for other quadruples, and their mutations
            for P, Q, Tb in corpus.random_triples(e, 4, seed=77):
                for logic, d in synthesized[:6]:
                    holds, check = CHECK[logic]
                    for cand in [d] + _mutations(rng, d, sp):
                        if check(e.program, P, Q, Tb, cand, sp):
                            counts["fuzz_accepted"] += 1
                            if not holds(tr, P, Q, Tb, sp):
                                bad.append(("unsound", e.name, logic))
        # the countdown contract mixing termination and nontermination, from text
        e = corpus.load("cd")
        P = TH.parse_relational("true", e.space, "pre")
        Q = TH.parse_relational("(old(n) >= 0 && n == 0) || (old(n) < 0 && bot)", e.space, "post")
        cert = """while:
  INVARIANT: (old(n) >= 0 && n >= 0 && n <= old(n)) || (old(n) < 0 && (n < 0 || bot))
  VARIANT: n
"""
        d = proofs.parse_derivation(cert, e.program, e.space, "ehl")
        hand = proofs.check_ehl(e.program, P, Q, frozenset(), d, e.space)
        canon = proofs.synth_canonical(e.program, P, Q, frozenset(), "ehl", e.space)
        text = proofs.dump_derivation(canon, e.program, e.space)
        round_trip = proofs.check_ehl(e.program, P, Q, frozenset(),
                                      proofs.parse_derivation(text, e.program, e.space, "ehl"), e.space)
        pre_ok = all(proofs.check_prelogic(e.program, Pp, Qp, frozenset(),
                                           proofs.synth_canonical(e.program, Pp, Qp, frozenset(), "prelogic",
                                                                  e.space), e.space)
                     for Pp, Qp in ((e.space.parse_pred("n < 0") - {BOT}, {BOT}),
                                    (e.space.parse_pred("n >= 0") - {BOT}, e.space.parse_pred("n == 0"))))
    assert not bad, bad[:5]
    assert hand, hand.message
    assert round_trip and pre_ok
    t.check()
    report(7, f"{counts['valid']} valid quadruples proved, {counts['invalid']} invalid refused, "
              f"{counts['fuzz_accepted']} fuzzed acceptances all sound; {t.elapsed:.1f}s")


# 8. termination lemma

def test_criterion_8_termination():
    bad = []
    loops = 0
    with Timer(5) as t:
        for e in ENTRIES:
            for w in L.while_loops(e.program.body):
                loops += 1
                rep = nonterm_empty_check(w, e.space)
                step = Semantics(e.space).loop(w).step
                # states with an infinite step chain, independently of the cycle search
                live = gfp(lambda X: frozenset(x for x, y in step if y in X), e.space.sigma).value
                if not rep.agree or rep.gfp_empty != (not live):
                    bad.append(e.name)
    assert not bad
    t.check()
    report(8, f"{loops} loops agree, {t.elapsed:.1f}s")
