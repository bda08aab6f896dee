import random

import pytest
from hypothesis import given, settings, strategies as st

from logicbench import lang as L
from logicbench import proofs as PF
from logicbench import theories as TH
from logicbench.relsem import sem
from logicbench.space import BOT, Domain, Space, random_subset
from logicbench.transformers import post
from strategies import programs

CD = L.parse_program("vars n; while (n != 0) { n = n - 1; }")
SP = Space(("n",), Domain(-2, 3))
NONE = frozenset()


def states(*ns):
    return frozenset((n,) for n in ns)


def ehl(inv, variant=None, **kw):
    return PF.EhlDerivation({0: PF.EhlNode(inv, variant, **kw)})


def test_ehl_countdown_total():
    inv = lambda o, v: v is not BOT and 0 <= v[0] <= o[0] <= 3  # noqa: E731
    d = ehl(inv, lambda o, v: v[0])
    assert PF.check_ehl(CD, states(0, 1, 2, 3), states(0), NONE, d, SP)


MIXED_Q = "(old(n) >= 0 && n == 0) || (old(n) < 0 && bot)"


def mixed_inv(o, v):
    if o[0] >= 0:
        return v is not BOT and 0 <= v[0] <= o[0]
    return v is BOT or v[0] < 0


def test_ehl_mixed_post_needs_variant_on_terminating_rows():
    P = TH.parse_relational("true", SP, "pre")
    Q = TH.parse_relational(MIXED_Q, SP, "post")
    v = PF.check_ehl(CD, P, Q, NONE, ehl(mixed_inv), SP)
    assert not v and "variant required" in v.condition
    d = ehl(mixed_inv, lambda o, v: v[0] if o[0] >= 0 else 0)
    assert PF.check_ehl(CD, P, Q, NONE, d, SP)


def test_ehl_rejects_nontermination_without_bot():
    d = ehl(lambda o, v: True, lambda o, v: abs(v[0]))
    v = PF.check_ehl(CD, SP.sigma, states(0), NONE, d, SP)
    assert not v
    with pytest.raises(PF.DerivationError):
        PF.synth_canonical(CD, SP.sigma, states(0), NONE, "ehl", SP)


def test_ehl_degenerate_statements():
    rng = random.Random(0)
    for _ in range(20):
        P = random_subset(rng, SP.sigma)
        assert PF.check_ehl(L.Skip(), P, P, NONE, PF.EhlDerivation(), SP)
        assert PF.check_ehl(L.Break(), P, NONE, P, PF.EhlDerivation(), SP)


def test_prelogic_countdown():
    seq = [states(*range(k)) for k in range(5)]
    d = PF.PreDerivation({0: PF.PreNode(seq, NONE, NONE)})
    assert PF.check_prelogic(CD, states(0, 1, 2, 3), states(0), NONE, d, SP)
    J = states(-1, -2)
    d = PF.PreDerivation({0: PF.PreNode([NONE], j=J)})
    assert PF.check_prelogic(CD, J, {BOT}, NONE, d, SP)
    v = PF.check_prelogic(CD, J, states(0), NONE, d, SP)
    assert not v and "BOT" in v.condition


def test_prelogic_sequence_must_start_empty_and_increase():
    d = PF.PreDerivation({0: PF.PreNode([states(0), states(0, 1)])})
    assert not PF.check_prelogic(CD, states(0), states(0), NONE, d, SP)
    d = PF.PreDerivation({0: PF.PreNode([NONE, states(0, 1), states(0)])})
    assert not PF.check_prelogic(CD, states(0), states(0), NONE, d, SP)


def test_prelogic_break_axiom():
    prog = L.parse_program("vars x; while (true) { break; }")
    sp = Space(("x",), Domain(0, 1))
    # no certificate needed to conclude anything from the empty precondition
    assert PF.check_prelogic(prog, NONE, NONE, NONE, PF.PreDerivation({0: PF.PreNode([NONE])}), sp)


def test_derivation_text_round_trip():
    P = TH.parse_relational("true", SP, "pre")
    Q = TH.parse_relational(MIXED_Q, SP, "post")
    d = PF.synth_canonical(CD, P, Q, NONE, "ehl", SP)
    text = PF.dump_derivation(d, CD, SP)
    assert text.startswith("while:\n  INVARIANT: [")
    assert PF.check_ehl(CD, P, Q, NONE, PF.parse_derivation(text, CD, SP, "ehl"), SP)
    J = states(-1, -2)
    d = PF.synth_canonical(CD, J, {BOT}, NONE, "prelogic", SP)
    text = PF.dump_derivation(d, CD, SP)
    assert PF.check_prelogic(CD, J, {BOT}, NONE, PF.parse_derivation(text, CD, SP, "prelogic"), SP)


def test_derivation_text_with_predicates():
    text = """while:
  INVARIANT: n >= 0 && n <= old(n)
  VARIANT: n
"""
    d = PF.parse_derivation(text, CD, SP, "ehl")
    assert PF.check_ehl(CD, states(0, 1, 2, 3), states(0), NONE, d, SP)


@pytest.mark.parametrize("text", [
    "INVARIANT: true\n",  # section outside a loop entry
    "while:\n  VARIANT: n\n",  # no invariant
    "while:\n  INVARIANT: true\nwhile:\n  INVARIANT: true\n",  # one loop too many
    "while:\n  INVARIANT: n >=\n",
    "while:\n  SEQUENCE:\n    0: []\n",  # pre-logic section in an EHL derivation
])
def test_malformed_derivations(text):
    with pytest.raises(PF.DerivationError):
        PF.parse_derivation(text, CD, SP, "ehl")


def triples(sp, rng, n):
    for _ in range(n):
        yield (random_subset(rng, sp.sigma), random_subset(rng, sp.sigma_bot, 0.7),
               random_subset(rng, sp.sigma, 0.7))


CHECK = {"ehl": (TH.holds_ehl, PF.check_ehl), "prelogic": (TH.holds_prelogic, PF.check_prelogic)}


@settings(max_examples=40)
@given(programs(("x", "y")), st.integers(0, 10 ** 6))
def test_synthesis_complete_and_checks_sound(p, seed):
    sp = Space(p.vars, Domain(0, 1))
    rng = random.Random(seed)
    t = sem(p, sp)
    for P, Q, T in triples(sp, rng, 4):
        for logic, (holds, check) in CHECK.items():
            valid = holds(t, P, Q, T, sp).holds
            if valid:
                d = PF.synth_canonical(p, P, Q, T, logic, sp)
                assert check(p, P, Q, T, d, sp), logic
            else:
                with pytest.raises(PF.DerivationError):
                    PF.synth_canonical(p, P, Q, T, logic, sp)
            # a derivation built for another quadruple must not prove an invalid one
            P2 = random_subset(rng, sp.sigma)
            Q2, T2 = (post(t.e | t.bot, P2), post(t.b, P2)) if logic == "ehl" else (Q, T)
            try:
                other = PF.synth_canonical(p, P2, Q2, T2, logic, sp)
            except PF.DerivationError:
                continue
            if check(p, P, Q, T, other, sp):
                assert valid, logic
