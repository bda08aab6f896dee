import pytest

from logicbench import corpus
from logicbench import theories as TH
from logicbench.relsem import interp_oracle, sem
from logicbench.space import BOT, Domain

NAMES = corpus.names()


def test_corpus_is_bundled():
    assert len(NAMES) >= 20
    assert {"cd", "bk", "loop"} <= set(NAMES)


@pytest.mark.parametrize("name", NAMES)
def test_entry_parses(name):
    e = corpus.load(name)
    assert e.program.vars
    assert len(e.space) <= e.domain.cap
    for tr in e.triples:
        P, Q, T = e.predicates(tr)
        assert BOT not in P and BOT not in T


def test_headers():
    e = corpus.parse_entry("x", "# domain: 0..2\n# triple: x == 0 || x == 1 | true | false\nvars x; skip;")
    assert e.domain == Domain(0, 2)
    assert e.triples == (("x == 0 || x == 1", "true", "false"),)
    with pytest.raises(ValueError):
        corpus.parse_entry("x", "# triple: true | true\nvars x; skip;")


def test_annotated_countdown_triples():
    e = corpus.load("cd")
    t = sem(e.program, e.space)
    P, Q, _ = e.predicates(e.triples[0])
    assert TH.holds("hoare", t, P, Q, e.space)
    P, Q, T = e.predicates(e.triples[1])
    assert TH.holds_prelogic(t, P, Q, T, e.space)


def test_random_triples_deterministic():
    e = corpus.load("cd")
    assert corpus.random_triples(e, 5, 3) == corpus.random_triples(e, 5, 3)
    assert corpus.random_triples(e, 5, 3) != corpus.random_triples(e, 5, 4)


@pytest.mark.parametrize("name", ["cd", "bk", "nested_break", "random_walk", "gcd"])
def test_sem_matches_oracle(name):
    e = corpus.load(name)
    assert sem(e.program, e.space) == interp_oracle(e.program, e.space)
