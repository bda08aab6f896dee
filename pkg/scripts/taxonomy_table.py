"""Which catalog logics hold for every annotated corpus triple."""
import argparse

from logicbench import corpus
from logicbench import theories as TH
from logicbench.relsem import sem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", type=int, default=0, help="also classify N seeded random triples per program")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    totals: dict = {}
    seen = 0
    for e in corpus.entries():
        t = sem(e.program, e.space)
        triples = [(tr, e.predicates(tr)) for tr in e.triples]
        triples += [(None, x) for x in corpus.random_triples(e, args.random, args.seed)]
        for tr, (P, Q, T) in triples:
            res = TH.classify(t, P, Q, e.space)
            res["ehl"] = TH.holds_ehl(t, P, Q, T, e.space)
            res["prelogic"] = TH.holds_prelogic(t, P, Q, T, e.space)
            seen += 1
            for name, r in res.items():
                totals[name] = totals.get(name, 0) + r.holds
            if tr is not None:
                held = ", ".join(n for n, r in res.items() if r.holds) or "-"
                print(f"{e.name}: {{{tr[0]}}} {{{tr[1]}}} br {{{tr[2]}}}\n    {held}")
    print(f"\nholds out of {seen} triples")
    for name, n in totals.items():
        print(f"  {name:<32}{n:>5}")


if __name__ == "__main__":
    main()
