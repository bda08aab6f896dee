"""Synthesize, write out and re-check canonical derivations for the annotated
corpus triples, in both proof systems."""
import argparse
import pathlib

from logicbench import corpus, proofs
from logicbench import theories as TH

CHECK = {"ehl": (TH.holds_ehl, proofs.check_ehl),
         "prelogic": (TH.holds_prelogic, proofs.check_prelogic)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=pathlib.Path, help="directory for the derivation files")
    args = ap.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for e in corpus.entries():
        for k, tr in enumerate(e.triples):
            P, Q, T = e.predicates(tr)
            for logic, (holds, check) in CHECK.items():
                if not holds(e.program, P, Q, T, e.space):
                    print(f"{e.name}#{k} {logic}: not valid")
                    continue
                d = proofs.synth_canonical(e.program, P, Q, T, logic, e.space)
                text = proofs.dump_derivation(d, e.program, e.space)
                again = proofs.parse_derivation(text, e.program, e.space, logic)
                v = check(e.program, P, Q, T, again, e.space)
                failures += not v
                print(f"{e.name}#{k} {logic}: {v.message}")
                if args.out:
                    (args.out / f"{e.name}.{k}.{logic}.cert").write_text(text)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
