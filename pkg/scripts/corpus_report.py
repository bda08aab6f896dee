"""Per-program report: state count, semantics vs. oracle, pair counts and timings."""
import argparse
import time

from logicbench import corpus
from logicbench.relsem import interp_oracle, sem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="corpus programs (default: all)")
    args = ap.parse_args()
    entries = [corpus.load(n) for n in args.names] if args.names else corpus.entries()
    print(f"{'program':<16}{'states':>7}{'e':>7}{'b':>5}{'bot':>6}  oracle   sem ms  oracle ms")
    mismatches = 0
    for e in entries:
        t0 = time.perf_counter()
        t = sem(e.program, e.space)
        t1 = time.perf_counter()
        o = interp_oracle(e.program, e.space)
        t2 = time.perf_counter()
        same = t == o
        mismatches += not same
        print(f"{e.name:<16}{len(e.space):>7}{len(t.e):>7}{len(t.b):>5}{len(t.bot):>6}  "
              f"{'agree' if same else 'DIFFER':<8}{(t1 - t0) * 1e3:>7.1f}{(t2 - t1) * 1e3:>10.1f}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
