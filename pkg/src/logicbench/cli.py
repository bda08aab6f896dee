"""Command-line front end.

Exit status: 0 when the property holds or the derivation is accepted, 1 when
it fails (a witness is printed unless --quiet), 2 on usage, file or parse
errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import corpus, proofs, relsem
from . import lang as L
from . import theories as TH
from .space import BOT, Domain, Space, SpaceError, sorted_elems

EXTRA_LOGICS = ("ehl", "prelogic")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load_program(path: str, domain: str | None):
    """Parse a program; the domain comes from --domain, else from a
    ``# domain:`` header, else the default."""
    text = _read(path)
    prog = L.parse_program(text)
    if domain is None:
        domain = corpus.parse_entry(path, text).domain
    else:
        domain = Domain.parse(domain)
    return prog, Space(prog.vars, domain)


# output helpers

def show(space: Space, x) -> str:
    if x is BOT:
        return "BOT"
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(y, tuple) or y is BOT for y in x):
        return f"{show(space, x[0])} -> {show(space, x[1])}"
    if isinstance(x, tuple) and x and isinstance(x[0], str):
        return f"{x[0]}: {show(space, x[1])}"
    if isinstance(x, tuple) and len(x) == len(space.variables) and all(isinstance(v, int) for v in x):
        return space.fmt(x)
    if isinstance(x, tuple):
        return "(" + ", ".join(show(space, y) for y in x) + ")"
    return repr(x)


def to_json(space: Space, x):
    """States become {var: value} objects, BOT becomes null, tuples lists."""
    if x is BOT or x is None:
        return None
    if isinstance(x, tuple) and len(x) == len(space.variables) and all(isinstance(v, int) for v in x):
        return dict(zip(space.variables, x))
    if isinstance(x, (tuple, list)):
        return [to_json(space, y) for y in x]
    return x


def _rel_json(space: Space, r):
    return [to_json(space, p) for p in sorted_elems(r)]


def _emit(args, text: str, data):
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _triple_out(args, space: Space, t):
    if args.json:
        data = {"vars": list(space.variables), "domain": [space.domain.lo, space.domain.hi],
                "e": _rel_json(space, t.e), "b": _rel_json(space, t.b), "bot": _rel_json(space, t.bot)}
        print(json.dumps(data, sort_keys=True))
        return
    for name, r in (("e", t.e), ("b", t.b), ("bot", t.bot)):
        print(f"{name}: {len(r)} pairs")
        for x, y in sorted_elems(r):
            print(f"  {show(space, x)} -> {show(space, y)}")


# predicates

def _is_rel(*texts) -> bool:
    return any(t is not None and "old(" in t.replace(" ", "") for t in texts)


def parse_preds(space: Space, pre: str, post: str, br: str | None, relational: bool):
    br = "false" if br is None else br
    if relational:
        return (TH.parse_relational(pre, space, "pre"), TH.parse_relational(post, space, "post"),
                TH.parse_relational(br, space, "post"))
    P = space.parse_pred(pre) - {BOT}
    return P, space.parse_pred(post), space.parse_pred(br) - {BOT}


def _decide(logic: str, prog, space, P, Q, T):
    if logic == "ehl":
        return TH.holds_ehl(prog, P, Q, T, space)
    if logic == "prelogic":
        if TH.is_relational(P) or TH.is_relational(Q):
            raise UsageError("prelogic needs assertional predicates")
        return TH.holds_prelogic(prog, P, Q, T, space)
    return TH.holds(logic, prog, P, Q, space)


def _check_preds(args, space, logic):
    if logic in EXTRA_LOGICS:
        rel = _is_rel(args.pre, args.post, args.br)
        return parse_preds(space, args.pre, args.post, args.br, rel)
    # relational logics lift assertional predicates themselves
    rel = TH.CATALOG[logic].carrier == "relational" and _is_rel(args.pre, args.post)
    P, Q, _ = parse_preds(space, args.pre, args.post, None, rel)
    return P, Q, frozenset()


# subcommands

def cmd_sem(args) -> int:
    prog, space = load_program(args.file, args.domain)
    _triple_out(args, space, relsem.sem(prog, space))
    return 0


def cmd_oracle(args) -> int:
    prog, space = load_program(args.file, args.domain)
    _triple_out(args, space, relsem.interp_oracle(prog, space))
    return 0


def cmd_check(args) -> int:
    logic = args.logic
    if logic not in TH.CATALOG and logic not in EXTRA_LOGICS:
        raise UsageError(f"unknown logic {logic!r}; one of {', '.join(TH.catalog_names() + list(EXTRA_LOGICS))}")
    prog, space = load_program(args.file, args.domain)
    P, Q, T = _check_preds(args, space, logic)
    res = _decide(logic, prog, space, P, Q, T)
    text = f"{logic}: {'holds' if res.holds else 'fails'}"
    if not res.holds and not args.quiet:
        if res.witness is not None:
            text += f"\nwitness: {show(space, res.witness)}"
        elif res.note:
            text += f"\nreason: {res.note}"
    data = {"logic": logic, "holds": res.holds}
    if not res.holds and not args.quiet:
        data["witness"] = to_json(space, res.witness)
        data["note"] = res.note
    _emit(args, text, data)
    return 0 if res.holds else 1


def cmd_classify(args) -> int:
    prog, space = load_program(args.file, args.domain)
    rel = _is_rel(args.pre, args.post, args.br)
    P, Q, T = parse_preds(space, args.pre, args.post, args.br, rel)
    t = relsem.sem(prog, space)
    results = dict(TH.classify(t, P, Q, space))
    results["ehl"] = TH.holds_ehl(t, P, Q, T, space)
    if not rel:
        results["prelogic"] = TH.holds_prelogic(t, P, Q, T, space)
    width = max(map(len, results))
    lines = []
    for name, r in results.items():
        line = f"{name:<{width}}  {'holds' if r.holds else 'fails'}"
        if not r.holds and not args.quiet and r.witness is not None:
            line += f"  witness {show(space, r.witness)}"
        lines.append(line)
    data = {name: {"holds": r.holds, **({} if r.holds or args.quiet else {"witness": to_json(space, r.witness)})}
            for name, r in results.items()}
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_prove(args) -> int:
    prog, space = load_program(args.file, args.domain)
    rel = _is_rel(args.pre, args.post, args.br)
    if rel and args.logic == "prelogic":
        raise UsageError("prelogic needs assertional predicates")
    P, Q, T = parse_preds(space, args.pre, args.post, args.br, rel)
    if args.synth:
        try:
            d = proofs.synth_canonical(prog, P, Q, T, args.logic, space)
        except proofs.DerivationError as e:
            _emit(args, f"no derivation: {e}", {"accepted": False, "reason": str(e)})
            return 1
        text = proofs.dump_derivation(d, prog, space)
        _emit(args, text.rstrip("\n"), {"accepted": True, "derivation": text})
        return 0
    if args.cert is None:
        raise UsageError("prove needs --cert FILE or --synth")
    d = proofs.parse_derivation(_read(args.cert), prog, space, args.logic)
    check = proofs.check_ehl if args.logic == "ehl" else proofs.check_prelogic
    v = check(prog, P, Q, T, d, space)
    if v.ok:
        _emit(args, "accepted", {"accepted": True})
        return 0
    text = "rejected" if args.quiet else f"rejected: {v.node}: {v.condition}"
    if not args.quiet and v.witness is not None:
        text += f" at {show(space, v.witness)}"
    data = {"accepted": False}
    if not args.quiet:
        data.update(node=v.node, condition=v.condition, witness=to_json(space, v.witness))
    _emit(args, text, data)
    return 1


def cmd_corpus(args) -> int:
    """Semantics against the oracle on every bundled program, plus the
    classification of seeded random triples."""
    failed = 0
    rows = []
    for e in corpus.entries():
        t = relsem.sem(e.program, e.space)
        same = t == relsem.interp_oracle(e.program, e.space)
        failed += not same
        counts: dict = {}
        for P, Q, _ in corpus.random_triples(e, args.triples, args.seed):
            for name, r in TH.classify(t, P, Q, e.space).items():
                counts[name] = counts.get(name, 0) + r.holds
        rows.append({"name": e.name, "states": len(e.space), "oracle_agrees": same, "holds": counts})
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        for r in rows:
            print(f"{r['name']:<16} states={r['states']:<4} oracle={'ok' if r['oracle_agrees'] else 'MISMATCH'}"
                  f"  hoare={r['holds'].get('hoare', 0)}/{args.triples}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", metavar="LO..HI",
                        help="value range of every variable (default: the file's header, else -8..7)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    common.add_argument("--quiet", action="store_true", help="omit witnesses")

    p = argparse.ArgumentParser(prog="logicbench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("sem", parents=[common], help="print the relational semantics")
    s.add_argument("file")
    s.set_defaults(fn=cmd_sem)

    s = sub.add_parser("oracle", parents=[common], help="print the semantics found by exploring executions")
    s.add_argument("file")
    s.set_defaults(fn=cmd_oracle)

    def preds(s, post_required=True):
        s.add_argument("--pre", required=True)
        s.add_argument("--post", required=post_required)
        s.add_argument("--br", help="break condition (default false)")

    s = sub.add_parser("classify", parents=[common], help="decide every logic on one triple")
    s.add_argument("file")
    preds(s)
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("check", parents=[common], help="decide one logic")
    s.add_argument("logic")
    s.add_argument("file")
    preds(s)
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("prove", parents=[common], help="check or synthesize a derivation")
    s.add_argument("file")
    s.add_argument("--logic", choices=EXTRA_LOGICS, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--cert", metavar="CERTFILE")
    g.add_argument("--synth", action="store_true", help="print the canonical derivation")
    preds(s)
    s.set_defaults(fn=cmd_prove)

    s = sub.add_parser("corpus", parents=[common], help="run the bundled corpus")
    s.add_argument("--triples", type=int, default=20, help="random triples per program")
    s.set_defaults(fn=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, L.LangError, SpaceError, TH.CarrierError, proofs.DerivationError) as e:
        print(f"logicbench: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
