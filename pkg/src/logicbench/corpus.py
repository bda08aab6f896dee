"""The bundled program corpus.

Each program file starts with comment headers: ``# domain: LO..HI`` and any
number of ``# triple: pre | post | br`` lines with assertional predicates (the
separator is a bar with spaces around it).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from importlib import resources

from . import lang as L
from .space import BOT, Domain, Space, random_subset


@dataclass(frozen=True)
class Entry:
    name: str
    text: str
    domain: Domain
    triples: tuple  # (pre, post, br) predicate texts

    @cached_property
    def program(self) -> L.Program:
        return L.parse_program(self.text)

    @cached_property
    def space(self) -> Space:
        return Space(self.program.vars, self.domain)

    def predicates(self, triple) -> tuple:
        """The (P, Q, T) sets of an annotated triple."""
        P, Q, T = (self.space.parse_pred(x) for x in triple)
        return P - {BOT}, Q, T - {BOT}


def _dir():
    return resources.files("logicbench") / "programs"


def names() -> list:
    return sorted(p.name[:-5] for p in _dir().iterdir() if p.name.endswith(".prog"))


def parse_entry(name: str, text: str) -> Entry:
    domain, triples = Domain(), []
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("#"):
            continue
        key, sep, val = line[1:].partition(":")
        key = key.strip()
        if not sep:
            continue
        if key == "domain":
            domain = Domain.parse(val)
        elif key == "triple":
            parts = [p.strip() for p in re.split(r"\s\|\s", val)]
            if len(parts) != 3:
                raise ValueError(f"{name}: triple needs 'pre | post | br'")
            triples.append(tuple(parts))
    return Entry(name, text, domain, tuple(triples))


def load(name: str) -> Entry:
    return parse_entry(name, (_dir() / f"{name}.prog").read_text())


def entries() -> list:
    return [load(n) for n in names()]


def random_triples(entry: Entry, n: int, seed: int = 0) -> list:
    """n seeded random (P, Q, T) triples over the entry's space; Q may contain BOT."""
    rng = random.Random(f"{entry.name}:{seed}")
    sp = entry.space
    out = []
    for _ in range(n):
        P = random_subset(rng, sp.sigma, rng.choice((0.2, 0.5, 0.8)))
        Q = random_subset(rng, sp.sigma_bot, rng.choice((0.3, 0.6, 0.9)))
        T = random_subset(rng, sp.sigma, rng.choice((0.3, 0.7)))
        out.append((P, Q, T))
    return out
