"""Seeded random formulas, sequents and models for sweeps and tests."""

from __future__ import annotations

import random
from typing import Callable

from .functor import (Const, Exp, FunctorExpr, Id, Low, Prod, Sum, Up, apply_obj,
                      normalize)
from .logic import Formula, Language, Sequent
from .model import Coalgebra, Model, upset_poset, valuation_from_sets
from .poset import FinPoset, Fn, Inj, posets_up_to_iso


def random_element(rng: random.Random, f: FunctorExpr, leaf: Callable, max_width: int = 2):
    """A (not yet normalized) element with leaves drawn from ``leaf()``.

    Exp tables are built constant so they are monotone for any leaf order."""
    if isinstance(f, Id):
        return leaf()
    if isinstance(f, Const):
        return rng.choice(f.poset.elements)
    if isinstance(f, Prod):
        return (random_element(rng, f.left, leaf, max_width), random_element(rng, f.right, leaf, max_width))
    if isinstance(f, Sum):
        side = rng.randrange(2)
        return Inj(side, random_element(rng, f.left if side == 0 else f.right, leaf, max_width))
    if isinstance(f, Exp):
        v = random_element(rng, f.body, leaf, max_width)
        return Fn(tuple((e, v) for e in f.index.elements))
    if isinstance(f, (Low, Up)):
        return frozenset(random_element(rng, f.body, leaf, max_width)
                         for _ in range(rng.randint(0, max_width)))
    raise TypeError(f)


def random_formula(rng: random.Random, lang: Language, depth: int, max_width: int = 2) -> Formula:
    atoms = list(lang.atoms.elements)

    def base():
        r = rng.random()
        if r < 0.5 or not atoms:
            return rng.choice([lang.atom(p) for p in atoms] + [lang.top, lang.bot]) if atoms else lang.top
        picks = [lang.atom(rng.choice(atoms)) for _ in range(2)]
        return lang.conj(picks) if r < 0.75 else lang.disj(picks)

    if depth == 0 or rng.random() < 0.25:
        return base()
    r = rng.random()
    if r < 0.7:
        payload = normalize(lang.dual, random_element(
            rng, lang.dual, lambda: random_formula(rng, lang, depth - 1, max_width), max_width), lang.leq)
        return lang.nabla(payload) if r < 0.4 else lang.delta(payload)
    parts = [random_formula(rng, lang, depth, max_width) if rng.random() < 0.3 else base()
             for _ in range(2)]
    return lang.conj(parts) if r < 0.85 else lang.disj(parts)


def random_sequent(rng: random.Random, lang: Language, depth: int = 2, max_width: int = 2) -> Sequent:
    lhs = [random_formula(rng, lang, depth, max_width) for _ in range(rng.randint(1, 2))]
    rhs = [random_formula(rng, lang, depth, max_width) for _ in range(rng.randint(1, 2))]
    return lang.sequent(lhs, rhs)


def random_model(rng: random.Random, functor: FunctorExpr, atoms: FinPoset, max_states: int = 4) -> Model:
    """Uniform over carriers up to iso, then structure, then valuation."""
    n = rng.randint(1, max_states)
    carrier = rng.choice(posets_up_to_iso(n))
    tx = apply_obj(functor, carrier)
    table = _random_monotone(rng, carrier, tx)
    vals = upset_poset(carrier)
    val = _random_monotone(rng, atoms, vals)
    truths = {p: val[p] for p in atoms}
    co = Coalgebra(functor, carrier, table)
    return Model(co, atoms, valuation_from_sets(atoms, carrier, truths))


def _random_monotone(rng, dom: FinPoset, cod: FinPoset) -> dict:
    """Random monotone map, assigning along a linear extension (with restarts
    when the lower bounds chosen so far have no common upper bound)."""
    while True:
        table: dict = {}
        for e in dom.linear_extension():
            lower = [table[d] for d in dom.down(e) if d != e]
            choices = [v for v in cod.elements if all(cod.leq(w, v) for w in lower)]
            if not choices:
                break
            table[e] = rng.choice(choices)
        else:
            return table
