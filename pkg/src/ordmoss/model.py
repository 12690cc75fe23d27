"""Coalgebras, valuations, models, and the satisfaction relation."""

from __future__ import annotations

from itertools import islice
from typing import Iterable, Iterator, Mapping

from .functor import (FunctorExpr, apply_obj, check_element, elem_leq, lift_holds,
                      normalize, normalize_dual)
from .logic import And, Atom, Delta, Formula, Language, Nabla, Or, language
from .poset import FinPoset, monotone_tables, posets_up_to_iso
from .relation import MonotoneRel


class ModelError(ValueError):
    pass


class Coalgebra:
    """A monotone map c: X -> T(X), given as a dict over the carrier."""

    def __init__(self, functor: FunctorExpr, carrier: FinPoset, structure: Mapping, check: bool = True):
        self.functor = normalize_dual(functor)
        self.carrier = carrier
        self.structure = dict(structure)
        if check:
            lq = carrier.leq
            for x in carrier:
                if x not in self.structure:
                    raise ModelError(f"no structure given for state {x!r}")
                el = normalize(self.functor, self.structure[x], lq)
                if el != self.structure[x]:
                    raise ModelError(f"structure at {x!r} is not in canonical form")
                why = check_element(self.functor, el, lambda s: s in carrier, lq)
                if why:
                    raise ModelError(f"structure at {x!r}: {why}")
            for x in carrier:
                for y in carrier.up(x):
                    if not elem_leq(self.functor, self.structure[x], self.structure[y], lq):
                        raise ModelError(f"structure is not monotone at {x!r} <= {y!r}")

    def __call__(self, x):
        return self.structure[x]

    def __eq__(self, other):
        return (isinstance(other, Coalgebra) and self.functor == other.functor
                and self.carrier == other.carrier and self.structure == other.structure)

    def __hash__(self):
        return hash((self.functor, self.carrier, frozenset(self.structure.items())))


def valuation_from_sets(atoms: FinPoset, carrier: FinPoset, truths: Mapping) -> MonotoneRel:
    """Close per-atom state sets upward in states and along the atom order."""
    pairs = set()
    for p, states in truths.items():
        if p not in atoms:
            raise ModelError(f"unknown atom {p!r}")
        for s in states:
            if s not in carrier:
                raise ModelError(f"unknown state {s!r}")
            for q in atoms.up(p):
                for t in carrier.up(s):
                    pairs.add((t, q))
    return MonotoneRel(atoms, carrier.opposite(), pairs, check=False)


class Model:
    """Coalgebra plus a valuation At -|-> op(X), optionally pointed."""

    def __init__(self, coalgebra: Coalgebra, atoms: FinPoset, valuation: MonotoneRel, point=None):
        self.coalgebra = coalgebra
        self.atoms = atoms
        if valuation.src != atoms or valuation.tgt != coalgebra.carrier.opposite():
            raise ModelError("valuation carriers do not match the model")
        # revalidate monotonicity; a bad valuation is rejected here
        self.valuation = MonotoneRel(valuation.src, valuation.tgt, valuation.pairs)
        if point is not None and point not in coalgebra.carrier:
            raise ModelError(f"unknown point {point!r}")
        self.point = point
        self.lang: Language = language(atoms, coalgebra.functor)
        self._sat: dict = {}

    @staticmethod
    def build(functor, carrier, structure, atoms, truths, point=None, check=True) -> "Model":
        co = Coalgebra(functor, carrier, structure, check=check)
        return Model(co, atoms, valuation_from_sets(atoms, carrier, truths), point)

    @property
    def carrier(self) -> FinPoset:
        return self.coalgebra.carrier

    @property
    def functor(self) -> FunctorExpr:
        return self.coalgebra.functor

    def states(self):
        return self.coalgebra.carrier.elements

    def truths(self) -> dict:
        out = {p: set() for p in self.atoms}
        for x, p in self.valuation.pairs:
            out[p].add(x)
        return out

    def atom_holds(self, x, p) -> bool:
        return (x, p) in self.valuation.pairs

    def satisfies(self, x, a: Formula) -> bool:
        key = (x, a)
        r = self._sat.get(key)
        if r is not None:
            return r
        if isinstance(a, Atom):
            r = (x, a.name) in self.valuation.pairs
        elif isinstance(a, And):
            r = all(self.satisfies(x, b) for b in a.gens)
        elif isinstance(a, Or):
            r = any(self.satisfies(x, b) for b in a.gens)
        elif isinstance(a, Nabla):
            # c(x) is read as an element of the dual functor over op(X)
            r = lift_holds(self.lang.dual, self.satisfies, self.coalgebra(x), a.payload)
        elif isinstance(a, Delta):
            r = not lift_holds(self.lang.functor, lambda s, b: not self.satisfies(s, b),
                               self.coalgebra(x), a.payload)
        else:
            raise ModelError(f"not a formula: {a!r}")
        self._sat[key] = r
        return r

    def extension(self, a: Formula) -> frozenset:
        return frozenset(x for x in self.states() if self.satisfies(x, a))

    def refutes(self, x, lhs: Iterable[Formula], rhs: Iterable[Formula]) -> bool:
        return all(self.satisfies(x, a) for a in lhs) and not any(self.satisfies(x, b) for b in rhs)


def evaluate(m: Model, x, a: Formula) -> bool:
    if m.lang.functor != normalize_dual(m.functor):
        raise ModelError("functor mismatch")
    return m.satisfies(x, a)


def eval_monotonicity_check(m: Model, pool: Iterable[Formula]) -> dict:
    pool = list(pool)
    lang = m.lang
    bad_state, bad_order = [], []
    for a in pool:
        for x in m.states():
            if m.satisfies(x, a):
                bad_state += [(x, y, a) for y in m.carrier.up(x) if not m.satisfies(y, a)]
    for a in pool:
        for b in pool:
            if a != b and lang.leq(a, b):
                bad_order += [(x, a, b) for x in m.states() if m.satisfies(x, a) and not m.satisfies(x, b)]
    return {"ok": not bad_state and not bad_order, "state_violations": bad_state,
            "order_violations": bad_order, "formulas": len(pool)}


def upset_poset(x: FinPoset) -> FinPoset:
    """Up-closed subsets of x ordered by inclusion (as plain frozensets)."""
    ups = x.uppersets()
    return FinPoset(ups, ((u, v) for u in ups for v in ups if u <= v), closed=True)


def valuations(atoms: FinPoset, carrier: FinPoset) -> Iterator[MonotoneRel]:
    target = carrier.opposite()
    for t in monotone_tables(atoms, upset_poset(carrier)):
        yield MonotoneRel(atoms, target, ((s, p) for p, u in t.items() for s in u), check=False)


def enumerate_models(functor: FunctorExpr, max_states: int, atoms: FinPoset,
                     limit: int | None = None, min_states: int = 1) -> Iterator[Model]:
    """All models with 1..max_states states, carriers up to isomorphism."""
    f = normalize_dual(functor)

    def gen():
        for n in range(min_states, max_states + 1):
            for carrier in posets_up_to_iso(n):
                tx = apply_obj(f, carrier)
                vals = list(valuations(atoms, carrier))
                for table in monotone_tables(carrier, tx):
                    co = Coalgebra(f, carrier, table, check=False)
                    for v in vals:
                        yield Model(co, atoms, v)

    it = gen()
    return islice(it, limit) if limit is not None else it
