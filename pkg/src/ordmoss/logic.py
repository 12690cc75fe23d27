"""Formulas of the positive cover-modality language and their order.

A Language fixes the atom poset and the coalgebra functor T.  Payloads of
nabla and delta are canonical elements of the dual functor applied to
formulas.  Formulas are built through the Language so they are always in
canonical form (conjunctions keep minimal generators, disjunctions maximal
ones, payload generator sets are antichains) and hash-consed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .functor import (FunctorExpr, check_element, dual, elem_leq, fmap, is_tame,
                      leaves, normalize, normalize_dual)
from .poset import FinPoset, Fn, Inj, maximal_by, minimal_by


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return show_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class And(Formula):
    gens: frozenset


@dataclass(frozen=True)
class Or(Formula):
    gens: frozenset


@dataclass(frozen=True)
class Nabla(Formula):
    payload: object


@dataclass(frozen=True)
class Delta(Formula):
    payload: object


TOP = And(frozenset())
BOT = Or(frozenset())


def show_value(v) -> str:
    """Literal syntax for element values; generator sets print sorted."""
    if isinstance(v, Formula):
        return show_formula(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(show_value(x) for x in v) + ")"
    if isinstance(v, Inj):
        return f"{'inl' if v.side == 0 else 'inr'}({show_value(v.value)})"
    if isinstance(v, Fn):
        return "[" + ", ".join(f"{k}: {show_value(x)}" for k, x in v.items) + "]"
    if isinstance(v, frozenset):
        return "{" + ", ".join(sorted(show_value(x) for x in v)) + "}"
    return str(v)


def show_formula(a: Formula) -> str:
    if isinstance(a, Atom):
        return a.name
    if isinstance(a, And):
        return "and(" + ", ".join(sorted(show_formula(b) for b in a.gens)) + ")"
    if isinstance(a, Or):
        return "or(" + ", ".join(sorted(show_formula(b) for b in a.gens)) + ")"
    kw = "nabla" if isinstance(a, Nabla) else "delta"
    return f"{kw} {show_value(a.payload)}"


class LanguageError(ValueError):
    pass


class Language:
    """Atoms At and functor T, with the operations on formulas over them."""

    def __init__(self, atoms: FinPoset, functor: FunctorExpr):
        if not is_tame(functor):
            raise LanguageError("functor has non-finite parameters")
        self.atoms = atoms
        self.functor = normalize_dual(functor)
        self.dual = dual(self.functor)
        self._intern: dict = {}
        self._leq: dict = {}
        self._depth: dict = {}
        self._str: dict = {}

    def __eq__(self, other):
        return isinstance(other, Language) and self.atoms == other.atoms and self.functor == other.functor

    def __hash__(self):
        return hash((self.atoms, self.functor))

    def __repr__(self):
        return f"Language(atoms={self.atoms!r}, functor={self.functor!r})"

    # construction

    def _mk(self, a: Formula) -> Formula:
        return self._intern.setdefault(a, a)

    def atom(self, name: str) -> Atom:
        if name not in self.atoms:
            raise LanguageError(f"unknown atom {name!r}")
        return self._mk(Atom(name))

    def conj(self, items: Iterable[Formula]) -> And:
        return self._mk(And(frozenset(minimal_by(items, self.leq))))

    def disj(self, items: Iterable[Formula]) -> Or:
        return self._mk(Or(frozenset(maximal_by(items, self.leq))))

    @property
    def top(self) -> And:
        return self._mk(TOP)

    @property
    def bot(self) -> Or:
        return self._mk(BOT)

    def payload(self, el):
        """Canonicalize and validate an element of the dual functor over formulas."""
        el = normalize(self.dual, el, self.leq)
        why = check_element(self.dual, el, lambda b: isinstance(b, Formula), self.leq)
        if why:
            raise LanguageError(f"bad modal argument: {why}")
        return el

    def nabla(self, el) -> Nabla:
        return self._mk(Nabla(self.payload(el)))

    def delta(self, el) -> Delta:
        return self._mk(Delta(self.payload(el)))

    def canonical(self, a: Formula) -> Formula:
        """Rebuild a formula bottom-up through the constructors."""
        if isinstance(a, Atom):
            return self.atom(a.name)
        if isinstance(a, And):
            return self.conj(self.canonical(b) for b in a.gens)
        if isinstance(a, Or):
            return self.disj(self.canonical(b) for b in a.gens)
        p = fmap(self.dual, a.payload, self.canonical, self.leq)
        return self.nabla(p) if isinstance(a, Nabla) else self.delta(p)

    # order

    def leq(self, a: Formula, b: Formula) -> bool:
        if a is b or a == b:
            return True
        key = (a, b)
        r = self._leq.get(key)
        if r is None:
            r = self._leq_raw(a, b)
            self._leq[key] = r
        return r

    def _leq_raw(self, a, b) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, Atom):
            return self.atoms.leq(a.name, b.name)
        if isinstance(a, And):
            return all(any(self.leq(x, y) for x in a.gens) for y in b.gens)
        if isinstance(a, Or):
            return all(any(self.leq(x, y) for y in b.gens) for x in a.gens)
        return elem_leq(self.dual, a.payload, b.payload, self.leq)

    def min_gens(self, items: Iterable[Formula]) -> frozenset:
        return frozenset(minimal_by(items, self.leq))

    def max_gens(self, items: Iterable[Formula]) -> frozenset:
        return frozenset(maximal_by(items, self.leq))

    # structure

    def base(self, a: Formula) -> frozenset:
        """Immediate subformulas."""
        if isinstance(a, Atom):
            return frozenset()
        if isinstance(a, (And, Or)):
            return a.gens
        return leaves(self.dual, a.payload)

    def subformulas(self, a: Formula) -> frozenset:
        out: set = set()
        todo = [a]
        while todo:
            b = todo.pop()
            if b in out:
                continue
            out.add(b)
            todo.extend(self.base(b))
        return frozenset(out)

    def subformula_poset(self, a: Formula) -> FinPoset:
        return self.poset_of(self.subformulas(a))

    def poset_of(self, items: Iterable[Formula]) -> FinPoset:
        els = sorted(set(items), key=self.show)
        return FinPoset(els, ((x, y) for x in els for y in els if self.leq(x, y)), closed=True)

    def depth(self, a: Formula) -> int:
        d = self._depth.get(a)
        if d is None:
            if isinstance(a, Atom):
                d = 0
            elif isinstance(a, (And, Or)):
                d = max((self.depth(b) for b in a.gens), default=0)
            else:
                d = 1 + max((self.depth(b) for b in leaves(self.dual, a.payload)), default=0)
            self._depth[a] = d
        return d

    def left_complexity(self, a: Formula) -> int:
        if isinstance(a, Atom):
            return 0
        if isinstance(a, (And, Or)):
            return 1 + sum(self.left_complexity(b) for b in a.gens)
        return 2 if isinstance(a, Nabla) else 3

    def right_complexity(self, a: Formula) -> int:
        if isinstance(a, Atom):
            return 0
        if isinstance(a, (And, Or)):
            return 1 + sum(self.right_complexity(b) for b in a.gens)
        return 3 if isinstance(a, Nabla) else 2

    def sequent_measure(self, s: "Sequent") -> tuple[int, int]:
        d = max((self.depth(a) for a in s.lhs | s.rhs), default=0)
        k = sum(self.left_complexity(a) for a in s.lhs) + sum(self.right_complexity(b) for b in s.rhs)
        return d, k

    # printing

    def show(self, a: Formula) -> str:
        s = self._str.get(a)
        if s is None:
            s = show_formula(a)
            self._str[a] = s
        return s

    def show_payload(self, el) -> str:
        return show_value(el)

    def sorted(self, items: Iterable[Formula]) -> list:
        return sorted(items, key=self.show)

    # sequents

    def sequent(self, lhs: Iterable[Formula], rhs: Iterable[Formula]) -> "Sequent":
        return Sequent(self.min_gens(lhs), self.max_gens(rhs))

    def show_sequent(self, s: "Sequent") -> str:
        left = ", ".join(self.show(a) for a in self.sorted(s.lhs))
        right = ", ".join(self.show(a) for a in self.sorted(s.rhs))
        return f"{left} => {right}".strip()


@dataclass(frozen=True)
class Sequent:
    """lhs: generators of an upperset (read conjunctively);
    rhs: generators of a lowerset (read disjunctively)."""

    lhs: frozenset
    rhs: frozenset


@lru_cache(maxsize=None)
def language(atoms: FinPoset, functor: FunctorExpr) -> Language:
    """Shared Language instance per (atoms, functor)."""
    return Language(atoms, functor)
