"""Monotone relations between finite posets.

A relation R from X to Y is stored as the set of pairs ``(y, x)`` with
``R(y, x)``; it must be down-closed in y and up-closed in x.  Relations
compose like maps: ``compose(S, R)`` is "S after R".
"""

from __future__ import annotations

from itertools import product as _cartesian
from typing import Callable, Iterable

from .poset import FinPoset, MonotoneMap, PosetError, lowerset_poset, upperset_poset


class MonotoneRel:
    def __init__(self, src: FinPoset, tgt: FinPoset, pairs: Iterable, check: bool = True):
        self.src = src
        self.tgt = tgt
        self.pairs = frozenset(pairs)
        if check:
            for y, x in self.pairs:
                if y not in tgt or x not in src:
                    raise PosetError(f"pair {(y, x)!r} is outside the carriers")
            for y, x in self.pairs:
                for y2 in tgt.down(y):
                    for x2 in src.up(x):
                        if (y2, x2) not in self.pairs:
                            raise PosetError(f"relation is not monotone: has {(y, x)!r} but not {(y2, x2)!r}")

    @staticmethod
    def from_predicate(src: FinPoset, tgt: FinPoset, pred: Callable, check: bool = True) -> "MonotoneRel":
        return MonotoneRel(src, tgt, ((y, x) for y in tgt for x in src if pred(y, x)), check=check)

    @staticmethod
    def closure(src: FinPoset, tgt: FinPoset, pairs: Iterable) -> "MonotoneRel":
        """Smallest monotone relation containing the given pairs."""
        out = set()
        for y, x in pairs:
            for y2 in tgt.down(y):
                for x2 in src.up(x):
                    out.add((y2, x2))
        return MonotoneRel(src, tgt, out, check=False)

    def holds(self, y, x) -> bool:
        return (y, x) in self.pairs

    def __call__(self, y, x) -> bool:
        return (y, x) in self.pairs

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneRel):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.src, self.tgt, self.pairs))

    def __le__(self, other: "MonotoneRel") -> bool:
        return self.pairs <= other.pairs

    def __len__(self):
        return len(self.pairs)

    def __repr__(self) -> str:
        return f"MonotoneRel({sorted(self.pairs, key=repr)!r})"


def identity(x: FinPoset) -> MonotoneRel:
    return MonotoneRel(x, x, ((a, b) for b in x for a in x.down(b)), check=False)


def compose(s: MonotoneRel, r: MonotoneRel) -> MonotoneRel:
    """(S.R)(z, x) iff S(z, y) and R(y, x) for some y."""
    if r.tgt != s.src:
        raise PosetError("relations do not compose")
    by_y: dict = {}
    for z, y in s.pairs:
        by_y.setdefault(y, []).append(z)
    out = set()
    for y, x in r.pairs:
        for z in by_y.get(y, ()):
            out.add((z, x))
    return MonotoneRel(r.src, s.tgt, out, check=False)


def converse(r: MonotoneRel) -> MonotoneRel:
    """R^con from op(Y) to op(X)."""
    return MonotoneRel(r.tgt.opposite(), r.src.opposite(), ((x, y) for y, x in r.pairs), check=False)


def negate(r: MonotoneRel) -> MonotoneRel:
    """Complement of R, as a relation from op(X) to op(Y)."""
    pairs = ((y, x) for y in r.tgt for x in r.src if (y, x) not in r.pairs)
    return MonotoneRel(r.src.opposite(), r.tgt.opposite(), pairs, check=False)


def graph_lower(f: MonotoneMap) -> MonotoneRel:
    """f_<> from dom to cod: holds(y, x) iff y <= f(x)."""
    return MonotoneRel(f.dom, f.cod, ((y, x) for x in f.dom for y in f.cod.down(f(x))), check=False)


def graph_upper(f: MonotoneMap) -> MonotoneRel:
    """f^<> from cod to dom: holds(x, y) iff f(x) <= y."""
    return MonotoneRel(f.cod, f.dom, ((x, y) for x in f.dom for y in f.cod.up(f(x))), check=False)


def restrict(r: MonotoneRel, f: MonotoneMap, g: MonotoneMap) -> MonotoneRel:
    """R(g-, f-) = g^<> . R . f_<>, from dom f to dom g."""
    return compose(graph_upper(g), compose(r, graph_lower(f)))


def membership_low(x: FinPoset) -> MonotoneRel:
    """Membership from the lowerset poset of x to x."""
    lx = lowerset_poset(x)
    return MonotoneRel(lx, x, ((a, l) for l in lx for a in x.down_closure(l)), check=False)


def membership_up(x: FinPoset) -> MonotoneRel:
    """Reverse membership from x to its upperset poset: holds(u, a) iff a in u."""
    ux = upperset_poset(x)
    return MonotoneRel(x, ux, ((u, a) for u in ux for a in x.up_closure(u)), check=False)


def is_exact_square(p0: MonotoneMap, p1: MonotoneMap, f: MonotoneMap, g: MonotoneMap) -> bool:
    """Square W -p0-> A -f-> C and W -p1-> B -g-> C.

    Requires the lax inequality f.p0 <= g.p1 and then checks exactness:
    f(a) <= g(b) implies a <= p0(w) and p1(w) <= b for some w."""
    w = p0.dom
    if any(not f.cod.leq(f(p0(t)), g(p1(t))) for t in w):
        return False
    for a, b in _cartesian(f.dom.elements, g.dom.elements):
        if f.cod.leq(f(a), g(b)):
            if not any(f.dom.leq(a, p0(t)) and g.dom.leq(p1(t), b) for t in w):
                return False
    return True


def all_relations(src: FinPoset, tgt: FinPoset) -> list:
    """Every monotone relation src -|-> tgt (lowersets of tgt x op(src))."""
    grid = FinPoset([(y, x) for y in tgt for x in src],
                    (((y, x), (y2, x2)) for y in tgt for x in src for y2 in tgt.up(y) for x2 in src.down(x)),
                    closed=True)
    return [MonotoneRel(src, tgt, ls, check=False) for ls in grid.lowersets()]
