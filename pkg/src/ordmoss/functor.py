"""Kripke-polynomial functor expressions and their elements.

Elements are plain values whose reading is fixed by the functor node:

    Const P      a point of P
    Id           a point of the argument poset (a "leaf")
    Sum F G      Inj(0, a) or Inj(1, b)
    Prod F G     a tuple (a, b)
    Exp F E      Fn table over the elements of E, monotone
    Low F        frozenset of maximal generators of a lowerset
    Up F         frozenset of minimal generators of an upperset

A Low element of T(X) is the same value as the corresponding Up element
of the dual functor applied to the opposite of X, and vice versa.  This is
what lets a coalgebra structure c(x) be fed straight into the lifting of
the dual functor when evaluating the nabla modality.

Most routines take the order on leaves as a callable, so they work over
finite posets and over the (infinite) language of formulas alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _cartesian
from typing import Callable, Hashable, Iterable

from .poset import (FinPoset, Fn, Inj, MonotoneMap, SubPoset,
                    maximal_by, minimal_by, monotone_tables, product)
from .relation import MonotoneRel


class FunctorError(ValueError):
    pass


class FunctorExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(FunctorExpr):
    poset: FinPoset


@dataclass(frozen=True)
class Id(FunctorExpr):
    pass


@dataclass(frozen=True)
class Sum(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr


@dataclass(frozen=True)
class Prod(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr


@dataclass(frozen=True)
class Exp(FunctorExpr):
    body: FunctorExpr
    index: FinPoset


@dataclass(frozen=True)
class Dual(FunctorExpr):
    body: FunctorExpr


@dataclass(frozen=True)
class Low(FunctorExpr):
    body: FunctorExpr


@dataclass(frozen=True)
class Up(FunctorExpr):
    body: FunctorExpr


Leq = Callable[[Hashable, Hashable], bool]


def normalize_dual(f: FunctorExpr, flip: bool = False) -> FunctorExpr:
    """Push Dual nodes to the leaves and remove them."""
    if isinstance(f, Dual):
        return normalize_dual(f.body, not flip)
    if isinstance(f, Const):
        return Const(f.poset.opposite()) if flip else f
    if isinstance(f, Id):
        return f
    if isinstance(f, Sum):
        return Sum(normalize_dual(f.left, flip), normalize_dual(f.right, flip))
    if isinstance(f, Prod):
        return Prod(normalize_dual(f.left, flip), normalize_dual(f.right, flip))
    if isinstance(f, Exp):
        return Exp(normalize_dual(f.body, flip), f.index.opposite() if flip else f.index)
    if isinstance(f, Low):
        b = normalize_dual(f.body, flip)
        return Up(b) if flip else Low(b)
    if isinstance(f, Up):
        b = normalize_dual(f.body, flip)
        return Low(b) if flip else Up(b)
    raise FunctorError(f"not a functor expression: {f!r}")


def dual(f: FunctorExpr) -> FunctorExpr:
    return normalize_dual(f, True)


def is_normalized(f: FunctorExpr) -> bool:
    if isinstance(f, Dual):
        return False
    if isinstance(f, (Const, Id)):
        return True
    if isinstance(f, (Sum, Prod)):
        return is_normalized(f.left) and is_normalized(f.right)
    return is_normalized(f.body)


def is_tame(f: FunctorExpr) -> bool:
    """All constant and exponent parameters are finite posets."""
    if isinstance(f, Const):
        return isinstance(f.poset, FinPoset)
    if isinstance(f, Id):
        return True
    if isinstance(f, (Sum, Prod)):
        return is_tame(f.left) and is_tame(f.right)
    if isinstance(f, Exp):
        return isinstance(f.index, FinPoset) and is_tame(f.body)
    if isinstance(f, (Dual, Low, Up)):
        return is_tame(f.body)
    return False


def functor_depth(f: FunctorExpr) -> int:
    if isinstance(f, (Const, Id)):
        return 0
    if isinstance(f, (Sum, Prod)):
        return 1 + max(functor_depth(f.left), functor_depth(f.right))
    return 1 + functor_depth(f.body)


def _need_normal(f):
    if not is_normalized(f):
        raise FunctorError("functor expression contains dual(); normalize it first")


# element-level operations

def elem_leq(f: FunctorExpr, a, b, lq: Leq) -> bool:
    if isinstance(f, Id):
        return lq(a, b)
    if isinstance(f, Const):
        return f.poset.leq(a, b)
    if isinstance(f, Prod):
        return elem_leq(f.left, a[0], b[0], lq) and elem_leq(f.right, a[1], b[1], lq)
    if isinstance(f, Sum):
        if a.side != b.side:
            return False
        return elem_leq(f.left if a.side == 0 else f.right, a.value, b.value, lq)
    if isinstance(f, Exp):
        return all(elem_leq(f.body, x, y, lq) for x, y in zip(a.values(), b.values()))
    if isinstance(f, Low):
        return all(any(elem_leq(f.body, x, y, lq) for y in b) for x in a)
    if isinstance(f, Up):
        return all(any(elem_leq(f.body, x, y, lq) for x in a) for y in b)
    raise FunctorError(f"unexpected node {f!r}")


def normalize(f: FunctorExpr, el, lq: Leq):
    """Canonical form: generator sets reduced to antichains, recursively."""
    if isinstance(f, (Id, Const)):
        return el
    if isinstance(f, Prod):
        return (normalize(f.left, el[0], lq), normalize(f.right, el[1], lq))
    if isinstance(f, Sum):
        return Inj(el.side, normalize(f.left if el.side == 0 else f.right, el.value, lq))
    if isinstance(f, Exp):
        return Fn(tuple((k, normalize(f.body, v, lq)) for k, v in el.items))
    if isinstance(f, (Low, Up)):
        items = [normalize(f.body, x, lq) for x in el]
        sub = lambda x, y: elem_leq(f.body, x, y, lq)
        keep = maximal_by(items, sub) if isinstance(f, Low) else minimal_by(items, sub)
        return frozenset(keep)
    raise FunctorError(f"unexpected node {f!r}")


def fmap(f: FunctorExpr, el, h: Callable, lq_cod: Leq):
    """Apply h to every leaf, renormalizing generator sets in the codomain order."""
    if isinstance(f, Id):
        return h(el)
    if isinstance(f, Const):
        return el
    if isinstance(f, Prod):
        return (fmap(f.left, el[0], h, lq_cod), fmap(f.right, el[1], h, lq_cod))
    if isinstance(f, Sum):
        return Inj(el.side, fmap(f.left if el.side == 0 else f.right, el.value, h, lq_cod))
    if isinstance(f, Exp):
        return Fn(tuple((k, fmap(f.body, v, h, lq_cod)) for k, v in el.items))
    if isinstance(f, (Low, Up)):
        items = [fmap(f.body, x, h, lq_cod) for x in el]
        sub = lambda x, y: elem_leq(f.body, x, y, lq_cod)
        keep = maximal_by(items, sub) if isinstance(f, Low) else minimal_by(items, sub)
        return frozenset(keep)
    raise FunctorError(f"unexpected node {f!r}")


def leaves(f: FunctorExpr, el) -> frozenset:
    """The Id-leaves of an element; for canonical elements this is the base."""
    out: set = set()

    def go(g, e):
        if isinstance(g, Id):
            out.add(e)
        elif isinstance(g, Const):
            pass
        elif isinstance(g, Prod):
            go(g.left, e[0])
            go(g.right, e[1])
        elif isinstance(g, Sum):
            go(g.left if e.side == 0 else g.right, e.value)
        elif isinstance(g, Exp):
            for v in e.values():
                go(g.body, v)
        else:
            for x in e:
                go(g.body, x)

    go(f, el)
    return frozenset(out)


def check_element(f: FunctorExpr, el, leaf_ok: Callable, lq: Leq) -> str | None:
    """Return None if el is a canonical element of f, else a reason."""
    if isinstance(f, Id):
        return None if leaf_ok(el) else f"bad leaf {el!r}"
    if isinstance(f, Const):
        return None if el in f.poset else f"{el!r} is not a point of the constant"
    if isinstance(f, Prod):
        if not isinstance(el, tuple) or len(el) != 2:
            return f"expected a pair, got {el!r}"
        return check_element(f.left, el[0], leaf_ok, lq) or check_element(f.right, el[1], leaf_ok, lq)
    if isinstance(f, Sum):
        if not isinstance(el, Inj) or el.side not in (0, 1):
            return f"expected an injection, got {el!r}"
        return check_element(f.left if el.side == 0 else f.right, el.value, leaf_ok, lq)
    if isinstance(f, Exp):
        if not isinstance(el, Fn) or el.keys() != list(f.index.elements):
            return f"expected a table over the index poset, got {el!r}"
        for v in el.values():
            r = check_element(f.body, v, leaf_ok, lq)
            if r:
                return r
        for i in f.index:
            for j in f.index.up(i):
                if not elem_leq(f.body, el(i), el(j), lq):
                    return f"table is not monotone at {i!r} <= {j!r}"
        return None
    if isinstance(f, (Low, Up)):
        if not isinstance(el, frozenset):
            return f"expected a generator set, got {el!r}"
        for x in el:
            r = check_element(f.body, x, leaf_ok, lq)
            if r:
                return r
        xs = list(el)
        for i, x in enumerate(xs):
            for y in xs[i + 1:]:
                if elem_leq(f.body, x, y, lq) or elem_leq(f.body, y, x, lq):
                    return "generators do not form an antichain"
        return None
    return f"unexpected node {f!r}"


def lift_holds(f: FunctorExpr, rel: Callable, y, x) -> bool:
    """Inductive relation lifting: does the lifted relation hold of (y, x)?

    ``rel(b, a)`` is the underlying monotone relation with b on the target
    side and a on the source side; y lives over the target and x over the
    source.  Constants compare with their own order, y <= x."""
    if isinstance(f, Id):
        return rel(y, x)
    if isinstance(f, Const):
        return f.poset.leq(y, x)
    if isinstance(f, Prod):
        return lift_holds(f.left, rel, y[0], x[0]) and lift_holds(f.right, rel, y[1], x[1])
    if isinstance(f, Sum):
        if y.side != x.side:
            return False
        return lift_holds(f.left if y.side == 0 else f.right, rel, y.value, x.value)
    if isinstance(f, Exp):
        return all(lift_holds(f.body, rel, b, a) for b, a in zip(y.values(), x.values()))
    if isinstance(f, Low):
        return all(any(lift_holds(f.body, rel, b, a) for a in x) for b in y)
    if isinstance(f, Up):
        return all(any(lift_holds(f.body, rel, b, a) for b in y) for a in x)
    raise FunctorError(f"unexpected node {f!r}")


# action on finite posets

def enumerate_elements(f: FunctorExpr, x: FinPoset, max_width: int | None = None) -> list:
    """All canonical elements of f(x) in a deterministic order.

    ``max_width`` bounds the size of every Low/Up generator set."""
    _need_normal(f)
    if isinstance(f, Id):
        return list(x.elements)
    if isinstance(f, Const):
        return list(f.poset.elements)
    if isinstance(f, Prod):
        return list(_cartesian(enumerate_elements(f.left, x, max_width),
                               enumerate_elements(f.right, x, max_width)))
    if isinstance(f, Sum):
        return ([Inj(0, a) for a in enumerate_elements(f.left, x, max_width)]
                + [Inj(1, b) for b in enumerate_elements(f.right, x, max_width)])
    inner = apply_obj(f.body, x) if max_width is None else _apply_obj_width(f.body, x, max_width)
    if isinstance(f, Exp):
        return [Fn(tuple((e, t[e]) for e in f.index.elements))
                for t in monotone_tables(f.index, inner)]
    if isinstance(f, (Low, Up)):
        chains = inner.antichains()
        if max_width is not None:
            chains = [c for c in chains if len(c) <= max_width]
        return chains
    raise FunctorError(f"unexpected node {f!r}")


def _apply_obj_width(f, x, w):
    els = enumerate_elements(f, x, w)
    lq = x.leq
    return FinPoset(els, ((a, b) for a in els for b in els if elem_leq(f, a, b, lq)), closed=True)


@lru_cache(maxsize=4096)
def apply_obj(f: FunctorExpr, x: FinPoset) -> FinPoset:
    _need_normal(f)
    els = enumerate_elements(f, x)
    lq = x.leq
    return FinPoset(els, ((a, b) for a in els for b in els if elem_leq(f, a, b, lq)), closed=True)


def apply_map(f: FunctorExpr, h: MonotoneMap) -> MonotoneMap:
    _need_normal(f)
    dom = apply_obj(f, h.dom)
    cod = apply_obj(f, h.cod)
    return MonotoneMap(dom, cod, {t: fmap(f, t, h, h.cod.leq) for t in dom})


def relation_poset(r: MonotoneRel) -> tuple[FinPoset, MonotoneMap, MonotoneMap]:
    """The poset E of related pairs (y, x) with its two projections."""
    big = product(r.tgt, r.src)
    e = big.subposet(r.pairs)
    p0 = MonotoneMap(e, r.tgt, {w: w[0] for w in e})
    p1 = MonotoneMap(e, r.src, {w: w[1] for w in e})
    return e, p0, p1


def lift_generic(f: FunctorExpr, r: MonotoneRel) -> MonotoneRel:
    """Lifting through spans: related iff some w in f(E) has b <= p0(w), p1(w) <= a.

    Only the elements of f(E) are needed, not its order."""
    _need_normal(f)
    e, p0, p1 = relation_poset(r)
    ty = apply_obj(f, r.tgt)
    tx = apply_obj(f, r.src)
    ends = {(fmap(f, w, p0, r.tgt.leq), fmap(f, w, p1, r.src.leq)) for w in enumerate_elements(f, e)}
    pairs = set()
    for u, v in ends:
        for b in ty.down(u):
            for a in tx.up(v):
                pairs.add((b, a))
    return MonotoneRel(tx, ty, pairs, check=False)


def lift_inductive(f: FunctorExpr, r: MonotoneRel) -> MonotoneRel:
    _need_normal(f)
    ty = apply_obj(f, r.tgt)
    tx = apply_obj(f, r.src)
    rel = r.holds
    return MonotoneRel(tx, ty, ((b, a) for b in ty for a in tx if lift_holds(f, rel, b, a)), check=False)


# bases

def base_inductive(f: FunctorExpr, t, x: FinPoset) -> SubPoset:
    _need_normal(f)
    return SubPoset(x, leaves(f, t))


def base_bruteforce(f: FunctorExpr, t, x: FinPoset) -> SubPoset:
    """Intersection of all subposets m with t in the image of f(m)."""
    _need_normal(f)
    hits = [m for m in SubPoset.all_of(x) if t in apply_map(f, m.inclusion).image()]
    if not hits:
        raise FunctorError(f"{t!r} is not an element of the functor applied to the poset")
    out = hits[0]
    for m in hits[1:]:
        out = out.intersection(m)
    if t not in apply_map(f, out.inclusion).image():
        raise FunctorError("functor does not preserve this intersection")
    return out


def base_of_subobject(f: FunctorExpr, ts: Iterable, x: FinPoset) -> SubPoset:
    out = SubPoset(x, frozenset())
    for t in ts:
        out = out.union(base_inductive(f, t, x))
    return out


def check_unit_counit(f: FunctorExpr, x: FinPoset, subsets: Iterable | None = None) -> dict:
    """Check t lies over its base, and that elements over m have base inside m."""
    _need_normal(f)
    tx = apply_obj(f, x)
    unit_fail = []
    for t in tx:
        b = base_inductive(f, t, x)
        if t not in apply_map(f, b.inclusion).image():
            unit_fail.append(t)
    counit_fail = []
    ms = list(subsets) if subsets is not None else SubPoset.all_of(x)
    for m in ms:
        for t in apply_map(f, m.inclusion).image():
            if not base_inductive(f, t, x).members <= m.members:
                counit_fail.append((m.members, t))
    return {"unit_ok": not unit_fail, "counit_ok": not counit_fail,
            "unit_failures": unit_fail, "counit_failures": counit_fail,
            "elements": len(tx), "subposets": len(ms)}
