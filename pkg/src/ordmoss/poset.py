"""Finite posets, monotone maps and subposets.

Elements are arbitrary hashable labels.  Constructions that build new
posets use structured labels so that they line up with the element
representation of the functor module: products label elements with
tuples ``(a, b)``, coproducts with ``Inj(side, a)``, hom-posets with
``Fn`` tables and the lowerset/upperset posets with frozensets of
generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Callable, Hashable, Iterable, Iterator, Mapping


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Inj:
    """Coproduct injection; side 0 is the left summand."""

    side: int
    value: Hashable

    def __repr__(self) -> str:
        return f"{'inl' if self.side == 0 else 'inr'}({self.value!r})"


@dataclass(frozen=True)
class Fn:
    """A finite function given by its table, ordered like its domain."""

    items: tuple

    def __call__(self, e):
        for k, v in self.items:
            if k == e:
                return v
        raise KeyError(e)

    def keys(self):
        return [k for k, _ in self.items]

    def values(self):
        return [v for _, v in self.items]

    def __repr__(self) -> str:
        return "Fn(" + ", ".join(f"{k!r}: {v!r}" for k, v in self.items) + ")"


class FinPoset:
    """A finite partial order.

    ``leq`` may be any relation on the elements; it is closed reflexively
    and transitively, and a cycle raises PosetError.  Pass ``closed=True``
    when the relation is already a partial order to skip that work.
    """

    def __init__(self, elements: Iterable, leq: Iterable = (), name: str | None = None,
                 closed: bool = False):
        elems = tuple(dict.fromkeys(elements))
        self.elements = elems
        self.name = name
        index = {e: i for i, e in enumerate(elems)}
        up = {e: {e} for e in elems}
        for a, b in leq:
            if a not in index or b not in index:
                raise PosetError(f"order mentions unknown element {a if a not in index else b!r}")
            up[a].add(b)
        if not closed:
            # closure by repeated expansion; posets here are small
            changed = True
            while changed:
                changed = False
                for e in elems:
                    reach = set(up[e])
                    for f in up[e]:
                        reach |= up[f]
                    if len(reach) != len(up[e]):
                        up[e] = reach
                        changed = True
        for a in elems:
            for b in up[a]:
                if a != b and a in up[b]:
                    raise PosetError(f"order is not antisymmetric: {a!r} and {b!r}")
        self._up = {e: frozenset(s) for e, s in up.items()}
        down = {e: set() for e in elems}
        for a in elems:
            for b in self._up[a]:
                down[b].add(a)
        self._down = {e: frozenset(s) for e, s in down.items()}
        self._key = None

    # basic queries

    def leq(self, a, b) -> bool:
        return b in self._up[a]

    def lt(self, a, b) -> bool:
        return a != b and b in self._up[a]

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def up(self, a) -> frozenset:
        return self._up[a]

    def down(self, a) -> frozenset:
        return self._down[a]

    def __contains__(self, a) -> bool:
        try:
            return a in self._up
        except TypeError:
            return False

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def pairs(self) -> frozenset:
        return frozenset((a, b) for a in self.elements for b in self._up[a])

    def covers(self) -> list:
        out = []
        for a in self.elements:
            for b in self._up[a]:
                if a != b and not any(c != a and c != b and self.leq(c, b) for c in self._up[a]):
                    out.append((a, b))
        return out

    def _ident(self):
        if self._key is None:
            self._key = (frozenset(self.elements), self.pairs())
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self._ident() == other._ident()

    def __hash__(self) -> int:
        return hash(self._ident())

    def __repr__(self) -> str:
        if self.name:
            return f"FinPoset({self.name})"
        return f"FinPoset({list(self.elements)!r}, covers={self.covers()!r})"

    # sets of elements

    def down_closure(self, s: Iterable) -> frozenset:
        out = set()
        for a in s:
            out |= self._down[a]
        return frozenset(out)

    def up_closure(self, s: Iterable) -> frozenset:
        out = set()
        for a in s:
            out |= self._up[a]
        return frozenset(out)

    def is_down_closed(self, s) -> bool:
        s = frozenset(s)
        return all(self._down[a] <= s for a in s)

    def is_up_closed(self, s) -> bool:
        s = frozenset(s)
        return all(self._up[a] <= s for a in s)

    def maximal(self, s: Iterable) -> frozenset:
        s = frozenset(s)
        return frozenset(a for a in s if not any(self.lt(a, b) for b in s))

    def minimal(self, s: Iterable) -> frozenset:
        s = frozenset(s)
        return frozenset(a for a in s if not any(self.lt(b, a) for b in s))

    def is_antichain(self, s: Iterable) -> bool:
        s = list(s)
        return all(not self.comparable(a, b) for i, a in enumerate(s) for b in s[i + 1:])

    def lower_generators(self, s) -> frozenset:
        """Minimal generating set (the maximal elements) of a lowerset."""
        if not self.is_down_closed(s):
            raise PosetError("not a lowerset")
        return self.maximal(s)

    def upper_generators(self, s) -> frozenset:
        """Minimal generating set (the minimal elements) of an upperset."""
        if not self.is_up_closed(s):
            raise PosetError("not an upperset")
        return self.minimal(s)

    def linear_extension(self) -> list:
        return sorted(self.elements, key=lambda e: len(self._down[e]))

    def antichains(self) -> list:
        """All antichains, as frozensets, in a deterministic order."""
        elems = self.elements
        out = []

        def go(i, chosen):
            if i == len(elems):
                out.append(frozenset(chosen))
                return
            go(i + 1, chosen)
            e = elems[i]
            if all(not self.comparable(e, c) for c in chosen):
                chosen.append(e)
                go(i + 1, chosen)
                chosen.pop()

        go(0, [])
        return out

    def lowersets(self) -> list:
        return [self.down_closure(a) for a in self.antichains()]

    def uppersets(self) -> list:
        return [self.up_closure(a) for a in self.antichains()]

    # constructions

    def opposite(self) -> "FinPoset":
        name = f"op({self.name})" if self.name else None
        if self.name and self.name.startswith("op(") and self.name.endswith(")"):
            name = self.name[3:-1]
        return FinPoset(self.elements, ((b, a) for a, b in self.pairs()), name=name, closed=True)

    def subposet(self, members: Iterable) -> "FinPoset":
        m = frozenset(members)
        elems = [e for e in self.elements if e in m]
        if len(elems) != len(m):
            raise PosetError("subposet members must be elements")
        return FinPoset(elems, ((a, b) for a in elems for b in self._up[a] if b in m), closed=True)


def chain(n: int, name: str | None = None) -> FinPoset:
    labels = [str(i) for i in range(n)]
    return FinPoset(labels, zip(labels, labels[1:]), name=name or f"chain{n}")


def discrete(labels: Iterable, name: str | None = None) -> FinPoset:
    return FinPoset(labels, (), name=name)


def one(label="u") -> FinPoset:
    return FinPoset([label], name="1")


def empty() -> FinPoset:
    return FinPoset([], name="0")


def product(a: FinPoset, b: FinPoset) -> FinPoset:
    elems = list(_cartesian(a.elements, b.elements))
    rel = [((x, y), (x2, y2)) for (x, y) in elems for x2 in a.up(x) for y2 in b.up(y)]
    return FinPoset(elems, rel, closed=True)


def coproduct(a: FinPoset, b: FinPoset) -> FinPoset:
    elems = [Inj(0, x) for x in a] + [Inj(1, y) for y in b]
    rel = [(Inj(0, x), Inj(0, x2)) for x in a for x2 in a.up(x)]
    rel += [(Inj(1, y), Inj(1, y2)) for y in b for y2 in b.up(y)]
    return FinPoset(elems, rel, closed=True)


def monotone_tables(dom: FinPoset, cod: FinPoset) -> Iterator[dict]:
    """Enumerate all monotone maps dom -> cod as dicts (backtracking)."""
    order = dom.linear_extension()
    table: dict = {}

    def go(i):
        if i == len(order):
            yield dict(table)
            return
        e = order[i]
        # everything below e is already assigned
        lower = [table[d] for d in dom.down(e) if d != e]
        for v in cod.elements:
            if all(cod.leq(w, v) for w in lower):
                table[e] = v
                yield from go(i + 1)
                del table[e]

    yield from go(0)


def hom_poset(dom: FinPoset, cod: FinPoset) -> FinPoset:
    """Monotone maps dom -> cod with the pointwise order, labelled by Fn."""
    fns = [Fn(tuple((e, t[e]) for e in dom.elements)) for t in monotone_tables(dom, cod)]
    rel = [(f, g) for f in fns for g in fns
           if all(cod.leq(a, b) for a, b in zip(f.values(), g.values()))]
    return FinPoset(fns, rel, closed=True)


def lowerset_poset(x: FinPoset) -> FinPoset:
    """Lowersets ordered by inclusion, each labelled by its generators."""
    gens = x.antichains()
    rel = [(l, m) for l in gens for m in gens
           if all(any(x.leq(a, b) for b in m) for a in l)]
    return FinPoset(gens, rel, closed=True)


def upperset_poset(x: FinPoset) -> FinPoset:
    """Uppersets ordered by reverse inclusion, labelled by generators."""
    gens = x.antichains()
    rel = [(u, v) for u in gens for v in gens
           if all(any(x.leq(a, b) for a in u) for b in v)]
    return FinPoset(gens, rel, closed=True)


def is_isomorphic(a: FinPoset, b: FinPoset) -> bool:
    return find_isomorphism(a, b) is not None


def find_isomorphism(a: FinPoset, b: FinPoset) -> dict | None:
    if len(a) != len(b):
        return None
    ea = a.linear_extension()
    sig = lambda p, e: (len(p.down(e)), len(p.up(e)))
    table: dict = {}
    used: set = set()

    def go(i):
        if i == len(ea):
            return True
        e = ea[i]
        for f in b.elements:
            if f in used or sig(a, e) != sig(b, f):
                continue
            if all(a.leq(d, e) == b.leq(table[d], f) and a.leq(e, d) == b.leq(f, table[d]) for d in table):
                table[e] = f
                used.add(f)
                if go(i + 1):
                    return True
                del table[e]
                used.discard(f)
        return False

    return dict(table) if go(0) else None


def posets_up_to_iso(n: int, prefix: str = "s") -> list:
    """One representative of every isomorphism class of n-element posets."""
    labels = [f"{prefix}{i}" for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n) if i < j]
    reps: list = []
    # every poset has a linear extension, so orders compatible with the
    # index order cover all classes
    for bits in range(1 << len(pairs)):
        rel = [p for k, p in enumerate(pairs) if bits >> k & 1]
        rel_set = set(rel)
        if any((a, b) in rel_set and (b, c) in rel_set and (a, c) not in rel_set
               for a, b in rel for c in labels):
            continue
        p = FinPoset(labels, rel, closed=True)
        if not any(is_isomorphic(p, q) for q in reps):
            reps.append(p)
    return reps


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    dom: FinPoset
    cod: FinPoset
    table: Mapping

    def __post_init__(self):
        for e in self.dom:
            if e not in self.table:
                raise PosetError(f"map undefined on {e!r}")
            if self.table[e] not in self.cod:
                raise PosetError(f"image {self.table[e]!r} of {e!r} is not in the codomain")
        for a in self.dom:
            for b in self.dom.up(a):
                if not self.cod.leq(self.table[a], self.table[b]):
                    raise PosetError(f"map is not monotone at {a!r} <= {b!r}")

    def __call__(self, e):
        return self.table[e]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and all(self.table[e] == other.table[e] for e in self.dom))

    def __hash__(self):
        return hash((self.dom, self.cod, frozenset((e, self.table[e]) for e in self.dom)))

    def image(self) -> frozenset:
        return frozenset(self.table[e] for e in self.dom)

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """g after self."""
        if g.dom != self.cod:
            raise PosetError("maps do not compose")
        return MonotoneMap(self.dom, g.cod, {e: g(self(e)) for e in self.dom})

    def is_surjective(self) -> bool:
        return self.image() == frozenset(self.cod.elements)

    def is_embedding(self) -> bool:
        return all(self.dom.leq(a, b) == self.cod.leq(self(a), self(b))
                   for a in self.dom for b in self.dom)

    @staticmethod
    def identity(x: FinPoset) -> "MonotoneMap":
        return MonotoneMap(x, x, {e: e for e in x})


@dataclass(frozen=True)
class SubPoset:
    """A subset of an ambient poset with the induced order."""

    ambient: FinPoset
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        bad = [m for m in self.members if m not in self.ambient]
        if bad:
            raise PosetError(f"{bad[0]!r} is not in the ambient poset")

    @property
    def poset(self) -> FinPoset:
        return self.ambient.subposet(self.members)

    @property
    def inclusion(self) -> MonotoneMap:
        p = self.poset
        return MonotoneMap(p, self.ambient, {e: e for e in p})

    def __le__(self, other: "SubPoset") -> bool:
        return self.ambient == other.ambient and self.members <= other.members

    def __len__(self):
        return len(self.members)

    def intersection(self, other: "SubPoset") -> "SubPoset":
        return SubPoset(self.ambient, self.members & other.members)

    def union(self, other: "SubPoset") -> "SubPoset":
        return SubPoset(self.ambient, self.members | other.members)

    @staticmethod
    def all_of(x: FinPoset) -> list:
        elems = x.elements
        return [SubPoset(x, frozenset(e for k, e in enumerate(elems) if bits >> k & 1))
                for bits in range(1 << len(elems))]


def factorize(f: MonotoneMap) -> tuple[MonotoneMap, MonotoneMap]:
    """Split f as m after e, e surjective, m an order-embedding."""
    img = SubPoset(f.cod, f.image())
    ip = img.poset
    e = MonotoneMap(f.dom, ip, {a: f(a) for a in f.dom})
    return e, img.inclusion


def find_diagonal(e: MonotoneMap, m: MonotoneMap, u: MonotoneMap, v: MonotoneMap) -> MonotoneMap | None:
    """Given a commuting square m.u = v.e with e surjective and m an embedding,
    return the unique d with d.e = u and m.d = v, or None if there is none."""
    table = {}
    for a in e.dom:
        b = e(a)
        if b in table and table[b] != u(a):
            return None
        table[b] = u(a)
    if set(table) != set(e.cod.elements):
        return None
    try:
        d = MonotoneMap(e.cod, u.cod, table)
    except PosetError:
        return None
    if any(m(d(b)) != v(b) for b in e.cod):
        return None
    return d


def maximal_by(items: Iterable, leq: Callable) -> list:
    """Maximal elements of a finite family under an arbitrary partial order."""
    items = list(dict.fromkeys(items))
    return [a for a in items if not any(b != a and leq(a, b) for b in items)]


def minimal_by(items: Iterable, leq: Callable) -> list:
    items = list(dict.fromkeys(items))
    return [a for a in items if not any(b != a and leq(b, a) for b in items)]
