"""Simulations between models, similarity, and distinguishing formulas."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .functor import enumerate_elements, fmap, leaves, lift_holds
from .logic import Formula, Language
from .model import Model, ModelError
from .poset import FinPoset
from .relation import MonotoneRel


def _same_signature(m: Model, n: Model):
    if m.lang != n.lang:
        raise ModelError("models have different functors or atoms")


def _atoms_ok(m: Model, n: Model, x, y) -> bool:
    return all(n.atom_holds(y, p) for p in m.atoms if m.atom_holds(x, p))


def _step_ok(m: Model, n: Model, pairs, x, y) -> bool:
    return lift_holds(m.lang.functor, lambda a, b: (a, b) in pairs, m.coalgebra(x), n.coalgebra(y))


def is_simulation(s: MonotoneRel, m: Model, n: Model) -> bool:
    """S from the carrier of n to that of m, holds(x, y)."""
    _same_signature(m, n)
    if s.src != n.carrier or s.tgt != m.carrier:
        raise ModelError("relation carriers do not match the models")
    return all(_atoms_ok(m, n, x, y) and _step_ok(m, n, s.pairs, x, y) for x, y in s.pairs)


def approximants(m: Model, n: Model) -> list:
    """Decreasing approximants S_0 > S_1 > ... down to the fixpoint."""
    _same_signature(m, n)
    cur = frozenset((x, y) for x in m.states() for y in n.states() if _atoms_ok(m, n, x, y))
    out = [cur]
    while True:
        nxt = frozenset(p for p in cur if _step_ok(m, n, cur, *p))
        # intersections of monotone relations are monotone; check anyway
        MonotoneRel(n.carrier, m.carrier, nxt)
        if nxt == cur:
            return out
        out.append(nxt)
        cur = nxt


def greatest_simulation(m: Model, n: Model) -> MonotoneRel:
    return MonotoneRel(n.carrier, m.carrier, approximants(m, n)[-1])


def distinguishing_formula(m: Model, x, n: Model, y) -> Formula | None:
    """A formula true at x and false at y, or None when y simulates x.

    Follows the iteration: a pair dropped at stage 0 differs on an atom;
    a pair dropped at stage i+1 is separated by nabla of c(x) with each
    successor x' replaced by the conjunction of separators for (x', w),
    w ranging over the successors of y that x' is not related to."""
    stages = approximants(m, n)
    if (x, y) in stages[-1]:
        return None
    lang = m.lang
    memo: dict = {}

    def sep(a, b):
        if (a, b) in memo:
            return memo[(a, b)]
        if (a, b) not in stages[0]:
            p = next(p for p in m.atoms if m.atom_holds(a, p) and not n.atom_holds(b, p))
            f = lang.atom(p)
        else:
            i = next(i for i, st in enumerate(stages) if (a, b) not in st)
            prev = stages[i - 1]
            succ_b = sorted(leaves(lang.functor, n.coalgebra(b)), key=str)

            def conj(a2):
                return lang.conj(sep(a2, w) for w in succ_b if (a2, w) not in prev)

            f = lang.nabla(fmap(lang.dual, m.coalgebra(a), conj, lang.leq))
        memo[(a, b)] = f
        return f

    return sep(x, y)


def modally_stronger_upto(m: Model, x, n: Model, y, k: int, pool: Iterable[Formula] | None = None) -> bool:
    """Every formula of the pool (depth <= k) true at x is true at y."""
    lang = m.lang
    if pool is None:
        pool = formula_pool(lang, k, [m, n])
    return all(n.satisfies(y, a) for a in pool if lang.depth(a) <= k and m.satisfies(x, a))


def formula_pool(lang: Language, depth: int, models: list, max_width: int | None = None) -> list:
    """Formulas of modal depth <= depth, one per distinct extension on the
    given models.

    Over these models, two formulas with the same truth set at every state
    are interchangeable, also as arguments of nabla, so keeping one of each
    loses nothing for comparisons on these models.  Layer 0 is the atoms
    closed under conjunction and disjunction; each further layer adds nabla
    of every element of the dual functor over the previous layer (generator
    sets limited to ``max_width`` if given) and closes again."""
    states = [(i, s) for i, md in enumerate(models) for s in md.states()]

    def ext(a):
        return frozenset((i, s) for i, s in states if models[i].satisfies(s, a))

    reps: dict = {}

    def add(a):
        e = ext(a)
        old = reps.get(e)
        # prefer the smaller formula as representative
        if old is None or (lang.depth(a), len(lang.show(a))) < (lang.depth(old), len(lang.show(old))):
            reps[e] = a
            return old is None
        return False

    def close():
        changed = True
        while changed:
            changed = False
            items = list(reps.items())
            for (e1, a1), (e2, a2) in combinations(items, 2):
                if e1 & e2 not in reps:
                    changed |= add(lang.conj([a1, a2]))
                if e1 | e2 not in reps:
                    changed |= add(lang.disj([a1, a2]))

    add(lang.top)
    add(lang.bot)
    for p in lang.atoms:
        add(lang.atom(p))
    close()
    for _ in range(depth):
        # leaves ordered by inclusion of extensions
        layer = list(reps.items())
        by_formula = {a: e for e, a in layer}
        leaf_poset = FinPoset([a for _, a in layer],
                              ((a, b) for _, a in layer for _, b in layer if by_formula[a] <= by_formula[b]),
                              closed=True)
        for el in enumerate_elements(lang.dual, leaf_poset, max_width):
            add(lang.nabla(el))
        close()
    return sorted(reps.values(), key=lambda a: (lang.depth(a), lang.show(a)))
