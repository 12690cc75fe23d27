"""Sequent calculus for nabla/delta: rules, proof search, proof checking,
and countermodel extraction.

Search is backward and memoized on canonical sequents.  Reduced sequents
(atoms and nabla formulas on the left, atoms and delta formulas on the
right) are decided by asking whether some redistribution has only
refutable components.  Instead of enumerating all redistributions, a
solver walks the dual functor and builds one: at an Id position the
least demanding component (the up/down closures of exactly the required
formulas) is the hardest to prove, since every other candidate is a
weakening of it.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Callable, Iterable

from .functor import (Const, Exp, FunctorExpr, Id, Low, Prod, Sum, Up, elem_leq,
                      enumerate_elements, fmap, leaves, lift_generic, lift_holds)
from .logic import (And, Atom, Delta, Formula, Language, Nabla, Or, Sequent,
                    show_value)
from .model import Model, ModelError
from .poset import (FinPoset, Fn, Inj, lowerset_poset, maximal_by, minimal_by,
                    product, upperset_poset)
from .relation import membership_low, membership_up, negate

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

RULES = ("Ax", "w-l", "w-r", "and-l", "and-r", "or-l", "or-r", "nabla-r", "delta-l", "nabla-delta")


class TerminationError(AssertionError):
    pass


class AssemblyError(RuntimeError):
    """The countermodel construction needs the redistribution to come from
    the discrete poset on its components; an exponent over an ordered
    index can rule that out."""


@dataclass(eq=False)
class ProofTree:
    sequent: Sequent
    rule: str
    premises: tuple = ()
    principal: Formula | None = None
    # Ax: (a, b); nabla-r / delta-l: the indexing elements, aligned with
    # premises; nabla-delta: the components z, aligned with premises
    data: tuple = ()

    def nodes(self):
        seen = set()
        todo = [self]
        while todo:
            t = todo.pop()
            if id(t) in seen:
                continue
            seen.add(id(t))
            yield t
            todo.extend(t.premises)

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def rules_preorder(self) -> list:
        out = [self.rule]
        for p in self.premises:
            out += p.rules_preorder()
        return out


@dataclass(eq=False)
class Countermodel:
    model: Model
    state: object


# the collections R_alpha and L_beta

def _lowerset_member(v: FinPoset):
    return lambda z, l: z in v.down_closure(l)


def r_alpha(lang: Language, alpha, method: str = "inductive") -> list:
    """Psi in the dual functor over lowersets of base(alpha) that alpha is
    not related to by the lifted non-membership relation."""
    v = lang.poset_of(leaves(lang.dual, alpha))
    lv = lowerset_poset(v)
    cands = enumerate_elements(lang.dual, lv)
    if method == "generic":
        rel = lift_generic(lang.functor, negate(membership_low(v)))
        return [psi for psi in cands if not rel.holds(alpha, psi)]
    mem = _lowerset_member(v)
    return [psi for psi in cands
            if not lift_holds(lang.functor, lambda z, l: not mem(z, l), alpha, psi)]


def l_beta(lang: Language, beta, method: str = "inductive") -> list:
    """Phi in the dual functor over uppersets of base(beta) not related to
    beta by the lifted non-membership relation."""
    w = lang.poset_of(leaves(lang.dual, beta))
    uw = upperset_poset(w)
    cands = enumerate_elements(lang.dual, uw)
    if method == "generic":
        rel = lift_generic(lang.functor, negate(membership_up(w)))
        return [phi for phi in cands if not rel.holds(phi, beta)]
    return [phi for phi in cands
            if not lift_holds(lang.functor, lambda u, z: z not in w.up_closure(u), phi, beta)]


def nabla_of_conj(lang: Language, phi) -> Nabla:
    return lang.nabla(fmap(lang.dual, phi, lang.conj, lang.leq))


def delta_of_disj(lang: Language, psi) -> Delta:
    return lang.delta(fmap(lang.dual, psi, lang.disj, lang.leq))


# redistributions

class _Bases:
    def __init__(self, lang: Language, alphas, betas):
        self.lang = lang
        self.v = lang.poset_of(set().union(*[leaves(lang.dual, a) for a in alphas]) if alphas else ())
        self.w = lang.poset_of(set().union(*[leaves(lang.dual, b) for b in betas]) if betas else ())

    def z_leq(self, z1, z2) -> bool:
        (u1, l1), (u2, l2) = z1, z2
        lq = self.lang.leq
        # uppersets by reverse inclusion, lowersets by inclusion
        return (all(any(lq(a, b) for a in u1) for b in u2)
                and all(any(lq(a, b) for b in l2) for a in l1))

    def z_poset(self) -> FinPoset:
        return product(upperset_poset(self.v), lowerset_poset(self.w))


def redistributions(lang: Language, alphas: Iterable, betas: Iterable) -> list:
    """All redistributions of (A, B), by enumeration and filtering."""
    alphas, betas = list(alphas), list(betas)
    bs = _Bases(lang, alphas, betas)
    uv, lw = upperset_poset(bs.v), lowerset_poset(bs.w)
    out = []
    for phi in enumerate_elements(lang.dual, bs.z_poset()):
        p0 = fmap(lang.dual, phi, lambda z: z[0], uv.leq)
        p1 = fmap(lang.dual, phi, lambda z: z[1], lw.leq)
        if all(lift_holds(lang.dual, lambda u, a: a in bs.v.up_closure(u), p0, a) for a in alphas) and \
           all(lift_holds(lang.dual, lambda b, l: b in bs.w.down_closure(l), b, p1) for b in betas):
            out.append(phi)
    return out


def is_redistribution(lang: Language, phi, alphas, betas) -> bool:
    bs = _Bases(lang, list(alphas), list(betas))
    uv, lw = upperset_poset(bs.v), lowerset_poset(bs.w)
    p0 = fmap(lang.dual, phi, lambda z: z[0], uv.leq)
    p1 = fmap(lang.dual, phi, lambda z: z[1], lw.leq)
    return (all(lift_holds(lang.dual, lambda u, a: a in bs.v.up_closure(u), p0, a) for a in alphas)
            and all(lift_holds(lang.dual, lambda b, l: b in bs.w.down_closure(l), b, p1) for b in betas))


def find_redistribution(lang: Language, alphas, betas, usable: Callable):
    """A redistribution all of whose components satisfy ``usable``, or None.

    ``usable`` must be closed under removing formulas from either side of
    a component (refutability and "not a weakening of a proved premise"
    both are); under that assumption the search below is exact."""
    alphas, betas = list(alphas), list(betas)
    bs = _Bases(lang, alphas, betas)
    return _Solver(lang, bs, usable).solve(lang.dual, alphas, betas)


def _sorted(items):
    return sorted(items, key=show_value)


class _Solver:
    def __init__(self, lang, bases, usable):
        self.lang = lang
        self.bases = bases
        self.usable = usable

    def solve(self, g: FunctorExpr, alphas: list, betas: list):
        if isinstance(g, Id):
            z = (self.bases.v.minimal(alphas), self.bases.w.maximal(betas))
            return z if self.usable(z) else None
        if isinstance(g, Const):
            p = g.poset
            for c in p.elements:
                if all(p.leq(c, a) for a in alphas) and all(p.leq(b, c) for b in betas):
                    return c
            return None
        if isinstance(g, Prod):
            r0 = self.solve(g.left, [a[0] for a in alphas], [b[0] for b in betas])
            if r0 is None:
                return None
            r1 = self.solve(g.right, [a[1] for a in alphas], [b[1] for b in betas])
            return None if r1 is None else (r0, r1)
        if isinstance(g, Sum):
            sides = {a.side for a in alphas} | {b.side for b in betas}
            if len(sides) > 1:
                return None
            for s in (sorted(sides) or [0, 1]):
                r = self.solve(g.left if s == 0 else g.right,
                               [a.value for a in alphas], [b.value for b in betas])
                if r is not None:
                    return Inj(s, r)
            return None
        if isinstance(g, Low):
            chosen = []
            for b in _sorted(set().union(*betas) if betas else ()):
                found = None
                for combo in _cartesian(*[_sorted(a) for a in alphas]):
                    found = self.solve(g.body, list(combo), [b])
                    if found is not None:
                        break
                if found is None:
                    return None
                chosen.append(found)
            return frozenset(maximal_by(chosen, lambda x, y: elem_leq(g.body, x, y, self.bases.z_leq)))
        if isinstance(g, Up):
            chosen = []
            for a in _sorted(set().union(*alphas) if alphas else ()):
                found = None
                for combo in _cartesian(*[_sorted(b) for b in betas]):
                    found = self.solve(g.body, [a], list(combo))
                    if found is not None:
                        break
                if found is None:
                    return None
                chosen.append(found)
            return frozenset(minimal_by(chosen, lambda x, y: elem_leq(g.body, x, y, self.bases.z_leq)))
        if isinstance(g, Exp):
            return self._solve_exp(g, alphas, betas)
        raise TypeError(g)

    def _solve_exp(self, g: Exp, alphas, betas):
        # enumerate candidates explicitly, then pick a monotone table
        pz = self.bases.z_poset()
        ok = pz.subposet([z for z in pz if self.usable(z)])
        v, w = self.bases.v, self.bases.w
        uv, lw = upperset_poset(v), lowerset_poset(w)
        cands = enumerate_elements(g.body, ok)

        def fits(e, phi):
            p0 = fmap(g.body, phi, lambda z: z[0], uv.leq)
            p1 = fmap(g.body, phi, lambda z: z[1], lw.leq)
            return (all(lift_holds(g.body, lambda u, a: a in v.up_closure(u), p0, al(e)) for al in alphas)
                    and all(lift_holds(g.body, lambda b, l: b in w.down_closure(l), be(e), p1) for be in betas))

        allowed = {e: [c for c in cands if fits(e, c)] for e in g.index}
        order = g.index.linear_extension()
        table: dict = {}
        lq = ok.leq

        def go(i):
            if i == len(order):
                return True
            e = order[i]
            below = [table[d] for d in g.index.down(e) if d != e]
            for c in allowed[e]:
                if all(elem_leq(g.body, d, c, lq) for d in below):
                    table[e] = c
                    if go(i + 1):
                        return True
                    del table[e]
            return False

        if not go(0):
            return None
        return Fn(tuple((e, table[e]) for e in g.index.elements))


def z_sequent(lang: Language, z) -> Sequent:
    return Sequent(frozenset(z[0]), frozenset(z[1]))


def weakens(lang: Language, z, p) -> bool:
    """Is component z obtained from component p by weakening?"""
    (u, l), (pu, pl) = z, p
    lq = lang.leq
    return (all(any(lq(a, b) for a in u) for b in pu)
            and all(any(lq(a, b) for b in l) for a in pl))


def model_redistribution(m: Model, x, alphas, betas):
    """The redistribution read off a state refuting the reduced sequent."""
    lang = m.lang
    alphas, betas = list(alphas), list(betas)
    if not (all(m.satisfies(x, lang.nabla(a)) for a in alphas)
            and not any(m.satisfies(x, lang.delta(b)) for b in betas)):
        raise ValueError("state does not refute the reduced sequent")
    bs = _Bases(lang, alphas, betas)

    def sharp(s):
        u = bs.v.minimal(a for a in bs.v if m.satisfies(s, a))
        l = bs.w.maximal(b for b in bs.w if not m.satisfies(s, b))
        return (u, l)

    return fmap(lang.dual, m.coalgebra(x), sharp, bs.z_leq)


# proof search

def _reduced(s: Sequent) -> bool:
    return (all(isinstance(a, (Atom, Nabla)) for a in s.lhs)
            and all(isinstance(b, (Atom, Delta)) for b in s.rhs))


@dataclass
class SearchStats:
    sequents: int = 0
    measure_checks: int = 0
    modal_steps: int = 0


class Prover:
    """Backward proof search over one language, memoized across calls."""

    def __init__(self, lang: Language):
        self.lang = lang
        self.memo: dict = {}
        self.stats = SearchStats()

    def sequent(self, lhs, rhs) -> Sequent:
        return self.lang.sequent(lhs, rhs)

    def _descend(self, parent: Sequent, child: Sequent):
        self.stats.measure_checks += 1
        m = self.lang.sequent_measure
        if not m(child) < m(parent):
            raise TerminationError(f"measure does not decrease: {self.lang.show_sequent(parent)} "
                                   f"to {self.lang.show_sequent(child)}")
        return self.prove(child)

    def prove(self, s: Sequent):
        r = self.memo.get(s)
        if r is None:
            self.stats.sequents += 1
            r = self._prove(s)
            self.memo[s] = r
        return r

    def _prove(self, s: Sequent):
        lang = self.lang
        lhs_atoms = [a for a in lang.sorted(s.lhs) if isinstance(a, Atom)]
        rhs_atoms = [b for b in lang.sorted(s.rhs) if isinstance(b, Atom)]
        for a in lhs_atoms:
            for b in rhs_atoms:
                if lang.leq(a, b):
                    return ProofTree(s, "Ax", data=(a, b))

        lhs, rhs = lang.sorted(s.lhs), lang.sorted(s.rhs)
        pick = lambda side, kind: next((f for f in side if isinstance(f, kind)), None)

        f = pick(lhs, And)
        if f is not None:
            return self._rule(s, "and-l", f, [self.sequent((s.lhs - {f}) | f.gens, s.rhs)])
        f = pick(rhs, Or)
        if f is not None:
            return self._rule(s, "or-r", f, [self.sequent(s.lhs, (s.rhs - {f}) | f.gens)])
        f = pick(lhs, Delta)
        if f is not None:
            idx = l_beta(lang, f.payload)
            prem = [self.sequent((s.lhs - {f}) | {nabla_of_conj(lang, phi)}, s.rhs) for phi in idx]
            return self._rule(s, "delta-l", f, prem, tuple(idx))
        f = pick(rhs, Nabla)
        if f is not None:
            idx = r_alpha(lang, f.payload)
            prem = [self.sequent(s.lhs, (s.rhs - {f}) | {delta_of_disj(lang, psi)}) for psi in idx]
            return self._rule(s, "nabla-r", f, prem, tuple(idx))
        f = pick(rhs, And)
        if f is not None:
            gens = lang.sorted(f.gens)
            prem = [self.sequent(s.lhs, (s.rhs - {f}) | {a}) for a in gens]
            return self._rule(s, "and-r", f, prem, tuple(gens))
        f = pick(lhs, Or)
        if f is not None:
            gens = lang.sorted(f.gens)
            prem = [self.sequent((s.lhs - {f}) | {a}, s.rhs) for a in gens]
            return self._rule(s, "or-l", f, prem, tuple(gens))
        return self._modal(s)

    def _rule(self, s, rule, principal, premises, data=()):
        kids = []
        for p in premises:
            r = self._descend(s, p)
            if isinstance(r, Countermodel):
                # every rule here is invertible, so a refuted premise refutes s
                return r
            kids.append(r)
        return ProofTree(s, rule, tuple(kids), principal, data)

    def _modal(self, s: Sequent):
        lang = self.lang
        self.stats.modal_steps += 1
        pi = [a.name for a in s.lhs if isinstance(a, Atom)]
        alphas = [a.payload for a in lang.sorted(s.lhs) if isinstance(a, Nabla)]
        betas = [b.payload for b in lang.sorted(s.rhs) if isinstance(b, Delta)]
        verdicts: dict = {}

        if not alphas and not betas:
            # components are all the empty sequent; treat it as refutable
            usable = lambda z: True
        else:
            def usable(z):
                if z not in verdicts:
                    verdicts[z] = self._descend(s, z_sequent(lang, z))
                return isinstance(verdicts[z], Countermodel)

        phi = find_redistribution(lang, alphas, betas, usable)
        if phi is not None:
            return self._assemble(pi, phi, verdicts)

        proved = _sorted(z for z, r in verdicts.items() if isinstance(r, ProofTree))
        keep = list(proved)
        for z in proved:
            trial = [p for p in keep if p != z]
            if find_redistribution(lang, alphas, betas, _uncovered(lang, trial)) is None:
                keep = trial
        return ProofTree(s, "nabla-delta", tuple(verdicts[z] for z in keep), None, tuple(keep))

    def _assemble(self, pi, phi, verdicts) -> Countermodel:
        """One fresh state x0 over a disjoint union of component countermodels."""
        lang = self.lang
        names = ["x0"]
        order: list = []
        structure: dict = {}
        truths: dict = {p: set() for p in lang.atoms}
        renamed: dict = {}
        point: dict = {}
        for z in _sorted(leaves(lang.dual, phi)):
            if z not in verdicts:
                # only the empty component, refuted by x0 itself
                point[z] = "x0"
                continue
            cm = verdicts[z]
            key = id(cm.model)
            if key not in renamed:
                m = cm.model
                ren = {}
                for st in m.states():
                    ren[st] = f"x{len(names)}"
                    names.append(ren[st])
                renamed[key] = ren
                inv = {v: k for k, v in ren.items()}
                order += [(ren[a], ren[b]) for a, b in m.carrier.pairs()]
                for st in m.states():
                    structure[ren[st]] = fmap(lang.functor, m.coalgebra(st), ren.__getitem__,
                                              lambda a, b, m=m, inv=inv: m.carrier.leq(inv[a], inv[b]))
                for p, sts in m.truths().items():
                    truths[p] |= {ren[t] for t in sts}
            point[z] = renamed[key][cm.state]
        carrier = FinPoset(names, order, closed=True)
        # c(x0) is phi pushed along z -> x_z, read in the opposite order
        structure["x0"] = fmap(lang.dual, phi, point.__getitem__, lambda a, b: carrier.leq(b, a))
        for p in pi:
            truths[p].add("x0")
        try:
            m = Model.build(lang.functor, carrier, structure, lang.atoms, truths, point="x0")
        except ModelError as e:
            raise AssemblyError(f"cannot assemble a countermodel: {e}") from e
        return Countermodel(m, "x0")


def _uncovered(lang, premises):
    return lambda z: not any(weakens(lang, z, p) for p in premises)


_PROVERS: dict = {}


def prover_for(lang: Language) -> Prover:
    p = _PROVERS.get(lang)
    if p is None:
        p = _PROVERS[lang] = Prover(lang)
    return p


def prove(lang: Language, s: Sequent):
    return prover_for(lang).prove(s)


def semantic_leq(lang: Language, a: Formula, b: Formula) -> bool:
    return isinstance(prove(lang, lang.sequent([a], [b])), ProofTree)


# proof checking

@dataclass
class CheckFailure:
    node: ProofTree
    reason: str


def find_invalid(lang: Language, tree: ProofTree) -> CheckFailure | None:
    """First node (preorder) that is not a correct rule instance, or None."""
    done: set = set()

    def walk(t):
        if id(t) in done:
            return None
        why = _check_node(lang, t)
        if why:
            return CheckFailure(t, why)
        for p in t.premises:
            r = walk(p)
            if r:
                return r
        done.add(id(t))
        return None

    return walk(tree)


def check_proof(lang: Language, tree: ProofTree) -> bool:
    return find_invalid(lang, tree) is None


def _check_node(lang: Language, t: ProofTree) -> str | None:
    s = t.sequent
    if t.rule not in RULES:
        return f"unknown rule {t.rule!r}"
    if s != lang.sequent(s.lhs, s.rhs):
        return "sequent is not in canonical form"
    m = lang.sequent_measure(s)
    for p in t.premises:
        pm = lang.sequent_measure(p.sequent)
        if t.rule in ("w-l", "w-r"):
            if pm > m:
                return "weakening premise has larger measure"
        elif not pm < m:
            return "premise measure does not decrease"
    roots = [p.sequent for p in t.premises]
    f = t.principal

    if t.rule == "Ax":
        if t.premises or len(t.data) != 2:
            return "axiom must have no premises"
        a, b = t.data
        if a not in s.lhs or b not in s.rhs:
            return "axiom formulas are not in the sequent"
        return None if lang.leq(a, b) else "axiom side condition fails"
    if t.rule == "w-l":
        if len(roots) != 1 or roots[0].rhs != s.rhs:
            return "bad weakening shape"
        return None if all(any(lang.leq(a, b) for a in s.lhs) for b in roots[0].lhs) else "not a weakening"
    if t.rule == "w-r":
        if len(roots) != 1 or roots[0].lhs != s.lhs:
            return "bad weakening shape"
        return None if all(any(lang.leq(b, a) for a in s.rhs) for b in roots[0].rhs) else "not a weakening"
    if t.rule == "nabla-delta":
        return _check_nabla_delta(lang, t)

    on_left = t.rule in ("and-l", "or-l", "delta-l")
    kind = {"and-l": And, "and-r": And, "or-l": Or, "or-r": Or, "delta-l": Delta, "nabla-r": Nabla}[t.rule]
    side = s.lhs if on_left else s.rhs
    if not isinstance(f, kind) or f not in side:
        return "principal formula missing or of the wrong kind"

    def put(items):
        if on_left:
            return lang.sequent((s.lhs - {f}) | set(items), s.rhs)
        return lang.sequent(s.lhs, (s.rhs - {f}) | set(items))

    if t.rule in ("and-l", "or-r"):
        expected = [put(f.gens)]
    elif t.rule in ("and-r", "or-l"):
        expected = [put([a]) for a in f.gens]
    elif t.rule == "delta-l":
        idx = l_beta(lang, f.payload)
        if set(t.data) != set(idx) or len(t.data) != len(roots):
            return "premises are not indexed by L_beta"
        expected = [put([nabla_of_conj(lang, phi)]) for phi in t.data]
        if roots != expected:
            return "delta-l premise does not match its index"
        return None
    else:
        idx = r_alpha(lang, f.payload)
        if set(t.data) != set(idx) or len(t.data) != len(roots):
            return "premises are not indexed by R_alpha"
        expected = [put([delta_of_disj(lang, psi)]) for psi in t.data]
        if roots != expected:
            return "nabla-r premise does not match its index"
        return None
    if set(roots) != set(expected) or len(roots) != len(expected):
        return "premises do not match the rule"
    return None


def _check_nabla_delta(lang: Language, t: ProofTree) -> str | None:
    s = t.sequent
    if not _reduced(s):
        return "conclusion of nabla-delta is not reduced"
    alphas = [a.payload for a in s.lhs if isinstance(a, Nabla)]
    betas = [b.payload for b in s.rhs if isinstance(b, Delta)]
    if len(t.data) != len(t.premises):
        return "components and premises are not aligned"
    bs = _Bases(lang, alphas, betas)
    for z, p in zip(t.data, t.premises):
        u, l = z
        if not (u <= frozenset(bs.v.elements) and l <= frozenset(bs.w.elements)):
            return "component is not over the bases of the modal formulas"
        if not (bs.v.is_antichain(u) and bs.w.is_antichain(l)):
            return "component is not in generator form"
        if p.sequent != z_sequent(lang, z):
            return "premise does not match its component"
    if not alphas and not betas:
        if t.data:
            return "unexpected components"
        if find_redistribution(lang, [], [], lambda z: True) is not None:
            return "some redistribution has no proved component"
        return None
    if find_redistribution(lang, alphas, betas, _uncovered(lang, list(t.data))) is not None:
        return "some redistribution has no proved component"
    return None


# printing

def format_proof(lang: Language, tree: ProofTree, indent: int = 0) -> str:
    lines: list = []

    def go(t, d):
        extra = ""
        if t.rule == "nabla-delta":
            extra = f" [{len(t.premises)} premises]"
        lines.append("  " * d + f"{t.rule}{extra}: {lang.show_sequent(t.sequent)}")
        for p in t.premises:
            go(p, d + 1)

    go(tree, indent)
    return "\n".join(lines)


def proof_to_json(lang: Language, tree: ProofTree) -> dict:
    def enc(t):
        d = {"rule": t.rule,
             "lhs": [lang.show(a) for a in lang.sorted(t.sequent.lhs)],
             "rhs": [lang.show(b) for b in lang.sorted(t.sequent.rhs)],
             "premises": [enc(p) for p in t.premises]}
        if t.principal is not None:
            d["principal"] = lang.show(t.principal)
        if t.rule == "Ax":
            d["axiom"] = [lang.show(t.data[0]), lang.show(t.data[1])]
        elif t.rule == "nabla-delta":
            d["components"] = [{"up": [lang.show(a) for a in lang.sorted(u)],
                                "down": [lang.show(b) for b in lang.sorted(l)]} for u, l in t.data]
        elif t.rule in ("nabla-r", "delta-l", "and-r", "or-l"):
            d["index"] = [show_value(x) for x in t.data]
        return d

    return enc(tree)
