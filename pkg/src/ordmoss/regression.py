"""Worked examples with known answers, run by ``ordmoss selftest``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .calculus import ProofTree, check_proof, format_proof, prove, r_alpha
from .functor import (Const, Id, Low, Prod, Up, base_bruteforce, base_inductive,
                      lift_generic, lift_inductive)
from .logic import language
from .poset import FinPoset, chain, product
from .relation import MonotoneRel


@dataclass
class Case:
    name: str
    run: Callable[[], str | None]  # None on success, else a reason


def _nabla_empty():
    lang = language(FinPoset([], name="At"), Up(Id()))
    s = lang.sequent([lang.nabla(frozenset())], [lang.nabla(frozenset({lang.bot}))])
    t = prove(lang, s)
    if not isinstance(t, ProofTree):
        return "not provable"
    if t.rules_preorder() != ["nabla-r", "nabla-delta"] or t.premises[0].premises:
        return "unexpected trace:\n" + format_proof(lang, t)
    return None if check_proof(lang, t) else "proof does not check"


def _r_alpha_bot():
    lang = language(FinPoset([], name="At"), Up(Id()))
    want = [frozenset({frozenset({lang.bot})})]
    for method in ("inductive", "generic"):
        got = r_alpha(lang, frozenset({lang.bot}), method)
        if got != want:
            return f"{method}: got {got}"
    return None


def _chain_language():
    return language(FinPoset(["b", "c"], name="At"), Prod(Const(chain(10, "N")), Id()))


def _r_alpha_chain():
    lang = _chain_language()
    bc = lang.conj([lang.atom("b"), lang.atom("c")])
    got = set(r_alpha(lang, ("5", bc)))
    want = {(str(k), frozenset()) for k in range(5)}
    want |= {(str(k), frozenset({bc})) for k in range(10)}
    return None if got == want else f"got {sorted(map(str, got))}"


def _chain_proof():
    lang = _chain_language()
    b, c = lang.atom("b"), lang.atom("c")
    s = lang.sequent([lang.nabla(("3", b)), lang.nabla(("8", c))],
                     [lang.nabla(("5", lang.conj([b, c])))])
    t = prove(lang, s)
    if not isinstance(t, ProofTree) or not check_proof(lang, t):
        return "not provable"
    # 10 + 5 indices; only the two with n >= 8 need a component premise
    nontrivial = sum(1 for p in t.premises if p.premises)
    if len(t.premises) != 15 or nontrivial != 2:
        return "unexpected shape:\n" + format_proof(lang, t)
    return None


def _lifting_product():
    a = chain(2)
    x = FinPoset(["x", "y"])
    r = MonotoneRel.closure(x, x, [("y", "x")])
    f = Prod(Const(a), Id())
    lifted = lift_generic(f, r)
    for (bb, yy) in product(a, x):
        for (aa, xx) in product(a, x):
            want = a.leq(bb, aa) and r.holds(yy, xx)
            if lifted.holds((bb, yy), (aa, xx)) != want:
                return f"mismatch at {(bb, yy)}, {(aa, xx)}"
    return None if lifted == lift_inductive(f, r) else "engines disagree"


def _bases():
    x = chain(3)
    for f, t, want in [(Const(chain(2)), "1", set()),
                       (Id(), "1", {"1"}),
                       (Low(Id()), frozenset({"1"}), {"1"}),
                       (Low(Id()), frozenset(), set())]:
        got = base_inductive(f, t, x)
        if set(got.members) != want or got != base_bruteforce(f, t, x):
            return f"base of {t!r} under {f}: {set(got.members)}"
    return None


CASES = [
    Case("nabla-empty proof", _nabla_empty),
    Case("R_alpha of {bot}", _r_alpha_bot),
    Case("R_alpha over a chain constant", _r_alpha_chain),
    Case("chain-constant proof", _chain_proof),
    Case("lifting of A x Id", _lifting_product),
    Case("bases of const, id, low", _bases),
]


def run_all() -> list:
    out = []
    for case in CASES:
        t0 = time.perf_counter()
        try:
            why = case.run()
        except Exception as e:  # report, don't crash the corpus
            why = f"{type(e).__name__}: {e}"
        out.append((case.name, why, time.perf_counter() - t0))
    return out
