import random

import pytest
from hypothesis import given, settings, strategies as st

from ordmoss.calculus import (AssemblyError, Countermodel, ProofTree, Prover, check_proof,
                              find_redistribution, format_proof, is_redistribution, l_beta,
                              model_redistribution, prove, r_alpha, redistributions, semantic_leq,
                              z_sequent)
from ordmoss.catalogue import CATALOGUE, TWO
from ordmoss.functor import Const, Exp, Id, Low, Prod, Up, enumerate_elements, leaves
from ordmoss.logic import language
from ordmoss.model import enumerate_models
from ordmoss.poset import FinPoset, Fn, discrete
from ordmoss.randgen import random_formula, random_model, random_sequent

ATOMS = FinPoset(["p", "q"], [("p", "q")], name="At")
ONE_ATOM = discrete(["p"], name="At")
LIGHT = [Id(), Low(Id()), Up(Id()), Prod(Const(TWO), Id())]
seeds = st.integers(0, 10**6)


def payloads(lang, rng, n=3):
    pool = [random_formula(rng, lang, 1, max_width=1) for _ in range(3)]
    fp = lang.poset_of(set(pool))
    els = enumerate_elements(lang.dual, fp, 2)
    return [rng.choice(els) for _ in range(n)] if els else []


@pytest.mark.parametrize("name,f", [c for c in CATALOGUE if c[0] in
                                    ("id", "two*id", "id*id", "id+1", "low", "up", "dual(two*id)")])
@given(seed=seeds)
@settings(max_examples=10)
def test_index_sets_match_generic_lifting(name, f, seed):
    lang = language(ATOMS, f)
    for a in payloads(lang, random.Random(seed)):
        assert sorted(map(repr, r_alpha(lang, a))) == sorted(map(repr, r_alpha(lang, a, "generic")))
        assert sorted(map(repr, l_beta(lang, a))) == sorted(map(repr, l_beta(lang, a, "generic")))


def _refuted_in(lang, models):
    def usable(z):
        s = z_sequent(lang, z)
        return any(m.refutes(x, s.lhs, s.rhs) for m in models for x in m.states())
    return usable


@pytest.mark.parametrize("f", LIGHT, ids=str)
@given(seed=seeds)
@settings(max_examples=15)
def test_solver_agrees_with_enumeration(f, seed):
    rng = random.Random(seed)
    lang = language(ONE_ATOM, f)
    ps = payloads(lang, rng, 3)
    alphas, betas = ps[:rng.randint(0, 2)], ps[2:]
    models = [random_model(rng, f, ONE_ATOM, 2) for _ in range(2)]
    usable = _refuted_in(lang, models)
    rs = redistributions(lang, alphas, betas)
    assert all(is_redistribution(lang, phi, alphas, betas) for phi in rs)
    brute = any(all(usable(z) for z in leaves(lang.dual, phi)) for phi in rs)
    found = find_redistribution(lang, alphas, betas, usable)
    assert (found is not None) == brute
    if found is not None:
        assert is_redistribution(lang, found, alphas, betas)
        assert all(usable(z) for z in leaves(lang.dual, found))


@pytest.mark.parametrize("f", LIGHT, ids=str)
@given(seed=seeds)
@settings(max_examples=15)
def test_refuting_state_yields_redistribution(f, seed):
    rng = random.Random(seed)
    m = random_model(rng, f, ONE_ATOM, 3)
    lang = m.lang
    ps = payloads(lang, rng, 4)
    for x in m.states():
        alphas = [a for a in ps[:2] if m.satisfies(x, lang.nabla(a))]
        betas = [b for b in ps[2:] if not m.satisfies(x, lang.delta(b))]
        phi = model_redistribution(m, x, alphas, betas)
        assert is_redistribution(lang, phi, alphas, betas)
        # components are read off successors of x, which refute them
        assert all(_refuted_in(lang, [m])(z) for z in leaves(lang.dual, phi))


def test_identity_axiom_and_atomic_countermodel():
    lang = language(ATOMS, Low(Id()))
    p, q = lang.atom("p"), lang.atom("q")
    t = prove(lang, lang.sequent([p], [q]))
    assert isinstance(t, ProofTree) and t.rule == "Ax"
    r = prove(lang, lang.sequent([q], [p]))
    assert isinstance(r, Countermodel)
    assert r.model.refutes(r.state, [q], [p])


def test_proof_search_is_deterministic():
    lang = language(ATOMS, Prod(Const(TWO), Id()))
    rng = random.Random(5)
    for _ in range(20):
        s = random_sequent(rng, lang)
        a, b = Prover(lang).prove(s), Prover(lang).prove(s)
        assert type(a) is type(b)
        if isinstance(a, ProofTree):
            assert format_proof(lang, a) == format_proof(lang, b)


@pytest.mark.parametrize("f", LIGHT, ids=str)
def test_verdicts_are_sound_on_small_models(f):
    lang = language(ONE_ATOM, f)
    models = list(enumerate_models(f, 2, ONE_ATOM))
    rng = random.Random(17)
    for _ in range(25):
        s = random_sequent(rng, lang, 1, 2)
        r = prove(lang, s)
        if isinstance(r, ProofTree):
            assert check_proof(lang, r)
            for t in r.nodes():
                assert not any(m.refutes(x, t.sequent.lhs, t.sequent.rhs) for m in models for x in m.states())
        else:
            assert r.model.refutes(r.state, s.lhs, s.rhs)


@pytest.mark.parametrize("f", LIGHT, ids=str)
def test_premises_of_proofs_are_provable(f):
    lang = language(ONE_ATOM, f)
    rng = random.Random(23)
    prover = Prover(lang)
    for _ in range(25):
        s = random_sequent(rng, lang, 1, 2)
        r = prover.prove(s)
        if isinstance(r, Countermodel):
            continue
        for t in r.nodes():
            for k in t.premises:
                assert isinstance(prover.prove(k.sequent), ProofTree)


def test_bottom_and_top_bounds():
    lang = language(ATOMS, Up(Id()))
    rng = random.Random(3)
    for _ in range(10):
        a = random_formula(rng, lang, 2)
        assert semantic_leq(lang, lang.bot, a)
        assert semantic_leq(lang, a, lang.top)
    # a singleton disjunction of bottom is not the same formula, but equivalent
    wrapped = lang.disj([lang.conj([lang.bot])])
    assert wrapped != lang.bot
    assert semantic_leq(lang, wrapped, lang.bot) and semantic_leq(lang, lang.bot, wrapped)


def test_ordered_exponent_countermodel_cannot_be_assembled():
    lang = language(ONE_ATOM, Exp(Id(), TWO))
    p = lang.atom("p")
    d = lang.delta(Fn((("0", lang.conj([p])), ("1", lang.conj([p])))))
    n = lang.nabla(Fn((("0", p), ("1", p))))
    with pytest.raises(AssemblyError):
        Prover(lang).prove(lang.sequent([d], [n]))
