import random
from itertools import product as _product

import pytest
from hypothesis import given, settings, strategies as st

from ordmoss.catalogue import CATALOGUE, TWO
from ordmoss.functor import Const, Id, Low, Prod, Up, apply_obj, elem_leq, lift_generic
from ordmoss.logic import Delta, Nabla
from ordmoss.model import (Coalgebra, Model, ModelError, enumerate_models, eval_monotonicity_check,
                           valuation_from_sets, valuations)
from ordmoss.poset import FinPoset, PosetError, chain, discrete, posets_up_to_iso
from ordmoss.randgen import random_formula, random_model
from ordmoss.relation import MonotoneRel

ATOMS = FinPoset(["p", "q"], [("p", "q")], name="At")
SMALL = [(n, f) for n, f in CATALOGUE if n not in ("(id*two)^d2", "up(two*id)", "low(id+1)")]
seeds = st.integers(0, 10**6)


@pytest.mark.parametrize("name,f", SMALL)
@given(seed=seeds)
@settings(max_examples=15)
def test_truth_is_monotone(name, f, seed):
    rng = random.Random(seed)
    m = random_model(rng, f, ATOMS, max_states=3)
    pool = [random_formula(rng, m.lang, 2) for _ in range(10)]
    r = eval_monotonicity_check(m, pool)
    assert r["ok"], r


def _sat_relations(m, pool):
    """The forcing relation and its complement over a finite formula poset."""
    lang = m.lang
    fp = FinPoset(pool, [(a, b) for a in pool for b in pool if lang.leq(a, b)], closed=True)
    sat = MonotoneRel(fp, m.carrier.opposite(),
                      [(x, a) for x in m.states() for a in pool if m.satisfies(x, a)])
    unsat = MonotoneRel(fp.opposite(), m.carrier,
                        [(x, a) for x in m.states() for a in pool if not m.satisfies(x, a)])
    return fp, sat, unsat


@pytest.mark.parametrize("name,f", [c for c in SMALL if c[0] in ("id", "two*id", "low", "up", "id+1")])
@given(seed=seeds)
@settings(max_examples=10)
def test_modalities_agree_with_generic_lifting(name, f, seed):
    rng = random.Random(seed)
    m = random_model(rng, f, discrete(["p"], name="At"), max_states=2)
    lang = m.lang
    pool = list({random_formula(rng, lang, 1, max_width=1) for _ in range(4)} | {lang.atom("p")})
    pool = sorted(set(pool) | {b for a in pool for b in lang.subformulas(a)}, key=lang.show)
    fp, sat, unsat = _sat_relations(m, pool)
    lifted_sat = lift_generic(lang.dual, sat)
    lifted_unsat = lift_generic(lang.functor, unsat)
    for alpha in apply_obj(lang.dual, fp):
        for x in m.states():
            assert m.satisfies(x, Nabla(alpha)) == lifted_sat.holds(m.coalgebra(x), alpha)
    for beta in apply_obj(lang.functor, fp.opposite()):
        for x in m.states():
            assert m.satisfies(x, Delta(beta)) == (not lifted_unsat.holds(m.coalgebra(x), beta))


def _brute_model_count(f, atoms, n_max):
    total = 0
    for n in range(1, n_max + 1):
        for carrier in posets_up_to_iso(n):
            tx = list(apply_obj(f, carrier))
            xs = carrier.elements
            maps = 0
            for values in _product(tx, repeat=len(xs)):
                t = dict(zip(xs, values))
                maps += all(elem_leq(f, t[a], t[b], carrier.leq)
                            for a in xs for b in xs if carrier.leq(a, b))
            ups = [frozenset(s) for s in _subsets(xs)
                   if all(y in s for x in s for y in carrier.up(x))]
            vals = sum(all(u[a] <= u[b] for a in atoms for b in atoms if atoms.leq(a, b))
                       for u in (dict(zip(atoms.elements, c)) for c in _product(ups, repeat=len(atoms))))
            total += maps * vals
    return total


def _subsets(xs):
    for bits in _product([0, 1], repeat=len(xs)):
        yield [x for x, b in zip(xs, bits) if b]


@pytest.mark.parametrize("f", [Id(), Low(Id()), Prod(Const(TWO), Id()), Up(Id())], ids=str)
def test_enumerated_models_match_brute_force_count(f):
    atoms = ATOMS
    assert sum(1 for _ in enumerate_models(f, 2, atoms)) == _brute_model_count(f, atoms, 2)


def test_enumerated_valuations_are_monotone():
    for carrier in posets_up_to_iso(3):
        vs = list(valuations(ATOMS, carrier))
        assert len(set(vs)) == len(vs)
        for v in vs:
            MonotoneRel(v.src, v.tgt, v.pairs)


def test_invalid_coalgebras_are_rejected():
    x = chain(2)
    with pytest.raises(ModelError, match="not monotone"):
        Coalgebra(Id(), x, {"0": "1", "1": "0"})
    with pytest.raises(ModelError, match="no structure"):
        Coalgebra(Id(), x, {"0": "1"})
    with pytest.raises(ModelError, match="canonical"):
        Coalgebra(Low(Id()), x, {"0": frozenset({"0", "1"}), "1": frozenset({"1"})})
    with pytest.raises(ModelError):
        Coalgebra(Id(), x, {"0": "z", "1": "1"})


def test_invalid_valuations_are_rejected():
    x = chain(2)
    co = Coalgebra(Id(), x, {"0": "0", "1": "1"})
    # p holds at 0 but not at the larger state 1
    bad = MonotoneRel(ATOMS, x.opposite(), [("0", "p"), ("0", "q")], check=False)
    with pytest.raises(PosetError):
        Model(co, ATOMS, bad)
    with pytest.raises(ModelError):
        valuation_from_sets(ATOMS, x, {"r": {"0"}})
    with pytest.raises(ModelError):
        Model(co, ATOMS, valuation_from_sets(ATOMS, x, {}), point="7")


def test_valuation_closure_follows_both_orders():
    x = chain(3)
    v = valuation_from_sets(ATOMS, x, {"p": {"1"}})
    assert v.pairs == {("1", "p"), ("2", "p"), ("1", "q"), ("2", "q")}


def test_small_worked_model():
    # lowersets read as diamonds: 0 has no successor, 1 sees itself
    x = chain(2)
    m = Model.build(Low(Id()), x, {"0": frozenset(), "1": frozenset({"1"})}, discrete(["p"]),
                    {"p": {"1"}})
    lang = m.lang
    p = lang.atom("p")
    assert m.extension(lang.nabla(frozenset())) == {"0", "1"}
    assert m.extension(lang.nabla(frozenset({p}))) == {"1"}
    assert m.extension(lang.delta(frozenset())) == {"1"}
    assert m.extension(lang.delta(frozenset({p}))) == {"1"}
    assert m.refutes("0", [lang.top], [p])
