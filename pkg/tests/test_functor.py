import pytest
from hypothesis import given, settings, strategies as st

from ordmoss.catalogue import CATALOGUE, TWO
from ordmoss.functor import (Const, Dual, Exp, FunctorError, Id, Low, Prod, Sum, Up, apply_map,
                             apply_obj, base_bruteforce, base_inductive, check_element,
                             check_unit_counit, dual, elem_leq, enumerate_elements, fmap,
                             is_normalized, is_tame, lift_generic, lift_inductive, normalize,
                             normalize_dual)
from ordmoss.poset import FinPoset, MonotoneMap, chain, discrete, monotone_tables, posets_up_to_iso
from ordmoss.relation import all_relations, compose, converse, graph_lower, graph_upper
from test_poset import posets

NAMES = [n for n, _ in CATALOGUE]
SMALL = [FinPoset([])] + [p for n in (1, 2, 3) for p in posets_up_to_iso(n)]
functors = st.sampled_from([f for _, f in CATALOGUE])


def test_dual_normalization():
    f = Dual(Prod(Const(TWO), Low(Id())))
    g = normalize_dual(f)
    assert is_normalized(g)
    assert g == Prod(Const(TWO.opposite()), Up(Id()))
    assert normalize_dual(Dual(Dual(Low(Id())))) == Low(Id())
    assert dual(dual(g)) == g


@pytest.mark.parametrize("name", NAMES)
def test_dual_is_opposite_on_opposites(name):
    f = dict(CATALOGUE)[name]
    for x in SMALL:
        left = apply_obj(dual(f), x)
        right = apply_obj(f, x.opposite()).opposite()
        assert left == right


@pytest.mark.parametrize("name", NAMES)
def test_elem_leq_is_a_partial_order(name):
    f = dict(CATALOGUE)[name]
    for x in SMALL[:5]:
        els = enumerate_elements(f, x)
        lq = lambda a, b: elem_leq(f, a, b, x.leq)
        assert len(set(els)) == len(els)
        for a in els:
            assert lq(a, a)
            for b in els:
                if a != b and lq(a, b):
                    assert not lq(b, a)
                for c in els:
                    if lq(a, b) and lq(b, c):
                        assert lq(a, c)


def test_element_counts():
    x = FinPoset(["a", "b", "c"], [("a", "c")])
    assert len(apply_obj(Low(Id()), x)) == len(x.antichains())
    assert len(apply_obj(Exp(Id(), TWO), x)) == sum(1 for _ in monotone_tables(TWO, x))
    assert len(apply_obj(Prod(Id(), Const(TWO)), x)) == 6
    assert len(apply_obj(Sum(Id(), Const(TWO)), x)) == 5


@settings(max_examples=40)
@given(functors, posets(3), posets(3), st.data())
def test_fmap_is_functorial(f, a, b, data):
    hs = list(monotone_tables(a, b))
    if not hs:
        return
    h = MonotoneMap(a, b, data.draw(st.sampled_from(hs)))
    ident = MonotoneMap(a, a, {v: v for v in a})
    assert all(apply_map(f, ident)(t) == t for t in apply_obj(f, a))
    gs = list(monotone_tables(b, a))
    if gs:
        g = MonotoneMap(b, a, data.draw(st.sampled_from(gs)))
        th = apply_map(f, h)
        tg = apply_map(f, g)
        assert apply_map(f, h.then(g)) == th.then(tg)


@settings(max_examples=40)
@given(functors, posets(3), posets(3), st.data())
def test_lifting_of_graphs(f, a, b, data):
    hs = list(monotone_tables(a, b))
    if not hs:
        return
    h = MonotoneMap(a, b, data.draw(st.sampled_from(hs)))
    assert lift_inductive(f, graph_lower(h)) == graph_lower(apply_map(f, h))
    assert lift_inductive(f, graph_upper(h)) == graph_upper(apply_map(f, h))


@settings(max_examples=40)
@given(functors, posets(3), posets(3), st.data())
def test_lifting_commutes_with_converse(f, a, b, data):
    r = data.draw(st.sampled_from(all_relations(a, b)))
    assert lift_inductive(f, converse(r)) == converse(lift_inductive(dual(f), r))


@settings(max_examples=40)
@given(st.sampled_from([f for n, f in CATALOGUE if n not in ("(id*two)^d2", "up(two*id)")]), st.data())
def test_lifting_preserves_composition(f, data):
    a, b, c = (data.draw(posets(2)) for _ in range(3))
    r = data.draw(st.sampled_from(all_relations(a, b)))
    s = data.draw(st.sampled_from(all_relations(b, c)))
    assert lift_inductive(f, compose(s, r)) == compose(lift_inductive(f, s), lift_inductive(f, r))


@settings(max_examples=30)
@given(functors, posets(2), posets(2), st.data())
def test_generic_and_inductive_lifting_agree(f, a, b, data):
    r = data.draw(st.sampled_from(all_relations(a, b)))
    assert lift_generic(f, r) == lift_inductive(f, r)


def test_lifting_of_constant_times_identity():
    x = discrete(["x", "y"])
    from ordmoss.relation import MonotoneRel
    r = MonotoneRel.closure(x, x, [("y", "x")])
    lifted = lift_inductive(Prod(Const(TWO), Id()), r)
    for b in TWO:
        for a in TWO:
            for y in x:
                for xx in x:
                    assert lifted.holds((b, y), (a, xx)) == (TWO.leq(b, a) and r.holds(y, xx))


@pytest.mark.parametrize("name", NAMES)
def test_unit_and_counit(name):
    f = dict(CATALOGUE)[name]
    for x in posets_up_to_iso(3):
        r = check_unit_counit(f, x)
        assert r["unit_ok"] and r["counit_ok"]


def test_base_examples():
    x = chain(3)
    assert base_inductive(Const(TWO), "0", x).members == frozenset()
    assert base_inductive(Id(), "2", x).members == {"2"}
    t = (frozenset({"1"}), "0")
    f = Prod(Low(Id()), Const(TWO))
    assert base_inductive(f, t, x).members == {"1"}
    assert base_inductive(f, t, x) == base_bruteforce(f, t, x)


def test_check_element_and_normalize():
    x = chain(3)
    f = Low(Id())
    assert check_element(f, frozenset({"0", "2"}), lambda s: s in x, x.leq)
    assert normalize(f, frozenset({"0", "2"}), x.leq) == frozenset({"2"})
    assert normalize(Up(Id()), frozenset({"0", "2"}), x.leq) == frozenset({"0"})
    assert check_element(Exp(Id(), TWO), _fn({"0": "2", "1": "0"}), lambda s: s in x, x.leq)


def _fn(d):
    from ordmoss.poset import Fn
    return Fn(tuple(d.items()))


def test_fmap_renormalizes():
    # a and b are incomparable, their images are not
    c = chain(2)
    h = {"a": "0", "b": "1"}
    assert fmap(Low(Id()), frozenset({"a", "b"}), h.__getitem__, c.leq) == frozenset({"1"})


def test_tameness_and_errors():
    assert all(is_tame(f) for _, f in CATALOGUE)
    with pytest.raises(FunctorError):
        apply_obj(Dual(Id()), chain(1))
