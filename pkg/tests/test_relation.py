from hypothesis import given, strategies as st

from ordmoss.poset import FinPoset, MonotoneMap, chain, monotone_tables, product
from ordmoss.relation import (MonotoneRel, all_relations, compose, converse, graph_lower,
                              graph_upper, identity, is_exact_square, membership_low,
                              membership_up, negate, restrict)
from test_poset import posets


def brute_relations(src, tgt):
    """Down-closed in tgt, up-closed in src, checked pair by pair."""
    cells = [(y, x) for y in tgt for x in src]
    out = []
    for bits in range(1 << len(cells)):
        rel = {c for i, c in enumerate(cells) if bits >> i & 1}
        if all((y2, x2) in rel for (y, x) in rel for y2 in tgt.down(y) for x2 in src.up(x)):
            out.append(frozenset(rel))
    return out


@st.composite
def relations(draw, max_size=3):
    a = draw(posets(max_size))
    b = draw(posets(max_size))
    rs = all_relations(a, b)
    return draw(st.sampled_from(rs))


@given(posets(3), posets(3))
def test_all_relations_matches_brute_force(a, b):
    assert {r.pairs for r in all_relations(a, b)} == set(brute_relations(a, b))


@given(relations())
def test_identity_is_neutral(r):
    assert compose(r, identity(r.src)) == r
    assert compose(identity(r.tgt), r) == r


@given(st.data())
def test_composition_is_associative(data):
    a, b, c, d = (data.draw(posets(2)) for _ in range(4))
    r = data.draw(st.sampled_from(all_relations(a, b)))
    s = data.draw(st.sampled_from(all_relations(b, c)))
    t = data.draw(st.sampled_from(all_relations(c, d)))
    assert compose(t, compose(s, r)) == compose(compose(t, s), r)


@given(relations())
def test_converse_is_involutive(r):
    c = converse(r)
    assert c.src == r.tgt.opposite() and c.tgt == r.src.opposite()
    assert converse(c) == r


@given(relations())
def test_negation_is_complement(r):
    n = negate(r)
    assert n.src == r.src.opposite() and n.tgt == r.tgt.opposite()
    assert all(n.holds(y, x) != r.holds(y, x) for y in r.tgt for x in r.src)
    assert negate(n) == r


def test_graph_relations():
    c = chain(3)
    f = MonotoneMap(c, c, {"0": "0", "1": "0", "2": "2"})
    low, up = graph_lower(f), graph_upper(f)
    assert all(low.holds(y, x) == c.leq(y, f(x)) for y in c for x in c)
    assert all(up.holds(x, y) == c.leq(f(x), y) for y in c for x in c)


@given(relations(), st.data())
def test_restrict_matches_definition(r, data):
    a = data.draw(posets(2))
    b = data.draw(posets(2))
    fs = list(monotone_tables(a, r.src))
    gs = list(monotone_tables(b, r.tgt))
    if not fs or not gs:
        return
    f = MonotoneMap(a, r.src, data.draw(st.sampled_from(fs)))
    g = MonotoneMap(b, r.tgt, data.draw(st.sampled_from(gs)))
    res = restrict(r, f, g)
    assert all(res.holds(y, x) == r.holds(g(y), f(x)) for y in b for x in a)


@given(posets(3))
def test_membership_relations(x):
    low = membership_low(x)
    assert all(low.holds(e, l) == (e in x.down_closure(l)) for e in x for l in low.src)
    up = membership_up(x)
    assert all(up.holds(u, e) == (e in x.up_closure(u)) for e in x for u in up.tgt)
    assert converse(membership_low(x.opposite())) == membership_up(x)


def test_closure_and_validation():
    c = chain(2)
    r = MonotoneRel.closure(c, c, [("1", "0")])
    assert r.pairs == {("0", "0"), ("1", "0"), ("0", "1"), ("1", "1")}
    import pytest
    from ordmoss.poset import PosetError
    with pytest.raises(PosetError):
        MonotoneRel(c, c, [("1", "0")])


def test_exact_square_of_relation_poset():
    from ordmoss.functor import relation_poset
    c = chain(2)
    r = MonotoneRel.closure(c, c, [("0", "1")])
    e, p0, p1 = relation_poset(r)
    assert all(r.holds(*w) for w in e)
    # the comma square of the identity on a chain is exact
    idm = MonotoneMap(c, c, {v: v for v in c})
    comma = FinPoset([w for w in product(c, c) if c.leq(*w)],
                     (((a, b), (a2, b2)) for (a, b) in product(c, c) for (a2, b2) in product(c, c)
                      if c.leq(a, b) and c.leq(a2, b2) and c.leq(a, a2) and c.leq(b, b2)))
    q0 = MonotoneMap(comma, c, {w: w[0] for w in comma})
    q1 = MonotoneMap(comma, c, {w: w[1] for w in comma})
    assert is_exact_square(q0, q1, idm, idm)
