import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyljanet import AdmissibleOrder, WeylAlgebra, compare, hdt, induce, leading, parse_order
from weyljanet.algebra import Monomial
from weyljanet.graded import exponent_vectors
from weyljanet.order import format_order

A1 = WeylAlgebra(1)
H1 = WeylAlgebra(1, homogenized=True)
A2 = WeylAlgebra(2)

CATALOG = [AdmissibleOrder(b, None, m) for b in ("deglex", "degrevlex") for m in ("TOP", "POT")] + [
    AdmissibleOrder("deglex", (2, 0, 3, 1), "TOP", (1, 0)),
    AdmissibleOrder("degrevlex", (3, 2, 1, 0), "POT", (1, 0)),
]


def mono(e, pos=0):
    return Monomial(pos, tuple(e))


def test_degree_dominates():
    assert compare(AdmissibleOrder(), mono((0, 1, 1)), mono((0, 0, 1))) == 1


def test_reflexive():
    m = mono((0, 2, 1))
    assert compare(AdmissibleOrder(), m, m) == 0


def test_induced_example():
    o = induce(AdmissibleOrder())
    assert compare(o, mono((1, 0, 0)), mono((0, 1, 0))) == -1


def test_induced_x0_only_difference():
    o = induce(AdmissibleOrder("degrevlex"))
    assert compare(o, mono((1, 1, 0)), mono((2, 1, 0))) == -1


def test_hdt_examples():
    x, d = A1.x(1), A1.d(1)
    m, c = leading(x * d + 1, AdmissibleOrder())
    assert m == mono((0, 1, 1)) and c == 1
    assert hdt(A1.zero(), AdmissibleOrder()) == A1.zero()
    f = 3 * x * x + 5 * d * d
    assert hdt(f, AdmissibleOrder("degrevlex")) == 5 * d * d


@pytest.mark.parametrize("order", CATALOG, ids=format_order)
def test_orders_are_total_and_admissible(order):
    rng = random.Random(3)
    mons = [Monomial(p, (0,) + e[1:]) for d in range(4) for e in exponent_vectors(A2, d) for p in (0, 1)]
    keys = {m: order.key(m) for m in mons}
    assert len(set(keys.values())) == len(mons)
    for _ in range(400):
        a, b = rng.sample(mons, 2)
        t = rng.choice(exponent_vectors(A2, rng.randint(0, 2)))
        shift = lambda m: Monomial(m.pos, tuple(x + y for x, y in zip(m.exps, t)))
        # translation invariance
        assert (keys[a] < keys[b]) == (order.key(shift(a)) < order.key(shift(b)))
        # divisibility implies <=
        assert order.key(a) <= order.key(shift(a))


@pytest.mark.parametrize("order", CATALOG[:4], ids=format_order)
def test_induced_restricts_to_base_and_is_translation_invariant(order):
    ind = induce(order)
    mons = [Monomial(p, e) for d in range(4) for e in exponent_vectors(WeylAlgebra(2, True), d) for p in (0, 1)]
    flat = [m for m in mons if m.exps[0] == 0]
    for a, b in itertools.combinations(flat, 2):
        assert (order.key(a) < order.key(b)) == (ind.key(a) < ind.key(b))
    for a, b in itertools.combinations(mons, 2):
        up = lambda m: Monomial(m.pos, (m.exps[0] + 1,) + m.exps[1:])
        assert (ind.key(a) < ind.key(b)) == (ind.key(up(a)) < ind.key(up(b)))


def element(ring, draw_terms):
    from fractions import Fraction
    from weyljanet.algebra import Element
    return Element(ring, {Monomial(0, (0,) + e): Fraction(c) for e, c in draw_terms})


exps = st.tuples(*[st.integers(0, 2)] * 4)
terms = st.lists(st.tuples(exps, st.integers(-3, 3).filter(bool)), min_size=1, max_size=4)


@given(terms, terms, st.sampled_from(CATALOG[:4]))
@settings(max_examples=60, deadline=None)
def test_leading_monomial_is_multiplicative(ta, tb, order):
    a, f = element(A2, ta), element(A2, tb)
    if not a or not f:
        return
    la, _ = leading(a, order)
    lf, _ = leading(f, order)
    lp, _ = leading(a * f, order)
    assert lp.exps == tuple(x + y for x, y in zip(la.exps, lf.exps))


@given(terms, terms, terms)
@settings(max_examples=40, deadline=None)
def test_products_preserve_order_of_elements(ta, t1, t2):
    order = AdmissibleOrder()
    a, f1, f2 = element(A2, ta), element(A2, t1), element(A2, t2)
    if not a or not f1 or not f2:
        return
    l1, _ = leading(f1, order)
    l2, _ = leading(f2, order)
    if l1 == l2:
        return
    m1, _ = leading(a * f1, order)
    m2, _ = leading(a * f2, order)
    assert (order.key(l1) < order.key(l2)) == (order.key(m1) < order.key(m2))


def test_parse_and_format_round_trip():
    text = "degrevlex;vars=x1<x2<d1<d2;module=POT;pos=2>1"
    o = parse_order(text, 2)
    assert format_order(o) == text
    assert parse_order(format_order(o), 2) == o


@pytest.mark.parametrize("bad", ["lex", "deglex;module=XYZ", "deglex;vars=x1<d3", "deglex;foo=1"])
def test_parse_order_rejects(bad):
    with pytest.raises(ValueError):
        parse_order(bad, 1)
