import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyljanet import AmbientMismatch, WeylAlgebra, deg, degrees, multiply, ord_x0
from weyljanet.algebra import Element, Monomial, is_homogeneous

from helpers import random_homogeneous

A1 = WeylAlgebra(1)
H1 = WeylAlgebra(1, homogenized=True)


def rewrite_product(ring, a_exps, b_exps):
    """Normal order ``m_a * m_b`` by applying ``D X = X D + c`` one swap at a time."""
    n = ring.n
    c = {"x0sq": ring.homogenized}
    # words are lists of letters (kind, var); kind 0 = x, 1 = d, 2 = x0
    def word(e):
        w = [(2, 0)] * e[0]
        for v in range(n):
            w += [(0, v)] * e[1 + v]
        for v in range(n):
            w += [(1, v)] * e[1 + n + v]
        return w
    todo = [(Fraction(1), word(a_exps) + word(b_exps))]
    out = {}
    while todo:
        coef, w = todo.pop()
        for p in range(len(w) - 1):
            (k1, v1), (k2, v2) = w[p], w[p + 1]
            if k1 == 1 and k2 in (0, 2):
                swapped = w[:p] + [w[p + 1], w[p]] + w[p + 2:]
                todo.append((coef, swapped))
                if k2 == 0 and v1 == v2:
                    extra = [(2, 0), (2, 0)] if c["x0sq"] else []
                    todo.append((coef, w[:p] + extra + w[p + 2:]))
                break
            if k1 == 0 and k2 == 2:
                todo.append((coef, w[:p] + [w[p + 1], w[p]] + w[p + 2:]))
                break
        else:
            e = [0] * ring.nexps
            for k, v in w:
                e[0 if k == 2 else (1 + v if k == 0 else 1 + n + v)] += 1
            key = Monomial(0, tuple(e))
            out[key] = out.get(key, 0) + coef
    return Element(ring, out)


def test_relation_in_affine():
    d, x = A1.d(1), A1.x(1)
    assert d * x == x * d + 1


def test_relation_in_homogenized():
    d, x, x0 = H1.d(1), H1.x(1), H1.x(0)
    assert d * x == x * d + x0 * x0


def test_normal_ordered_product_unchanged():
    x, d = A1.x(1), A1.d(1)
    assert x * d == A1.monomial((0, 1, 1))


def test_d_squared_times_x():
    x, d = A1.x(1), A1.d(1)
    assert d * d * x == x * d * d + 2 * d


def test_plumbing_examples():
    x, d = A1.x(1), A1.d(1)
    assert (x + 1) + (-x) == A1.one()
    assert x + A1.zero() == x
    assert 2 * (Fraction(1, 2) * d) == d


def test_degrees_examples():
    x0, x, d = H1.x(0), H1.x(1), H1.d(1)
    f = x * d + x0 * x0
    assert (deg(f), ord_x0(f)) == (2, 0)
    g = x0 ** 3 * d
    assert (deg(g), ord_x0(g)) == (4, 3)
    z = degrees(H1.zero())
    assert z.deg is None and z.ord_x0 is None


def test_vector_degrees_are_max_and_min():
    v = H1.vector([H1.x(0) * H1.d(1), H1.x(1) ** 3])
    info = degrees(v)
    assert info.deg == 3 and info.ord_x0 == 0


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        A1.x(1) * H1.x(1)
    with pytest.raises(AmbientMismatch):
        A1.x(1) + WeylAlgebra(2).x(1)


def test_zero_coefficients_dropped():
    f = Element(A1, {Monomial(0, (0, 1, 0)): 0, Monomial(0, (0, 0, 1)): 2})
    assert len(f) == 1


exps_n2 = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@given(exps_n2, exps_n2, st.booleans())
@settings(max_examples=60, deadline=None)
def test_closed_formula_matches_rewriting(a, b, hom):
    ring = WeylAlgebra(2, homogenized=hom)
    ea, eb = (int(hom),) + a, (0,) + b
    if not hom:
        ea = (0,) + a
    pa, pb = ring.monomial(ea), ring.monomial(eb)
    assert multiply(pa, pb) == rewrite_product(ring, ea, eb)


def element_strategy(ring, max_deg=3, max_terms=4):
    from weyljanet.graded import exponent_vectors
    mons = [e for d in range(max_deg + 1) for e in exponent_vectors(ring, d)]
    term = st.tuples(st.sampled_from(mons), st.integers(-4, 4).filter(bool))
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda ts: Element(ring, {Monomial(0, e): Fraction(c) for e, c in ts}))


H2 = WeylAlgebra(2, homogenized=True)
A2 = WeylAlgebra(2)


@given(element_strategy(A2), element_strategy(A2), element_strategy(A2))
@settings(max_examples=40, deadline=None)
def test_associativity_and_distributivity(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(element_strategy(H2), element_strategy(H2))
@settings(max_examples=40, deadline=None)
def test_no_zero_divisors_and_degree_additivity(a, b):
    if a and b:
        p = a * b
        assert p
        assert deg(p) == deg(a) + deg(b)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_homogeneous_products_stay_homogeneous(da, db, seed):
    rnd = random.Random(seed)
    a = random_homogeneous(rnd, H2, da, 3)
    b = random_homogeneous(rnd, H2, db, 3)
    p = a * b
    assert is_homogeneous(p)
    if p:
        assert deg(p) == da + db


def test_mixed_generators_commute():
    for ring in (WeylAlgebra(3), WeylAlgebra(3, homogenized=True)):
        gens = [ring.x(v) for v in range(1, 4)] + [ring.d(v) for v in range(1, 4)]
        for a in gens:
            for b in gens:
                comm = a * b - b * a
                same = any(a == ring.d(v) and b == ring.x(v) for v in range(1, 4))
                opp = any(a == ring.x(v) and b == ring.d(v) for v in range(1, 4))
                unit = ring.x(0) * ring.x(0) if ring.homogenized else ring.one()
                want = unit if same else (-unit if opp else ring.zero())
                assert comm == want
