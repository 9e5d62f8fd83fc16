import random
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from weyljanet.cones import (Cone, basis_degree, basis_degree_bound, decompose, degree_chain_holds, direct_count,
                             epsilon_coefficients, hilbert_from_cones, predecessor_violations)
from weyljanet.hilbert import binomial

from helpers import random_monomial_ideal


def test_line_complement():
    dec = decompose([(0, (0, 1))], 2)
    assert dec.cones == [Cone(0, ((1, 0),), 2)]
    assert dec.t == {1: 1} and dec.k == {1: 0}
    assert [hilbert_from_cones(dec, z) for z in range(6)] == [z + 1 for z in range(6)]


def test_two_points():
    dec = decompose([(0, (2, 0)), (0, (0, 1))], 2)
    assert sorted(dec.cones) == [Cone(0, ((0, 0), (1, 0)), 2), Cone(0, ((0, 1), (1, 0)), 2)]
    assert dec.t == {0: 2} and dec.k == {0: 1}
    assert [hilbert_from_cones(dec, z) for z in range(5)] == [1, 2, 2, 2, 2]


def test_all_variables_leave_origins():
    dec = decompose([(k, e) for k in range(2) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))], 3, 2)
    assert dec.t == {0: 2} and all(c.degree == 0 for c in dec.cones)


def test_free_module_is_one_cone():
    dec = decompose([], 3)
    assert dec.cones == [Cone(0, (), 3)]
    assert [hilbert_from_cones(dec, z) for z in range(6)] == [binomial(z + 3, 3) for z in range(6)]


def test_epsilon_examples():
    a, b = Cone(0, ((0, 0),), 2), Cone(0, ((0, 1),), 2)
    assert epsilon_coefficients([a, b]) == {a: 1, b: 1}
    h, v = Cone(0, ((1, 0),), 2), Cone(0, ((0, 0),), 2)
    eps = epsilon_coefficients([h, v])
    assert eps[Cone(0, ((0, 0), (1, 0)), 2)] == -1
    assert epsilon_coefficients([h]) == {h: 1}


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_decomposition_properties(seed):
    rng = random.Random(seed)
    n, l = rng.randint(1, 3), rng.randint(1, 2)
    gens = [(rng.randrange(l), e) for e in random_monomial_ideal(rng, n, rng.randint(1, 6), 5)]
    dec = decompose(gens, n, l)
    side = 8
    for k in range(l):
        for u in product(range(side), repeat=n):
            assert dec.multiplicity(k, u) == int(dec.in_complement(k, u))
    for z in range(12):
        assert hilbert_from_cones(dec, z) == direct_count(dec, z)
    assert predecessor_violations(dec) == []
    assert degree_chain_holds(dec)
    assert basis_degree(dec) <= basis_degree_bound(dec)
