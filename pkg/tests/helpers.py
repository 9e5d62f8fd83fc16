"""Random objects and brute-force oracles used across the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb

from weyljanet import Element, Monomial, WeylAlgebra, deg
from weyljanet.algebra import mul_monomial
from weyljanet.graded import exponent_vectors
from weyljanet.linalg import Echelon
from weyljanet.linsolve import ShiftedMatrix


def random_coeff(rng: random.Random, bound: int = 5) -> Fraction:
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    if rng.random() < 0.2:
        return Fraction(c, rng.randint(1, 4))
    return Fraction(c)


def random_element(rng: random.Random, ring: WeylAlgebra, max_deg: int, terms: int, rank: int = 1,
                   homogeneous_degree: int | None = None) -> Element:
    out = {}
    for _ in range(terms):
        d = homogeneous_degree if homogeneous_degree is not None else rng.randint(0, max_deg)
        exps = rng.choice(exponent_vectors(ring, d))
        out[Monomial(rng.randrange(rank), exps)] = random_coeff(rng)
    return Element(ring, out, rank)


def random_combination(rng: random.Random, gens, max_deg: int, terms: int = 3) -> Element:
    """``sum_i c_i a_i`` with random left multipliers keeping the degree at most max_deg."""
    ring, rank = gens[0].ring, gens[0].rank
    acc = ring.zero(rank)
    for g in gens:
        room = max_deg - deg(g)
        if room < 0:
            continue
        c = random_element(rng, ring, room, terms)
        acc = acc + c * g
    return acc


def span_echelon(gens, top: int, ring: WeylAlgebra, rank: int) -> tuple[Echelon, dict]:
    """Echelon form of all monomial multiples ``mu * g`` with ``deg(mu * g) <= top``."""
    index: dict = {}
    ech = Echelon()
    for g in gens:
        dg = deg(g)
        if dg is None:
            continue
        for k in range(top - dg + 1):
            for e in exponent_vectors(ring, k):
                ech.insert(_vec(mul_monomial(e, g), index))
    return ech, index


def _vec(terms: dict, index: dict) -> dict:
    return {index.setdefault(m, len(index)): c for m, c in terms.items()}


def in_span(f: Element, ech: Echelon, index: dict) -> bool:
    if any(m not in index for m in f._terms):
        # a monomial never reached by any multiple: not in the span unless zero
        return not f._terms
    return ech.contains(_vec(f._terms, index))


def affine_member(f: Element, gens, slack: int) -> bool:
    """Membership of f in the left module generated by gens, allowing multiples up to ``deg f + slack``.

    For slack at least the saturation exponent this is exact.
    """
    if not f._terms:
        return True
    ech, index = span_echelon(gens, deg(f) + slack, f.ring, f.rank)
    return in_span(f, ech, index)


def quotient_dim_affine(gens, ring, rank, m, slack) -> int:
    """``dim A_m^l - dim I_m`` with I_m taken as (multiples up to degree m + slack) cap A_m.

    ``dim (V cap W) = dim V - rank(projection of V onto the monomials of degree > m)``.
    """
    ech, index = span_echelon(gens, m + slack, ring, rank)
    high = {c for mono, c in index.items() if sum(mono.exps) > m}
    proj = Echelon()
    for row in ech.rows.values():
        proj.insert({c: a for c, a in row.items() if c in high})
    inside = ech.dim - proj.dim
    return rank * comb(m + 2 * ring.n, 2 * ring.n) - inside


def random_homogeneous(rng, ring, d, terms):
    if d < 0:
        return ring.zero()
    return random_element(rng, ring, d, terms, homogeneous_degree=d)


def random_shifted_matrix(rng: random.Random, n: int, k: int, l: int, d: int, max_terms: int = 3,
                          zero_prob: float = 0.1) -> ShiftedMatrix:
    """Random k x l matrix with ``deg b_ij = d_i - d'_j < d`` and sparse entries."""
    ring = WeylAlgebra(n, homogenized=True)
    while True:
        cs = [rng.randint(0, d - 1) for _ in range(l)]
        spread = max(cs) - min(cs)
        if spread > d - 1:
            continue
        rows = []
        for _ in range(k):
            di = max(cs) + rng.randint(0, d - 1 - spread)
            rows.append([ring.zero() if rng.random() < zero_prob else
                         random_homogeneous(rng, ring, di - c, rng.randint(1, max_terms)) for c in cs])
        if k and all(not a._terms for r in rows for a in r):
            continue
        return ShiftedMatrix.from_rows(rows, ring, l=l)


def random_monomial_ideal(rng: random.Random, nvars: int, count: int, max_deg: int):
    out = []
    for _ in range(count):
        d = rng.randint(0, max_deg)
        e = [0] * nvars
        for _ in range(d):
            e[rng.randrange(nvars)] += 1
        out.append(tuple(e))
    return out


# degreewise oracle for Z b = u, built without the solver's own system code

def _qq_rank(rows: list[dict], ncols: int) -> int:
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix
    rows = [r for r in rows if r]
    if not rows or not ncols:
        return 0
    dense = [[QQ(0)] * ncols for _ in rows]
    for i, r in enumerate(rows):
        for c, a in r.items():
            dense[i][c] = QQ(a.numerator, a.denominator)
    return DomainMatrix(dense, (len(rows), ncols), QQ).rank()


def left_images(b: ShiftedMatrix, level: int):
    """Images ``mu * (row i of b)`` for all monomials mu with ``deg mu = level - d_i``."""
    ring = b.ring
    index: dict = {}
    rows = []
    for i, di in enumerate(b.row_shifts):
        if level - di < 0:
            continue
        for e in exponent_vectors(ring, level - di):
            mu = ring.monomial(e)
            img = {}
            for j, a in enumerate(b.entries[i]):
                for m, c in (mu * a)._terms.items():
                    img[index.setdefault((j, m.exps), len(index))] = c
            rows.append(img)
    return rows, index


def oracle_nullity(b: ShiftedMatrix, level: int) -> int:
    rows, index = left_images(b, level)
    return len(rows) - _qq_rank(rows, len(index))


def oracle_solvable(b: ShiftedMatrix, u, level: int) -> bool:
    rows, index = left_images(b, level)
    target = {}
    for j, a in enumerate(u):
        for m, c in a._terms.items():
            target[index.setdefault((j, m.exps), len(index))] = c
    n = len(index)
    return _qq_rank(rows, n) == _qq_rank(rows + [target], n)
