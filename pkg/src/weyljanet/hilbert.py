"""Hilbert functions and polynomials of quotients of free modules, and Macaulay constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .algebra import Element, Monomial, WeylAlgebra, deg
from .errors import AmbientMismatch
from .graded import (compositions, filtered_dimensions, gr_generators, graded_piece, homogenize,
                     piece_dimension, saturate_x0, saturation_order)
from .janet import JanetBasis

SOURCES = ("affine", "homogenized", "commutative", "gr")


@dataclass(frozen=True)
class HilbertData:
    """Values ``H(m)`` for ``m = 0..len(values)-1`` of a quotient module.

    ``poly_coeffs`` lists the Hilbert polynomial from the constant term up;
    it and ``stabilization_index`` are None when no stable window was found.
    """

    values: tuple
    source: str
    stabilization_index: int | None = None
    poly_coeffs: tuple | None = None
    max_degree: int | None = None

    def poly(self, m: int) -> Fraction:
        if self.poly_coeffs is None:
            raise ValueError("Hilbert polynomial unknown")
        return poly_eval(self.poly_coeffs, m)


def binomial(a: int, b: int) -> int:
    """C(a, b) with the value 0 when a < b or a < 0."""
    if b < 0 or a < 0 or a < b:
        return 0
    return comb(a, b)


def poly_eval(coeffs: Sequence, m) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * m + c
    return acc


def _trim(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def interpolate(points: Sequence[tuple[int, int]]) -> tuple:
    """Coefficients (constant term first) of the interpolating polynomial."""
    k = len(points)
    out = [Fraction(0)] * k
    for a, (xa, ya) in enumerate(points):
        basis = [Fraction(1)]
        den = Fraction(1)
        for b, (xb, _) in enumerate(points):
            if a == b:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xb * basis[t + 1]
            den *= xa - xb
        for t, c in enumerate(basis):
            out[t] += ya * c / den
    return _trim(out)


def hilbert_polynomial(values: Sequence[int], degree_bound: int, checks: int | None = None):
    """``(coeffs, stabilization_index)`` or ``(None, None)`` if no stable window exists.

    Finds the least start s whose degree-``degree_bound`` interpolant through
    ``values[s..s+degree_bound]`` reproduces every later value, demanding at
    least ``checks`` (default ``degree_bound // 2 + 2``) extra matches, then
    walks back to the first index from which values and polynomial agree.
    """
    if checks is None:
        checks = degree_bound // 2 + 2
    width = degree_bound + 1
    vals = list(values)
    for s in range(len(vals) - width - checks + 1):
        coeffs = interpolate([(m, vals[m]) for m in range(s, s + width)])
        if all(poly_eval(coeffs, m) == vals[m] for m in range(s + width, len(vals))):
            start = s
            while start > 0 and poly_eval(coeffs, start - 1) == vals[start - 1]:
                start -= 1
            return coeffs, start
    return None, None


def _data(values, source, degree_bound) -> HilbertData:
    coeffs, stab = hilbert_polynomial(values, degree_bound)
    return HilbertData(tuple(values), source, stab, coeffs)


def default_mmax(generators: Sequence[Element], rank: int) -> int:
    d = max((deg(g) or 0 for g in generators), default=0)
    return 4 * max(d, 1) * rank + 8


# commutative counting --------------------------------------------------------


def c_shadow(basis: JanetBasis) -> list[Element]:
    """Leading monomials of a complete homogeneous basis of hI, as elements of cA^l."""
    if not basis.complete:
        raise ValueError("c_shadow needs a complete basis")
    ring = basis.ring.graded()
    return [Element(ring, {m: Fraction(1)}, basis.rank, _trusted=True) for m in basis.leading_monomials()]


def standard_monomial_count(leads: Sequence[Monomial], ring: WeylAlgebra, m: int, rank: int) -> int:
    """Number of degree-m monomials of ``ring^rank`` outside the monomial module ``leads``."""
    if m < 0:
        return 0
    k = ring.nexps if ring.homogenized else ring.nexps - 1
    by_pos: dict[int, list] = {}
    for lm in leads:
        by_pos.setdefault(lm.pos, []).append(lm.exps if ring.homogenized else lm.exps[1:])
    total = 0
    for v in range(rank):
        gens = by_pos.get(v, [])
        for e in compositions(k, m):
            if not any(all(a <= b for a, b in zip(g, e)) for g in gens):
                total += 1
    return total


# the four sources ----------------------------------------------------------------


def _ring_rank(generators, ring, rank):
    for g in generators:
        if ring is None:
            ring = g.ring
        if rank is None:
            rank = g.rank
        if g.ring != ring or g.rank != rank:
            raise AmbientMismatch("generators live in different modules")
    if ring is None:
        raise ValueError("empty generator list needs an explicit ring")
    return ring, 1 if rank is None else rank


def hilbert_function(generators: Sequence[Element], source: str = "affine", m_max: int | None = None,
                     order=None, *, ring: WeylAlgebra | None = None, rank: int | None = None,
                     saturation=None, **caps) -> HilbertData:
    """Tabulate ``H(M, m)`` for ``M = A^l / I`` with I generated by ``generators`` in A.

    ``affine`` counts the filtered pieces of I directly; ``homogenized`` the
    graded pieces of the saturated homogenization; ``commutative`` the
    standard monomials of its leading monomials; ``gr`` the graded pieces of
    the associated graded module (these are first differences of the others).
    """
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}")
    ring, rank = _ring_rank(generators, ring, rank)
    if ring.homogenized or ring.commutative:
        raise AmbientMismatch("hilbert_function expects generators of a submodule of A^l")
    gens = [g for g in generators if g._terms]
    if m_max is None:
        m_max = default_mmax(gens, rank)
    hring = ring.homogenization()
    if saturation is None:
        saturation = saturate_x0([homogenize(g) for g in gens], order, ring=hring, rank=rank, **caps)
    sat = list(saturation.generators)
    n = ring.n

    if source == "affine":
        dims = filtered_dimensions(gens, m_max, saturation.N, ring=ring, rank=rank)
        values = [rank * comb(m + 2 * n, 2 * n) - dims[m] for m in range(m_max + 1)]
    elif source == "homogenized":
        values = [piece_dimension(hring, m, rank) - graded_piece(sat, m, ring=hring, rank=rank).dim
                  for m in range(m_max + 1)]
    elif source == "commutative":
        basis = saturation.basis
        if order is not None and saturation_order(order) != basis.order:
            raise ValueError("saturation basis was computed for another order")
        leads = basis.leading_monomials()
        values = [standard_monomial_count(leads, hring.graded(), m, rank) for m in range(m_max + 1)]
    else:
        gring = ring.graded()
        grs = gr_generators(sat)
        values = [piece_dimension(gring, m, rank) - graded_piece(grs, m, ring=gring, rank=rank).dim
                  for m in range(m_max + 1)]
    return _data(values, source, 2 * n)


# monomial ideals in F[X0..Xn] --------------------------------------------------


def _minimalize(gens: Sequence[tuple]) -> list[tuple]:
    gens = sorted(set(tuple(g) for g in gens), key=lambda g: (sum(g), g))
    out: list[tuple] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def minimal_generators(gens: Sequence[tuple]) -> list[tuple]:
    """Minimal generating set of a monomial ideal given by exponent vectors."""
    return _minimalize(gens)


def hilbert_numerator(gens: Sequence[tuple], nvars: int) -> dict[int, int]:
    """Numerator ``N(t)`` of the Hilbert series ``N(t)/(1-t)^nvars`` of ``F[x]/(gens)``.

    Recursion ``N(I + (g)) = N(I) - t^|g| N(I : g)`` over the minimal generators.
    """
    gens = _minimalize(gens)

    def rec(gs: tuple) -> dict[int, int]:
        if not gs:
            return {0: 1}
        if any(sum(g) == 0 for g in gs):
            return {}
        if len(gs) == 1:
            return {0: 1, sum(gs[0]): -1}
        *rest, g = gs
        rest = tuple(rest)
        out = dict(rec(rest))
        colon = tuple(_minimalize([tuple(max(a - b, 0) for a, b in zip(h, g)) for h in rest]))
        dg = sum(g)
        for k, c in rec(colon).items():
            out[k + dg] = out.get(k + dg, 0) - c
        return {k: c for k, c in out.items() if c}

    if len(gens) and len(gens[0]) != nvars:
        raise ValueError("exponent vectors must have nvars entries")
    return rec(tuple(gens))


def graded_hilbert(gens: Sequence[tuple], nvars: int, m: int) -> int:
    """``dim (F[x]/(gens))_m`` from the Hilbert series numerator."""
    num = hilbert_numerator(gens, nvars)
    return sum(c * binomial(m - k + nvars - 1, nvars - 1) for k, c in num.items())


def graded_hilbert_direct(gens: Sequence[tuple], nvars: int, m: int) -> int:
    """Same count by enumerating standard monomials (independent cross-check)."""
    gens = _minimalize(gens)
    return sum(1 for e in compositions(nvars, m)
               if not any(all(a <= b for a, b in zip(g, e)) for g in gens))


@dataclass(frozen=True)
class MacaulayConstants:
    """``b = (b_0, ..., b_{n+2})`` for a monomial ideal of ``F[X0..Xn]``.

    The Hilbert function of the quotient is read degreewise (dimension of the
    degree-m piece).
    """

    b: tuple
    nvars: int
    generators: tuple

    @property
    def n(self) -> int:
        return self.nvars - 1

    def formula(self, m: int) -> int:
        """``C(m+n+1, n+1) - 1 - sum_j C(m - b_j + j - 1, j)``."""
        n = self.n
        return (comb(m + n + 1, n + 1) - 1
                - sum(_poly_binomial(m - self.b[j] + j - 1, j) for j in range(1, n + 2)))

    def h(self, m: int) -> int:
        """Excess of the true value over the formula."""
        return graded_hilbert(self.generators, self.nvars, m) - self.formula(m)


def _poly_binomial(a: int, b: int) -> int:
    """C(a, b) as the degree-b polynomial in a (so C(-1, 2) = 1)."""
    num = 1
    for t in range(b):
        num *= a - t
    return num // factorial(b)


def _binomial_poly(shift: int, j: int) -> list[Fraction]:
    """Coefficients in m of ``C(m + shift, j)``."""
    p = [Fraction(1)]
    for t in range(j):
        c = shift - t
        q = [Fraction(0)] * (len(p) + 1)
        for i, a in enumerate(p):
            q[i] += a * c
            q[i + 1] += a
        p = q
    f = factorial(j)
    return [a / f for a in p]


def macaulay_constants(gens: Sequence[tuple], nvars: int, *, scan_limit: int | None = None) -> MacaulayConstants:
    """Fit the Macaulay constants of the monomial ideal ``(gens)`` in ``nvars`` variables.

    ``b_{n+1}, ..., b_1`` come from the Hilbert polynomial by descending
    recursion on the coefficient of ``m^(j-1)``; ``b_0`` is the least
    ``d >= b_1`` from which on the formula is exact, found by scanning.
    """
    gens = tuple(_minimalize(gens))
    n = nvars - 1
    num = hilbert_numerator(gens, nvars)
    # Hilbert polynomial sum_k c_k C(m - k + n, n) as coefficients in m
    poly = [Fraction(0)] * (n + 2)
    for k, c in num.items():
        for i, a in enumerate(_binomial_poly(n - k, n)):
            poly[i] += c * a
    r = [-a for a in poly]
    for i, a in enumerate(_binomial_poly(n + 1, n + 1)):
        r[i] += a
    r[0] -= 1
    b = [0] * (n + 3)
    for j in range(n + 1, 0, -1):
        if j == 1:
            bj = -r[0]
        else:
            bj = Fraction(j - 1, 2) + 1 - factorial(j - 1) * r[j - 1]
        if bj.denominator != 1:
            raise ArithmeticError("non-integral Macaulay constant")
        b[j] = int(bj)
        for i, a in enumerate(_binomial_poly(j - 1 - b[j], j)):
            r[i] -= a
    if any(r):
        raise ArithmeticError("Hilbert polynomial is not of Macaulay form")
    # the numerator formula equals the polynomial for m >= deg N - n
    top = max(num, default=0)
    stable = max(top - n, b[1], 0)
    if scan_limit is not None:
        stable = min(stable, scan_limit)
    mc = MacaulayConstants(tuple(b), nvars, gens)
    # least d >= b_1 with the formula exact for every m >= d
    d = stable
    while d > b[1] and mc.formula(d - 1) == graded_hilbert(gens, nvars, d - 1):
        d -= 1
    b[0] = d
    return MacaulayConstants(tuple(b), nvars, gens)
