"""Homogenization, graded pieces, gr(I) generators and X0-saturation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .algebra import Element, Monomial, WeylAlgebra, deg, is_homogeneous, mul_monomial, ord_x0, shift_x0
from .errors import AmbientMismatch, ResourceLimitError
from .janet import DEFAULT_MAX_DEGREE, DEFAULT_MAX_SIZE, JanetBasis, autoreduce, complete, normal_form
from .linalg import Echelon
from .order import AdmissibleOrder, InducedOrder

# homogenization ------------------------------------------------------------


def homogenize(z: Element, degree: int | None = None) -> Element:
    """``sum c * X0^(deg z - |m|) * m``; ``degree`` pads to a larger total degree."""
    ring = z.ring
    if ring.homogenized:
        raise AmbientMismatch("element is already in the homogenized algebra")
    top = deg(z)
    if top is None:
        return Element(ring.homogenization(), {}, z.rank, _trusted=True)
    if degree is not None:
        if degree < top:
            raise ValueError("target degree below the element degree")
        top = degree

    def fn(m):
        e = list(m.exps)
        e[0] = top - sum(e)
        return Monomial(m.pos, tuple(e))

    return z.map_terms(ring.homogenization(), fn)


def dehomogenize(z: Element) -> Element:
    """Substitute X0 = 1."""
    ring = z.ring
    if not ring.homogenized:
        raise AmbientMismatch("element is not in the homogenized algebra")
    return z.map_terms(ring.affine(), lambda m: Monomial(m.pos, (0,) + m.exps[1:]))


def homogenize_matrix(rows: Sequence[Sequence[Element]]) -> tuple[list[list[Element]], list[int]]:
    """Homogenize each row as a vector; returns the matrix and the row degrees."""
    out, shifts = [], []
    for row in rows:
        top = max((d for d in (deg(a) for a in row) if d is not None), default=0)
        out.append([homogenize(a, top) if deg(a) is not None else
                    Element(a.ring.homogenization(), {}, 1, _trusted=True) for a in row])
        shifts.append(top)
    return out, shifts


def dehomogenize_matrix(rows: Sequence[Sequence[Element]]) -> list[list[Element]]:
    return [[dehomogenize(a) for a in row] for row in rows]


# monomial enumeration ------------------------------------------------------


@lru_cache(maxsize=None)
def compositions(k: int, m: int) -> tuple:
    """All length-k tuples of nonnegative ints summing to m, in lex-descending order."""
    if k == 0:
        return ((),) if m == 0 else ()
    if k == 1:
        return ((m,),)
    out = []
    for a in range(m, -1, -1):
        for rest in compositions(k - 1, m - a):
            out.append((a,) + rest)
    return tuple(out)


def exponent_vectors(ring: WeylAlgebra, m: int) -> list[tuple]:
    """Full exponent vectors (x0 slot included) of all ring monomials of degree m."""
    if m < 0:
        return []
    if ring.homogenized:
        return list(compositions(ring.nexps, m))
    return [(0,) + c for c in compositions(ring.nexps - 1, m)]


def monomials(ring: WeylAlgebra, m: int, rank: int = 1) -> list[Monomial]:
    return [Monomial(v, e) for v in range(rank) for e in exponent_vectors(ring, m)]


def piece_dimension(ring: WeylAlgebra, m: int, rank: int = 1) -> int:
    """dim of the degree-m piece of ``ring^rank`` (graded rings) in closed form."""
    from math import comb
    if m < 0:
        return 0
    k = ring.nexps if ring.homogenized else ring.nexps - 1
    return rank * comb(m + k - 1, k - 1)


# graded pieces -------------------------------------------------------------


class _ColumnMap:
    """Monomial -> column index, with pivot (smallest index) the leading monomial."""

    def __init__(self, mons: Sequence[Monomial], order=None):
        if order is not None:
            mons = sorted(mons, key=order.key, reverse=True)
        self.mons = list(mons)
        self.index = {m: c for c, m in enumerate(self.mons)}

    def vec(self, terms: dict) -> dict:
        idx = self.index
        return {idx[m]: c for m, c in terms.items()}

    def element(self, ring, rank, vec: dict) -> Element:
        mons = self.mons
        return Element(ring, {mons[c]: a for c, a in vec.items()}, rank, _trusted=True)


def _column_order(ring: WeylAlgebra):
    o = AdmissibleOrder()
    return o.induce() if ring.homogenized else o


class GradedPieceBasis:
    """F-basis of the degree-m piece of a graded submodule of ``ring^rank``."""

    def __init__(self, degree: int, ring: WeylAlgebra, rank: int, echelon: Echelon, columns: _ColumnMap):
        self.degree = degree
        self.ring = ring
        self.rank = rank
        self._echelon = echelon
        self._columns = columns
        self._elements = None

    @property
    def dim(self) -> int:
        return self._echelon.dim

    def __len__(self):
        return self._echelon.dim

    @property
    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(self._columns.element(self.ring, self.rank, r)
                                   for _, r in sorted(self._echelon.rows.items()))
        return self._elements

    def leading_monomials(self) -> list[Monomial]:
        return [self._columns.mons[p] for p in sorted(self._echelon.rows)]

    def contains(self, f: Element) -> bool:
        if f.ring != self.ring or f.rank != self.rank:
            raise AmbientMismatch("element and graded piece live in different modules")
        if not f._terms:
            return True
        if any(sum(m.exps) != self.degree for m in f._terms):
            return False
        return self._echelon.contains(self._columns.vec(f._terms))


def _ambient(generators, ring, rank):
    gens = [g for g in generators if g._terms]
    for g in generators:
        if ring is None:
            ring = g.ring
        if rank is None:
            rank = g.rank
        if g.ring != ring or g.rank != rank:
            raise AmbientMismatch("generators live in different modules")
    if ring is None:
        raise ValueError("empty generator list needs an explicit ring")
    return gens, ring, (1 if rank is None else rank)


def graded_piece(generators: Sequence[Element], m: int, *, ring: WeylAlgebra | None = None,
                 rank: int | None = None) -> GradedPieceBasis:
    """Degree-m piece of the module generated by homogeneous ``generators``.

    Spans every monomial left multiple of every generator landing in degree m
    and row-reduces over Q. Works in hA and in the commutative rings.
    """
    gens, ring, rank = _ambient(generators, ring, rank)
    if not ring.homogenized and not ring.commutative:
        raise ValueError("graded pieces need a graded ring (hA or a commutative one)")
    for g in gens:
        if not is_homogeneous(g):
            raise ValueError("graded_piece needs homogeneous generators")
    cols = _ColumnMap(monomials(ring, m, rank), _column_order(ring))
    ech = Echelon()
    for g in gens:
        k = m - deg(g)
        for e in exponent_vectors(ring, k):
            ech.insert(cols.vec(mul_monomial(e, g)))
    return GradedPieceBasis(m, ring, rank, ech, cols)


def filtered_dimensions(generators: Sequence[Element], top: int, shift: int = 0, *,
                        ring: WeylAlgebra | None = None, rank: int | None = None) -> list[int]:
    """``dim ((sum_i A_{m+shift} a_i) cap A_m)`` for m = 0..top in the affine algebra.

    One echelon form of all monomial multiples up to degree ``top + shift``
    with columns sorted by descending degree: the rows whose pivot has degree
    at most m span the intersection with A_m.
    """
    gens, ring, rank = _ambient(generators, ring, rank)
    if ring.homogenized:
        raise ValueError("filtered pieces are taken in the affine algebra")
    big = top + shift
    mons = [mm for d in range(big, -1, -1)
            for mm in sorted(monomials(ring, d, rank), key=AdmissibleOrder().key, reverse=True)]
    cols = _ColumnMap(mons)
    ech = Echelon()
    for g in gens:
        dg = deg(g)
        for k in range(big - dg, -1, -1):
            for e in exponent_vectors(ring, k):
                ech.insert(cols.vec(mul_monomial(e, g)))
    counts = [0] * (big + 1)
    for p in ech.rows:
        counts[sum(cols.mons[p].exps)] += 1
    out, acc = [], 0
    for d in range(top + 1):
        acc += counts[d]
        out.append(acc)
    return out


# associated graded ---------------------------------------------------------


def top_form(z: Element) -> Element:
    """Highest-degree part of an affine element, read in the commutative ring gr(A)."""
    top = deg(z)
    ring = z.ring.graded()
    if top is None:
        return Element(ring, {}, z.rank, _trusted=True)
    return Element(ring, {m: c for m, c in z._terms.items() if sum(m.exps) == top}, z.rank, _trusted=True)


def gr_generators(generators: Sequence[Element]) -> list[Element]:
    """``gr(a(b))`` for homogeneous ``b`` generating a saturated module of hA^l."""
    out = []
    for b in generators:
        if not b.ring.homogenized:
            raise AmbientMismatch("gr_generators expects elements of the homogenized algebra")
        if not is_homogeneous(b):
            raise ValueError("gr_generators needs homogeneous elements")
        g = top_form(dehomogenize(b))
        if g._terms:
            out.append(g)
    return out


# saturation ----------------------------------------------------------------


@dataclass(frozen=True)
class SaturationResult:
    """Generators of ``J0 : X0^inf`` with the exponent N at which the chain stops."""

    N: int
    generators: tuple
    trace: tuple
    basis: JanetBasis | None = None
    j0_basis: JanetBasis | None = field(default=None, repr=False, compare=False)


def saturation_order(order) -> InducedOrder:
    """Induced order of the TOP variant of ``order``.

    Term-over-position keeps the order degree compatible, so the leading
    monomial of a homogeneous element carries the least X0 power and the
    X0-order of an element can be read from the basis.
    """
    if order is None:
        order = AdmissibleOrder()
    if isinstance(order, InducedOrder):
        order = order.base
    if order.module != "TOP":
        order = AdmissibleOrder(order.base, order.precedence, "TOP", order.positions)
    return order.induce()


def saturate_x0(generators: Sequence[Element], order=None, *, ring: WeylAlgebra | None = None,
                rank: int | None = None, max_rounds: int = 16, max_n: int = 64,
                max_degree: int = DEFAULT_MAX_DEGREE, max_size: int = DEFAULT_MAX_SIZE) -> SaturationResult:
    """Saturate the module J0 generated by homogeneous ``generators`` with respect to X0.

    Complete, strip ``X0^ord g`` from every reduced basis element, recomplete,
    until nothing is stripped. N is then the least exponent with
    ``X0^N * g`` in J0 for every returned generator, found by membership.
    """
    gens, ring, rank = _ambient(generators, ring, rank)
    if not ring.homogenized:
        raise AmbientMismatch("saturation lives in the homogenized algebra")
    for g in gens:
        if not is_homogeneous(g):
            raise ValueError("saturate_x0 needs homogeneous generators")
    order = saturation_order(order)
    caps = dict(max_degree=max_degree, max_size=max_size)
    j0 = complete(gens, order, ring=ring, rank=rank, **caps)
    basis = autoreduce(j0)
    trace = [len(basis)]
    for _ in range(max_rounds):
        ords = [ord_x0(g) for g in basis.elements]
        if not any(ords):
            break
        stripped = [shift_x0(g, -k) for g, k in zip(basis.elements, ords)]
        basis = autoreduce(complete(stripped, order, ring=ring, rank=rank, **caps))
        trace.append(len(basis))
    else:
        raise ResourceLimitError(f"saturation did not stabilize in {max_rounds} rounds",
                                 cap="rounds", value=max_rounds)

    n_exp = 0
    for g in basis.elements:
        nu = n_exp
        while not normal_form(shift_x0(g, nu), j0).is_zero():
            nu += 1
            if nu > max_n:
                raise ResourceLimitError(f"saturation exponent exceeds cap {max_n}", cap="N", value=nu)
        n_exp = nu
    return SaturationResult(n_exp, basis.elements, tuple(trace), basis, j0)


def is_x0_saturated(basis: JanetBasis) -> bool:
    """True when no reduced basis element is divisible by X0 (the fixpoint test)."""
    return all(ord_x0(g) == 0 for g in basis.elements)
