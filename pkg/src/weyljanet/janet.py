"""Normal forms, Janet-basis completion and reduced bases for submodules of R^l.

"Janet basis" here means a family whose leading monomials generate the
leading-monomial module of the submodule (a left Groebner basis); it is not
Janet's involutive division.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from math import gcd
from typing import Iterable, Sequence

from .algebra import Element, Monomial, is_homogeneous, mono_mul
from .errors import AmbientMismatch, ResourceLimitError
from .order import AdmissibleOrder, InducedOrder, leading

log = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 64
DEFAULT_MAX_SIZE = 4096


def _negkey(key):
    if isinstance(key, tuple):
        return tuple(_negkey(k) for k in key)
    return -key


def _integral(terms) -> tuple[dict, Fraction]:
    """Clear denominators: returns integer terms ``t`` and ``s`` with ``terms = s * t``."""
    den = 1
    for c in terms.values():
        d = c.denominator if isinstance(c, Fraction) else 1
        if d != 1:
            den = den * d // gcd(den, d)
    t = {m: int(c * den) for m, c in terms.items()}
    g = 0
    for c in t.values():
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        t = {m: c // g for m, c in t.items()}
    return t, Fraction(g, den) if t else Fraction(1)


class _Reducer:
    """Division against a family with cached monomial multiples.

    Divisors are stored as primitive integer term maps and reduction is
    fraction free, so no gcd is paid per coefficient operation.
    """

    def __init__(self, elements: Sequence[Element], order):
        self.order = order
        self.terms: list[dict] = []
        self.leads: list[tuple[Monomial, int]] = []
        self.by_pos: dict[int, list[int]] = {}
        self.ring = None
        self._multiples: dict[tuple[int, tuple], dict] = {}
        self._negkeys: dict[Monomial, tuple] = {}
        for g in elements:
            self.append(g._terms, g.ring)

    def append(self, terms: dict, ring) -> int:
        if not terms:
            raise ValueError("cannot divide by zero")
        self.ring = ring
        t, _ = _integral(terms)
        lm = max(t, key=self.order.key)
        if t[lm] < 0:
            t = {m: -c for m, c in t.items()}
        idx = len(self.terms)
        self.terms.append(t)
        self.leads.append((lm, t[lm]))
        self.by_pos.setdefault(lm.pos, []).append(idx)
        return idx

    def deactivate(self, idx: int):
        self.by_pos[self.leads[idx][0].pos].remove(idx)

    def negkey(self, m: Monomial):
        k = self._negkeys.get(m)
        if k is None:
            k = _negkey(self.order.key(m))
            self._negkeys[m] = k
        return k

    def divisor(self, m: Monomial, active=None) -> int | None:
        e = m.exps
        for idx in self.by_pos.get(m.pos, ()):
            if active is not None and idx not in active:
                continue
            le = self.leads[idx][0].exps
            if all(a <= b for a, b in zip(le, e)):
                return idx
        return None

    def multiple(self, idx: int, cof: tuple) -> dict:
        key = (idx, cof)
        t = self._multiples.get(key)
        if t is None:
            ring = self.ring
            t = {}
            for mb, cb in self.terms[idx].items():
                pos = mb.pos
                for e, k in mono_mul(ring.n, ring.kind, cof, mb.exps):
                    mm = Monomial(pos, e)
                    s = t.get(mm, 0) + cb * k
                    if s:
                        t[mm] = s
                    else:
                        del t[mm]
            self._multiples[key] = t
        return t

    def reduce(self, terms: dict, *, full: bool = True, active=None) -> tuple[dict, Fraction]:
        """Remainder of ``terms`` after division, as ``(integer terms, scale)``."""
        f, scale = _integral(terms)
        heap = [(self.negkey(m), m) for m in f]
        heapq.heapify(heap)
        queued = set(f)
        rem: dict[Monomial, int] = {}
        steps = 0
        while heap:
            _, m = heapq.heappop(heap)
            queued.discard(m)
            c = f.get(m)
            if c is None:
                continue
            idx = self.divisor(m, active)
            if idx is None:
                rem[m] = f.pop(m)
                if not full:
                    rem.update(f)
                    break
                continue
            lm, lc = self.leads[idx]
            cof = tuple(a - b for a, b in zip(m.exps, lm.exps))
            g = gcd(c, lc)
            a, q = lc // g, c // g
            if a != 1:
                for k in f:
                    f[k] *= a
                for k in rem:
                    rem[k] *= a
                scale /= a
            for mm, cc in self.multiple(idx, cof).items():
                s = f.get(mm, 0) - q * cc
                if s:
                    f[mm] = s
                    if mm not in queued:
                        queued.add(mm)
                        heapq.heappush(heap, (self.negkey(mm), mm))
                else:
                    f.pop(mm, None)
            steps += 1
            if a != 1 and steps % 8 == 0:
                cont = 0
                for v in (f, rem):
                    for x in v.values():
                        cont = gcd(cont, x)
                        if cont == 1:
                            break
                if cont > 1:
                    for v in (f, rem):
                        for k in v:
                            v[k] //= cont
                    scale *= cont
        return rem, scale


@dataclass(frozen=True)
class JanetBasis:
    """A family of module elements together with the order it refers to."""

    elements: tuple
    order: object
    complete: bool = False
    reduced: bool = False
    homogeneous: bool = False
    ring: object = None
    rank: int = 1
    _reducer: list = field(default_factory=list, compare=False, hash=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def reducer(self) -> _Reducer:
        if not self._reducer:
            self._reducer.append(_Reducer(self.elements, self.order))
        return self._reducer[0]

    def leading_monomials(self) -> list[Monomial]:
        return [lt[0] for lt in self.reducer().leads]

    def contains(self, f: Element) -> bool:
        return normal_form(f, self).is_zero()


def _resolve_order(order, ring):
    if order is None:
        order = AdmissibleOrder()
    if isinstance(order, AdmissibleOrder) and ring.homogenized:
        order = order.induce()
    if isinstance(order, InducedOrder) and not ring.homogenized:
        order = order.base
    return order


def normal_form(f: Element, basis: JanetBasis, order=None) -> Element:
    """Fully reduced remainder of f modulo a complete basis.

    The result has no monomial in the leading-monomial module; for a complete
    basis it is the unique such representative of f.
    """
    if not basis.complete:
        raise ValueError("normal_form needs a complete basis")
    if basis.ring is not None and (f.ring != basis.ring or f.rank != basis.rank):
        raise AmbientMismatch("element and basis live in different modules")
    if order is not None and _resolve_order(order, f.ring) != basis.order:
        raise ValueError("normal_form order differs from the basis order")
    if not f._terms or not basis.elements:
        return f
    rem, scale = basis.reducer().reduce(f._terms)
    return Element(f.ring, {m: c * scale for m, c in rem.items()}, f.rank, _trusted=True)


def _monic(terms: dict, order) -> dict:
    lm = max(terms, key=order.key)
    c = Fraction(terms[lm])
    return {m: a / c for m, a in terms.items()}


def _check_ambient(generators: Sequence[Element]):
    ring, rank = generators[0].ring, generators[0].rank
    for g in generators:
        if g.ring != ring or g.rank != rank:
            raise AmbientMismatch("generators live in different modules")
    return ring, rank


def complete(generators: Iterable[Element], order=None, *, ring=None, rank: int | None = None,
             max_degree: int = DEFAULT_MAX_DEGREE, max_size: int = DEFAULT_MAX_SIZE) -> JanetBasis:
    """Buchberger-style completion adapted to the Weyl commutation rule.

    S-pairs are formed only between elements whose leading monomials share a
    position; the cofactors are the commutative lcm quotients multiplied from
    the left. Pairs are processed lowest lcm degree first, FIFO on ties.
    An element whose leading monomial becomes divisible by a newer one is
    taken out and queued again for reduction.
    """
    gens = [g for g in generators]
    if gens:
        ring, rank = _check_ambient(gens)
    elif ring is None:
        raise ValueError("empty generator list needs an explicit ring")
    rank = 1 if rank is None else rank
    order = _resolve_order(order, ring)
    if ring.homogenized and not all(is_homogeneous(g) for g in gens):
        log.debug("inhomogeneous generators in the homogenized algebra")

    red = _Reducer([], order)
    red.ring = ring
    alive: set[int] = set()
    queue: list = []
    tick = count()

    def add(terms: dict):
        lm = max(terms, key=order.key)
        if lm.degree > max_degree:
            raise ResourceLimitError(f"basis element of degree {lm.degree} exceeds cap {max_degree}",
                                     cap="degree", value=lm.degree)
        if len(alive) >= max_size:
            raise ResourceLimitError(f"basis size exceeds cap {max_size}", cap="size", value=len(alive) + 1)
        for i in list(red.by_pos.get(lm.pos, ())):
            if lm.divides(red.leads[i][0]):
                red.deactivate(i)
                alive.discard(i)
                heapq.heappush(queue, (red.leads[i][0].degree, next(tick), -1, i, None))
        j = red.append(terms, ring)
        alive.add(j)
        for i in red.by_pos[lm.pos]:
            if i == j:
                continue
            lcm = tuple(max(a, b) for a, b in zip(red.leads[i][0].exps, lm.exps))
            heapq.heappush(queue, (sum(lcm), next(tick), i, j, lcm))

    for g in gens:
        if g._terms:
            heapq.heappush(queue, (deg_lead(g, order), next(tick), -2, g._terms, None))

    while queue:
        degree, _, i, j, lcm = heapq.heappop(queue)
        if degree > max_degree:
            raise ResourceLimitError(f"S-pair of degree {degree} exceeds cap {max_degree}",
                                     cap="degree", value=degree)
        if i == -2:
            s = j
        elif i == -1:
            s = red.terms[j]
        else:
            if i not in alive or j not in alive:
                continue
            (mi, ci), (mj, cj) = red.leads[i], red.leads[j]
            s = {}
            for idx, m, q in ((i, mi, cj), (j, mj, -ci)):
                cof = tuple(a - b for a, b in zip(lcm, m.exps))
                for mm, cc in red.multiple(idx, cof).items():
                    v = s.get(mm, 0) + q * cc
                    if v:
                        s[mm] = v
                    else:
                        del s[mm]
            if not s:
                continue
        r, _ = red.reduce(s)
        if r:
            add(r)

    basis = tuple(Element(ring, _monic(red.terms[i], order), rank, _trusted=True) for i in sorted(alive))
    return JanetBasis(basis, order, complete=True, reduced=False,
                      homogeneous=all(is_homogeneous(g) for g in basis), ring=ring, rank=rank)


def deg_lead(f: Element, order) -> int:
    return max(f._terms, key=order.key).degree


def autoreduce(basis: JanetBasis) -> JanetBasis:
    """Minimal, monic, mutually reduced basis sorted by strictly descending leading monomial."""
    if not basis.complete:
        raise ValueError("autoreduce needs a complete basis")
    order = basis.order
    elems = [g for g in basis.elements if g._terms]
    leads = [leading(g, order)[0] for g in elems]
    keep = []
    for a, la in enumerate(leads):
        redundant = False
        for b, lb in enumerate(leads):
            if a == b or not lb.divides(la):
                continue
            # equal leads: keep the first occurrence only
            if lb != la or b < a:
                redundant = True
                break
        if not redundant:
            keep.append(a)
    minimal = [elems[a] for a in keep]
    red = _Reducer(minimal, order)
    out = []
    for idx, g in enumerate(minimal):
        active = set(range(len(minimal))) - {idx}
        lm, lc = leading(g, order)
        tail = {m: c for m, c in g._terms.items() if m != lm}
        r, scale = red.reduce(tail, active=active) if tail else ({}, 1)
        t = {m: c * scale / lc for m, c in r.items()}
        t[lm] = Fraction(1)
        out.append(Element(g.ring, t, g.rank, _trusted=True))
    out.sort(key=lambda g: order.key(leading(g, order)[0]), reverse=True)
    return JanetBasis(tuple(out), order, complete=True, reduced=True,
                      homogeneous=all(is_homogeneous(g) for g in out),
                      ring=basis.ring, rank=basis.rank)


def janet_basis(generators: Iterable[Element], order=None, **kw) -> JanetBasis:
    """Reduced Janet basis of the submodule generated by ``generators``."""
    return autoreduce(complete(generators, order, **kw))


def is_reduced(basis: JanetBasis) -> bool:
    """Check minimality, strict descent, monicity and cross irreducibility."""
    order = basis.order
    leads = [leading(g, order) for g in basis.elements]
    if any(c != 1 for _, c in leads):
        return False
    keys = [order.key(m) for m, _ in leads]
    if any(keys[a] <= keys[a + 1] for a in range(len(keys) - 1)):
        return False
    for a, g in enumerate(basis.elements):
        for b, (lb, _) in enumerate(leads):
            if a != b and any(lb.divides(m) for m in g._terms):
                return False
    return True
