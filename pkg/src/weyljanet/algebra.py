"""Exact arithmetic in the Weyl algebra, its homogenization and their free modules.

Every element is stored in normal-ordered form: each monomial is
``X0^i0 * X1^i1 ... Xn^in * D1^j1 ... Dn^jn`` (X-part left of the D-part).
A monomial of a free module additionally carries a position ``pos``
(0-based internally, printed 1-based only where a human reads it).

The same machinery also covers the two commutative shadows used later on:
``gr(A) = F[X, D]`` and ``cA = F[X0, X, D]``; they are ``WeylAlgebra``
instances with ``commutative=True``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import AmbientMismatch

Exps = tuple  # (x0, x1..xn, d1..dn)

_KIND_COMM, _KIND_AFFINE, _KIND_HOM = 0, 1, 2


@dataclass(frozen=True)
class WeylAlgebra:
    """The ring ``A_n`` (or ``hA_n`` when ``homogenized``).

    With ``commutative=True`` the commutator ``D_v X_v - X_v D_v`` is zero and
    the ring is the polynomial ring on the same variables.
    """

    n: int
    homogenized: bool = False
    commutative: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def kind(self) -> int:
        if self.commutative:
            return _KIND_COMM
        return _KIND_HOM if self.homogenized else _KIND_AFFINE

    @property
    def nexps(self) -> int:
        return 2 * self.n + 1

    def variable_names(self) -> list[str]:
        names = ["x0"] if self.homogenized else []
        names += [f"x{v}" for v in range(1, self.n + 1)]
        names += [f"d{v}" for v in range(1, self.n + 1)]
        return names

    def homogenization(self) -> "WeylAlgebra":
        return WeylAlgebra(self.n, True, self.commutative)

    def affine(self) -> "WeylAlgebra":
        return WeylAlgebra(self.n, False, self.commutative)

    def graded(self) -> "WeylAlgebra":
        """gr(A) for A, or cA for hA: same variables, commuting."""
        return WeylAlgebra(self.n, self.homogenized, True)

    def __str__(self):
        name = "cA" if self.commutative and self.homogenized else (
            "grA" if self.commutative else ("hA" if self.homogenized else "A"))
        return f"{name}_{self.n}"

    # constructors -------------------------------------------------------

    def zero(self, rank: int = 1) -> "Element":
        return Element(self, {}, rank)

    def one(self) -> "Element":
        return self.monomial((0,) * self.nexps)

    def scalar(self, c) -> "Element":
        return Element(self, {Monomial(0, (0,) * self.nexps): c})

    def monomial(self, exps: Iterable[int], pos: int = 0, rank: int = 1, coeff=1) -> "Element":
        exps = tuple(exps)
        if len(exps) != self.nexps:
            raise AmbientMismatch(f"exponent vector of length {len(exps)} in {self}")
        if min(exps, default=0) < 0:
            raise ValueError("negative exponent")
        if exps[0] and not self.homogenized:
            raise AmbientMismatch("x0 only exists in the homogenized algebra")
        return Element(self, {Monomial(pos, exps): coeff}, rank)

    def x(self, v: int) -> "Element":
        """The generator X_v (v = 0 is the homogenizing variable)."""
        if v == 0 and not self.homogenized:
            raise AmbientMismatch("x0 only exists in the homogenized algebra")
        if not 0 <= v <= self.n:
            raise ValueError(f"no variable x{v} in {self}")
        e = [0] * self.nexps
        e[v] = 1
        return self.monomial(e)

    def d(self, v: int) -> "Element":
        if not 1 <= v <= self.n:
            raise ValueError(f"no variable d{v} in {self}")
        e = [0] * self.nexps
        e[self.n + v] = 1
        return self.monomial(e)

    def vector(self, components: Iterable["Element"]) -> "Element":
        """Assemble rank-1 elements into an element of the free module."""
        terms: dict[Monomial, Fraction] = {}
        comps = list(components)
        for v, c in enumerate(comps):
            if c.ring != self or c.rank != 1:
                raise AmbientMismatch("vector components must be rank-1 elements of the same ring")
            for m, a in c._terms.items():
                terms[Monomial(v, m.exps)] = a
        return Element(self, terms, len(comps), _trusted=True)


class Monomial(NamedTuple):
    """``e_{pos, i0, i, j}``: a normal-ordered monomial at a module position."""

    pos: int
    exps: Exps

    @property
    def x0(self) -> int:
        return self.exps[0]

    @property
    def x(self) -> tuple:
        n = (len(self.exps) - 1) // 2
        return self.exps[1:n + 1]

    @property
    def d(self) -> tuple:
        n = (len(self.exps) - 1) // 2
        return self.exps[n + 1:]

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def divides(self, other: "Monomial") -> bool:
        return self.pos == other.pos and all(a <= b for a, b in zip(self.exps, other.exps))


@lru_cache(maxsize=1 << 18)
def mono_mul(n: int, kind: int, ea: Exps, eb: Exps) -> tuple:
    """Normal-ordered expansion of ``(X^a D^b) * (X^c D^e)``.

    Uses ``D^j X^i = sum_k C(j,k) C(i,k) k! h^k X^(i-k) D^(j-k)`` per variable,
    with ``h`` = 1 in A, X0^2 in hA and 0 in the commutative rings.
    Returns a tuple of ``(exps, integer coefficient)``.
    """
    size = 2 * n + 1
    base = [ea[t] + eb[t] for t in range(size)]
    if kind == _KIND_COMM:
        return ((tuple(base), 1),)
    spans = []
    for v in range(n):
        k = min(ea[n + 1 + v], eb[1 + v])
        spans.append(range(k + 1))
    if all(len(s) == 1 for s in spans):
        return ((tuple(base), 1),)
    out = []
    for ks in product(*spans):
        coeff = 1
        e = list(base)
        for v, k in enumerate(ks):
            if k:
                coeff *= comb(ea[n + 1 + v], k) * comb(eb[1 + v], k) * factorial(k)
                e[1 + v] -= k
                e[n + 1 + v] -= k
                if kind == _KIND_HOM:
                    e[0] += 2 * k
        out.append((tuple(e), coeff))
    return tuple(out)


def _structural_key(m: Monomial):
    return (m.pos, -sum(m.exps), tuple(-e for e in m.exps[1:]), m.exps[0])


class Element:
    """An element of ``R^rank`` for a ring ``R`` given by a :class:`WeylAlgebra`.

    ``rank == 1`` elements are ring elements. Values are immutable; the term
    map never stores zero coefficients.
    """

    __slots__ = ("ring", "rank", "_terms", "_hash")

    def __init__(self, ring: WeylAlgebra, terms: Mapping[Monomial, object] | None = None,
                 rank: int = 1, *, _trusted: bool = False):
        self.ring = ring
        self.rank = rank
        self._hash = None
        if _trusted:
            self._terms = dict(terms) if terms is not None else {}
            return
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if not isinstance(m, Monomial):
                m = Monomial(*m)
            if not 0 <= m.pos < rank:
                raise AmbientMismatch(f"position {m.pos + 1} outside rank {rank}")
            if len(m.exps) != ring.nexps:
                raise AmbientMismatch("exponent vector length does not match the ring")
            if m.exps[0] and not ring.homogenized:
                raise AmbientMismatch("x0 only exists in the homogenized algebra")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean

    # basic protocol -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in a fixed structural order (independent of any term order)."""
        return sorted(self._terms.items(), key=lambda t: _structural_key(t[0]))

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other) if self.rank == 1 else None
            if other is None:
                return False
        if not isinstance(other, Element):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rank, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"cannot combine Element with {type(other).__name__}")
        if self.ring != other.ring or self.rank != other.rank:
            raise AmbientMismatch(f"{self.ring}^{self.rank} vs {other.ring}^{other.rank}")

    # linear structure ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        self._check(other)
        t = dict(self._terms)
        for m, c in other._terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Element(self.ring, t, self.rank, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.ring, {m: -c for m, c in self._terms.items()}, self.rank, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        c = Fraction(c)
        if not c:
            return Element(self.ring, {}, self.rank, _trusted=True)
        return Element(self.ring, {m: a * c for m, a in self._terms.items()}, self.rank, _trusted=True)

    # multiplication ------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if self.rank != 1 or k < 0:
            raise ValueError("powers are defined for ring elements and k >= 0")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    # structure -----------------------------------------------------------

    def component(self, v: int) -> "Element":
        """The v-th coordinate (0-based) as a ring element."""
        return Element(self.ring, {Monomial(0, m.exps): c for m, c in self._terms.items() if m.pos == v},
                       1, _trusted=True)

    def components(self) -> list["Element"]:
        buckets: list[dict] = [{} for _ in range(self.rank)]
        for m, c in self._terms.items():
            buckets[m.pos][Monomial(0, m.exps)] = c
        return [Element(self.ring, b, 1, _trusted=True) for b in buckets]

    def map_terms(self, ring: WeylAlgebra, fn) -> "Element":
        """Rebuild in ``ring`` with each monomial sent through ``fn`` (summing collisions)."""
        t: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            mm = fn(m)
            s = t.get(mm, 0) + c
            if s:
                t[mm] = s
            else:
                t.pop(mm, None)
        return Element(ring, t, self.rank, _trusted=True)

    def __repr__(self):
        return f"Element({self.ring}, {str(self)!r})"

    def __str__(self):
        return format_element(self)


def multiply(a: Element, b: Element) -> Element:
    """Left multiplication ``a * b`` with ``a`` a ring element and ``b`` in ``R^l``."""
    if not isinstance(a, Element) or not isinstance(b, Element):
        raise TypeError("multiply expects Elements")
    if a.ring != b.ring:
        raise AmbientMismatch(f"{a.ring} vs {b.ring}")
    if a.rank != 1:
        raise AmbientMismatch("module vectors can only be multiplied by scalars from the left")
    ring = a.ring
    n, kind = ring.n, ring.kind
    out: dict[Monomial, Fraction] = {}
    get = out.get
    for ma, ca in a._terms.items():
        ea = ma.exps
        for mb, cb in b._terms.items():
            c = ca * cb
            pos = mb.pos
            for e, k in mono_mul(n, kind, ea, mb.exps):
                key = Monomial(pos, e)
                s = get(key, 0) + c * k
                if s:
                    out[key] = s
                else:
                    del out[key]
    return Element(ring, out, b.rank, _trusted=True)


def mul_monomial(exps: Exps, f: Element) -> dict[Monomial, Fraction]:
    """Raw term map of ``X^exps * f`` (used on the reduction hot path)."""
    n, kind = f.ring.n, f.ring.kind
    out: dict[Monomial, Fraction] = {}
    get = out.get
    for mb, cb in f._terms.items():
        pos = mb.pos
        for e, k in mono_mul(n, kind, exps, mb.exps):
            key = Monomial(pos, e)
            s = get(key, 0) + cb * k
            if s:
                out[key] = s
            else:
                del out[key]
    return out


# degrees -----------------------------------------------------------------

@dataclass(frozen=True)
class Degrees:
    """Degree data of an element. ``None`` encodes -inf for degrees, +inf for ord."""

    deg: int | None
    deg_d: int | None
    deg_x: tuple | None
    deg_dv: tuple | None
    ord_x0: int | None


def degrees(f: Element) -> Degrees:
    if not f._terms:
        return Degrees(None, None, None, None, None)
    n = f.ring.n
    ms = [m.exps for m in f._terms]
    return Degrees(
        deg=max(sum(e) for e in ms),
        deg_d=max(sum(e[n + 1:]) for e in ms),
        deg_x=tuple(max(e[1 + v] for e in ms) for v in range(n)),
        deg_dv=tuple(max(e[n + 1 + v] for e in ms) for v in range(n)),
        ord_x0=min(e[0] for e in ms),
    )


def deg(f: Element) -> int | None:
    """Total degree; ``None`` for the zero element (-inf)."""
    return max((sum(m.exps) for m in f._terms), default=None)


def ord_x0(f: Element) -> int | None:
    """Largest power of X0 dividing f; ``None`` for zero (+inf)."""
    return min((m.exps[0] for m in f._terms), default=None)


def is_homogeneous(f: Element) -> bool:
    return len({sum(m.exps) for m in f._terms}) <= 1


def shift_x0(f: Element, k: int) -> Element:
    """Multiply by ``X0^k`` (k may be negative when X0^-k divides f)."""
    if k == 0:
        return f
    if not f.ring.homogenized:
        raise AmbientMismatch("x0 only exists in the homogenized algebra")

    def fn(m):
        e = list(m.exps)
        e[0] += k
        if e[0] < 0:
            raise ValueError(f"X0^{-k} does not divide the element")
        return Monomial(m.pos, tuple(e))

    return f.map_terms(f.ring, fn)


def lift(f: Element, ring: WeylAlgebra) -> Element:
    """Reinterpret the same normal-ordered terms in another ring with equal n."""
    if ring.n != f.ring.n:
        raise AmbientMismatch("rings have different n")
    if not ring.homogenized and any(m.exps[0] for m in f._terms):
        raise AmbientMismatch("element involves x0")
    return Element(ring, f._terms, f.rank, _trusted=True)


# printing ------------------------------------------------------------------

def format_monomial(ring: WeylAlgebra, exps: Exps) -> str:
    n = ring.n
    names = ["x0"] + [f"x{v}" for v in range(1, n + 1)] + [f"d{v}" for v in range(1, n + 1)]
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_scalar_element(f: Element) -> str:
    if not f._terms:
        return "0"
    pieces = []
    for m, c in f.items():
        mono = format_monomial(f.ring, m.exps)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_element(f: Element) -> str:
    if f.rank == 1:
        return _format_scalar_element(f)
    return "[" + ", ".join(_format_scalar_element(c) for c in f.components()) + "]"
