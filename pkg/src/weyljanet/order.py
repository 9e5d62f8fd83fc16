"""Admissible orders on module monomials and the orders they induce on hA^l.

An order is represented by a sort key: ``order.key(m1) < order.key(m2)``
iff ``m1 < m2``. Keys are plain tuples of ints, cached per order value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, Monomial, WeylAlgebra
from .errors import AmbientMismatch

BASES = ("deglex", "degrevlex")
MODULE_MODES = ("TOP", "POT")


@dataclass(frozen=True)
class AdmissibleOrder:
    """deglex/degrevlex on the exponent vector ``(i, j)`` plus a module mode.

    ``precedence`` lists the 2n variable slots (0..n-1 for X1..Xn, n..2n-1 for
    D1..Dn) from least to greatest; ``None`` means X1 < ... < Xn < D1 < ... < Dn.
    ``positions`` lists 0-based module positions from greatest to least;
    ``None`` makes position 1 the greatest. ``TOP`` compares terms first,
    ``POT`` compares positions first.
    """

    base: str = "deglex"
    precedence: tuple | None = None
    module: str = "TOP"
    positions: tuple | None = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base order {self.base!r}")
        if self.module not in MODULE_MODES:
            raise ValueError(f"unknown module mode {self.module!r}")
        if self.precedence is not None:
            p = tuple(self.precedence)
            if sorted(p) != list(range(len(p))) or len(p) % 2:
                raise ValueError("precedence must be a permutation of the 2n variable slots")
            object.__setattr__(self, "precedence", p)
        if self.positions is not None:
            p = tuple(self.positions)
            if sorted(p) != list(range(len(p))):
                raise ValueError("positions must be a permutation of 0..l-1")
            object.__setattr__(self, "positions", p)

    @property
    def induced(self) -> bool:
        return False

    def _term_key(self, ij: tuple) -> tuple:
        prec = self.precedence if self.precedence is not None else range(len(ij))
        if self.precedence is not None and len(self.precedence) != len(ij):
            raise AmbientMismatch("order precedence was built for a different n")
        total = sum(ij)
        if self.base == "deglex":
            # greatest variable decides first, larger exponent wins
            return (total,) + tuple(ij[v] for v in reversed(list(prec)))
        # least variable decides first, smaller exponent wins
        return (total,) + tuple(-ij[v] for v in prec)

    def _pos_rank(self, pos: int) -> int:
        if self.positions is None:
            return -pos
        try:
            return -self.positions.index(pos)
        except ValueError:
            raise AmbientMismatch(f"position {pos + 1} not covered by the order") from None

    def base_key(self, m: Monomial) -> tuple:
        tk = self._term_key(m.exps[1:])
        pr = self._pos_rank(m.pos)
        return (tk, pr) if self.module == "TOP" else (pr, tk)

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            if m.exps[0]:
                raise AmbientMismatch("monomial involves x0; use the induced order")
            k = self.base_key(m)
            self._cache[m] = k
        return k

    def induce(self) -> "InducedOrder":
        return InducedOrder(self)

    def for_ring(self, ring: WeylAlgebra):
        return self.induce() if ring.homogenized else self

    def is_degree_compatible(self) -> bool:
        return self.module == "TOP"

    def spec(self) -> str:
        return format_order(self)


@dataclass(frozen=True)
class InducedOrder:
    """Order on ``e_{v,i0,i,j}``: compare ``(v,i,j)`` by the base order, then ``i0``."""

    base: AdmissibleOrder
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def induced(self) -> bool:
        return True

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = (self.base.base_key(m), m.exps[0])
            self._cache[m] = k
        return k

    def induce(self) -> "InducedOrder":
        return self

    def for_ring(self, ring: WeylAlgebra):
        return self

    def is_degree_compatible(self) -> bool:
        return self.base.is_degree_compatible()

    def spec(self) -> str:
        return format_order(self.base)


Order = AdmissibleOrder | InducedOrder


def induce(order: AdmissibleOrder) -> InducedOrder:
    return order.induce()


def compare(order: Order, m1: Monomial, m2: Monomial) -> int:
    """-1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    if len(m1.exps) != len(m2.exps):
        raise AmbientMismatch("monomials from different ambient rings")
    k1, k2 = order.key(m1), order.key(m2)
    return (k1 > k2) - (k1 < k2)


def leading(f: Element, order: Order) -> tuple[Monomial, Fraction] | None:
    """``(o(f), coefficient)``, or ``None`` for the zero element."""
    if not f._terms:
        return None
    key = order.key
    m = max(f._terms, key=key)
    return m, f._terms[m]


def hdt(f: Element, order: Order) -> Element:
    """The leading term of f as an element (zero maps to zero)."""
    lt = leading(f, order)
    if lt is None:
        return f.ring.zero(f.rank)
    m, c = lt
    return Element(f.ring, {m: c}, f.rank, _trusted=True)


# textual form ----------------------------------------------------------------

def _slot_name(slot: int, n: int) -> str:
    return f"x{slot + 1}" if slot < n else f"d{slot - n + 1}"


def format_order(order: AdmissibleOrder) -> str:
    parts = [order.base]
    if order.precedence is not None:
        n = len(order.precedence) // 2
        parts.append("vars=" + "<".join(_slot_name(s, n) for s in order.precedence))
    parts.append(f"module={order.module}")
    if order.positions is not None:
        parts.append("pos=" + ">".join(str(p + 1) for p in order.positions))
    return ";".join(parts)


def parse_order(text: str, n: int | None = None) -> AdmissibleOrder:
    """Parse e.g. ``"degrevlex;vars=x1<x2<d1<d2;module=TOP;pos=1>2"``.

    Fields after the base are optional and may appear in any order.
    """
    fields = [f.strip() for f in text.strip().split(";") if f.strip()]
    if not fields:
        return AdmissibleOrder()
    base = fields[0].lower()
    precedence = positions = None
    module = "TOP"
    for f in fields[1:]:
        if "=" not in f:
            raise ValueError(f"malformed order field {f!r}")
        name, value = (s.strip() for s in f.split("=", 1))
        if name == "vars":
            names = [s.strip() for s in value.split("<")]
            nn = len(names) // 2 if n is None else n
            if len(names) != 2 * nn:
                raise ValueError("vars must list all 2n variables")
            slots = []
            for s in names:
                if len(s) < 2 or s[0] not in "xd" or not s[1:].isdigit():
                    raise ValueError(f"bad variable {s!r} in order")
                v = int(s[1:])
                if not 1 <= v <= nn:
                    raise ValueError(f"variable {s!r} out of range")
                slots.append(v - 1 if s[0] == "x" else nn + v - 1)
            precedence = tuple(slots)
        elif name == "module":
            module = value.upper()
        elif name == "pos":
            positions = tuple(int(s) - 1 for s in value.split(">"))
        else:
            raise ValueError(f"unknown order field {name!r}")
    return AdmissibleOrder(base, precedence, module, positions)
