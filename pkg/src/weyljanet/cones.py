"""Cone decompositions of the complement of a monomial module in l copies of Z_+^n."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .hilbert import binomial, minimal_generators


@dataclass(frozen=True, order=True)
class Cone:
    """``{u in copy : u_j = v for (j, v) in fixed}``; the other coordinates are free."""

    copy: int
    fixed: tuple
    n: int

    @property
    def dim(self) -> int:
        return self.n - len(self.fixed)

    @property
    def degree(self) -> int:
        return sum(v for _, v in self.fixed)

    def sort_key(self) -> tuple:
        """Degree, then fixed index set, then fixed values (copy breaks remaining ties)."""
        return (self.degree, tuple(j for j, _ in self.fixed), tuple(v for _, v in self.fixed), self.copy)

    def contains_point(self, copy: int, u: Sequence[int]) -> bool:
        return copy == self.copy and all(u[j] == v for j, v in self.fixed)

    def contains(self, other: "Cone") -> bool:
        if other.copy != self.copy:
            return False
        of = dict(other.fixed)
        return all(of.get(j) == v for j, v in self.fixed)

    def intersect(self, other: "Cone") -> "Cone | None":
        if other.copy != self.copy:
            return None
        f = dict(self.fixed)
        for j, v in other.fixed:
            if f.setdefault(j, v) != v:
                return None
        return Cone(self.copy, tuple(sorted(f.items())), self.n)

    def predecessors(self) -> list[tuple[int, "Cone"]]:
        """``(p, cone)`` with the p-th fixed value lowered by one, where it is positive."""
        out = []
        for p, (j, v) in enumerate(self.fixed):
            if v >= 1:
                f = list(self.fixed)
                f[p] = (j, v - 1)
                out.append((p, Cone(self.copy, tuple(f), self.n)))
        return out

    def count(self, z: int) -> int:
        """Points of degree at most z."""
        return binomial(z - self.degree + self.dim, self.dim)

    def __str__(self):
        inner = ", ".join(f"x{j + 1}={v}" for j, v in self.fixed)
        return f"copy {self.copy + 1}: {{{inner}}}"


def _avoids(copy: int, fixed: dict, gens: dict) -> bool:
    """The cone meets no generator multiple: each generator beats some fixed value."""
    return all(any(v < g[j] for j, v in fixed.items()) for g in gens.get(copy, ()))


def in_ideal(copy: int, u: Sequence[int], gens: dict) -> bool:
    return any(all(a <= b for a, b in zip(g, u)) for g in gens.get(copy, ()))


def _by_copy(generators: Iterable, l: int, n: int) -> dict:
    out: dict[int, list] = {}
    for k, e in generators:
        e = tuple(e)
        if not 0 <= k < l or len(e) != n:
            raise ValueError("generator outside C_l")
        out.setdefault(k, []).append(e)
    return {k: minimal_generators(v) for k, v in out.items()}


@dataclass
class ConeDecomposition:
    """Cones added to cover the complement T, in the order they were added."""

    n: int
    l: int
    generators: dict
    cones: list = field(default_factory=list)
    epsilon: dict = field(default_factory=dict)

    def by_dim(self, s: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == s]

    @property
    def t(self) -> dict[int, int]:
        return {s: len(self.by_dim(s)) for s in range(self.n + 1) if self.by_dim(s)}

    @property
    def k(self) -> dict[int, int]:
        return {s: max(c.degree for c in self.by_dim(s)) for s in range(self.n + 1) if self.by_dim(s)}

    def covers(self, cone: Cone, upto: int | None = None) -> bool:
        pool = self.cones if upto is None else self.cones[:upto]
        if cone.dim >= 1:
            return any(c.contains(cone) for c in pool)
        u = [0] * self.n
        for j, v in cone.fixed:
            u[j] = v
        return any(c.contains_point(cone.copy, u) for c in pool)

    def in_complement(self, copy: int, u: Sequence[int]) -> bool:
        return not in_ideal(copy, u, self.generators)

    def multiplicity(self, copy: int, u: Sequence[int]) -> int:
        """``sum eps_P [u in P]`` over all pieces."""
        return sum(e for p, e in self.epsilon.items() if p.contains_point(copy, u))


def decompose(generators: Iterable[tuple[int, Sequence[int]]], n: int, l: int = 1,
              max_cones: int = 100_000) -> ConeDecomposition:
    """Greedy cover of T by s-cones for s = n down to 0.

    ``generators`` are ``(copy, exponents)`` pairs with 0-based copies.
    At each dimension every s-cone lying in T and not yet covered is added,
    in increasing ``Cone.sort_key`` order. Fixed values of useful cones stay
    below the largest generator exponent in that coordinate, which makes the
    candidate list finite.
    """
    gens = _by_copy(generators, l, n)
    dec = ConeDecomposition(n, l, gens)
    for s in range(n, -1, -1):
        cands = []
        for k in range(l):
            gk = gens.get(k, [])
            bound = [max((g[j] for g in gk), default=0) for j in range(n)]
            for idx in combinations(range(n), n - s):
                for vals in product(*(range(bound[j]) for j in idx)):
                    fixed = dict(zip(idx, vals))
                    if _avoids(k, fixed, gens):
                        cands.append(Cone(k, tuple(sorted(fixed.items())), n))
        cands.sort(key=Cone.sort_key)
        for c in cands:
            if not dec.covers(c):
                dec.cones.append(c)
                if len(dec.cones) > max_cones:
                    raise RuntimeError("cone decomposition exceeds its size cap")
    dec.epsilon = epsilon_coefficients(dec.cones)
    return dec


def epsilon_coefficients(cones: Sequence[Cone]) -> dict[Cone, int]:
    """Inclusion-exclusion weights on the intersection semilattice of ``cones``.

    Maximal pieces get 1; every other piece gets the value that makes the
    weights of it and all strictly larger pieces sum to 1.
    """
    pieces = set(cones)
    frontier = set(cones)
    while frontier:
        new = set()
        for a in frontier:
            for b in pieces:
                c = a.intersect(b)
                if c is not None and c not in pieces and c not in new:
                    new.add(c)
        pieces |= new
        frontier = new
    eps: dict[Cone, int] = {}
    for p in sorted(pieces, key=lambda c: (-c.dim, c.sort_key())):
        above = sum(e for q, e in eps.items() if q != p and q.contains(p))
        eps[p] = 1 - above
    return {p: e for p, e in eps.items() if e}


def hilbert_from_cones(dec: ConeDecomposition, z: int) -> int:
    """``sum eps_P C(z - |P| + dim P, dim P)``."""
    return sum(e * p.count(z) for p, e in dec.epsilon.items())


def direct_count(dec: ConeDecomposition, z: int) -> int:
    """Points of T of degree at most z, by enumeration."""
    from .graded import compositions
    total = 0
    for k in range(dec.l):
        for d in range(z + 1):
            total += sum(1 for u in compositions(dec.n, d) if not in_ideal(k, u, dec.generators))
    return total


def predecessor_violations(dec: ConeDecomposition) -> list[tuple[Cone, Cone]]:
    """Added cones whose predecessor is not covered by an earlier cone Q with ``|Q| >= i_p - 1``."""
    bad = []
    for pos, c in enumerate(dec.cones):
        for p, pred in c.predecessors():
            j, v = c.fixed[p]
            ok = False
            for q in dec.cones[:pos]:
                holder = q.contains(pred) if pred.dim >= 1 else q.contains_point(pred.copy, _point(pred))
                if holder and dict(q.fixed).get(j) == v - 1 and q.degree >= v - 1:
                    ok = True
                    break
            if not ok:
                bad.append((c, pred))
    return bad


def _point(c: Cone) -> list[int]:
    u = [0] * c.n
    for j, v in c.fixed:
        u[j] = v
    return u


def degree_chain_holds(dec: ConeDecomposition) -> bool:
    """``k_{s-1} <= (max_{a >= s} k_a + 1)(n - s + 1) + t_{s-1}`` whenever both sides exist."""
    k, t = dec.k, dec.t
    for s in range(1, dec.n + 1):
        if s - 1 not in k:
            continue
        higher = [k[a] for a in k if a >= s]
        if not higher:
            continue
        if k[s - 1] > (max(higher) + 1) * (dec.n - s + 1) + t[s - 1]:
            return False
    return True


def basis_degree(dec: ConeDecomposition) -> int:
    """Largest degree in the minimal generating set of the ideal."""
    return max((sum(g) for gs in dec.generators.values() for g in gs), default=0)


def basis_degree_bound(dec: ConeDecomposition) -> int:
    """``(max k_a + 1) * n``."""
    return (max(dec.k.values(), default=0) + 1) * dec.n
