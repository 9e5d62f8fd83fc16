"""Graded linear algebra over the homogenized Weyl algebra.

Every question here (kernels, right rank, trapezoidal form, solving
``Z b = u``) is answered degree by degree: the homogeneous components of the
unknowns of a fixed degree form a finite-dimensional space and the equations
become an exact linear system over Q.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Sequence

from .algebra import Element, Monomial, WeylAlgebra, deg, multiply, mul_monomial, ord_x0, shift_x0
from .errors import AmbientMismatch, ResourceLimitError
from .graded import exponent_vectors
from .linalg import Echelon, nullspace, solve, transpose

Matrix = list  # list of rows, each a list of rank-1 Elements


# shifted matrices ------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedMatrix:
    """A k x l matrix of homogeneous elements with ``deg b_ij = d_i - d'_j``."""

    entries: tuple
    row_shifts: tuple
    col_shifts: tuple
    ring: WeylAlgebra

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def l(self) -> int:
        return len(self.col_shifts)

    @property
    def n(self) -> int:
        return self.ring.n

    def column(self, j: int) -> list[Element]:
        return [row[j] for row in self.entries]

    def columns(self, idx: Sequence[int]) -> "ShiftedMatrix":
        return ShiftedMatrix.from_rows([[row[j] for j in idx] for row in self.entries], self.ring, l=len(idx))

    def rows(self, idx: Sequence[int]) -> "ShiftedMatrix":
        return ShiftedMatrix.from_rows([self.entries[i] for i in idx], self.ring, l=self.l)

    def transpose(self) -> "ShiftedMatrix":
        return ShiftedMatrix.from_rows([list(c) for c in zip(*self.entries)] if self.entries else
                                       [[] for _ in range(self.l)], self.ring, l=self.k)

    def max_degree(self) -> int:
        return max((deg(a) for row in self.entries for a in row if a._terms), default=0)

    @property
    def d(self) -> int:
        """Smallest d with every entry degree below d (at least 1)."""
        return self.max_degree() + 1

    def avoids_xn(self) -> bool:
        return all(_avoids_xn(a) for row in self.entries for a in row)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Element]], ring: WeylAlgebra | None = None,
                  *, l: int | None = None) -> "ShiftedMatrix":
        """Infer the shifts; raises ValueError if the degrees admit none."""
        rows = [list(r) for r in rows]
        if l is None:
            if not rows:
                raise ValueError("empty matrix needs an explicit column count")
            l = len(rows[0])
        for r in rows:
            if len(r) != l:
                raise ValueError("ragged matrix")
            for a in r:
                if ring is None:
                    ring = a.ring
                if a.ring != ring or a.rank != 1:
                    raise AmbientMismatch("matrix entries must be ring elements of one algebra")
        if ring is None:
            raise ValueError("empty matrix needs an explicit ring")
        if not ring.homogenized:
            raise AmbientMismatch("shifted matrices live over the homogenized algebra")
        k = len(rows)
        dr: list[int | None] = [None] * k
        dc: list[int | None] = [None] * l
        degs = {}
        for i, r in enumerate(rows):
            for j, a in enumerate(r):
                if a._terms:
                    ds = {sum(m.exps) for m in a._terms}
                    if len(ds) != 1:
                        raise ValueError(f"entry ({i + 1}, {j + 1}) is not homogeneous")
                    degs[i, j] = ds.pop()
        # breadth-first over the bipartite row/column graph of nonzero entries
        for start in range(l):
            if dc[start] is not None:
                continue
            dc[start] = 0
            comp_cols, comp_rows = [start], []
            queue = deque([("c", start)])
            while queue:
                kind, x = queue.popleft()
                if kind == "c":
                    for i in range(k):
                        if (i, x) in degs:
                            want = degs[i, x] + dc[x]
                            if dr[i] is None:
                                dr[i] = want
                                comp_rows.append(i)
                                queue.append(("r", i))
                            elif dr[i] != want:
                                raise ValueError("entry degrees admit no row/column shifts")
                else:
                    for j in range(l):
                        if (x, j) in degs:
                            want = dr[x] - degs[x, j]
                            if dc[j] is None:
                                dc[j] = want
                                comp_cols.append(j)
                                queue.append(("c", j))
                            elif dc[j] != want:
                                raise ValueError("entry degrees admit no row/column shifts")
            low = min(dc[j] for j in comp_cols)
            for j in comp_cols:
                dc[j] -= low
            for i in comp_rows:
                dr[i] -= low
        dr = [0 if v is None else v for v in dr]
        return cls(tuple(tuple(r) for r in rows), tuple(dr), tuple(dc), ring)


def _avoids_xn(a: Element) -> bool:
    n = a.ring.n
    return n == 0 or all(m.exps[n] == 0 for m in a._terms)


def _avoids_xn_vec(v: Sequence[Element]) -> bool:
    return all(_avoids_xn(a) for a in v)


# degreewise linear systems -----------------------------------------------------


class _System:
    """The F-linear map on homogeneous components of fixed degree.

    ``coeffs[r]`` maps an unknown index j to its coefficient in output r.
    With ``side="right"`` output r is ``sum_j coeffs[r][j] * z_j``,
    with ``side="left"`` it is ``sum_j z_j * coeffs[r][j]``.
    """

    def __init__(self, ring: WeylAlgebra, coeffs: list[dict], nunknowns: int, side: str):
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        self.ring = ring
        self.coeffs = coeffs
        self.nunk = nunknowns
        self.side = side

    def unknowns(self, degrees: Sequence[int | None], *, min_x0: int = 0, avoid_xn: bool = False) -> list:
        n = self.ring.n
        out = []
        for j, dj in enumerate(degrees):
            if dj is None or dj < 0:
                continue
            for e in exponent_vectors(self.ring, dj):
                if e[0] < min_x0 or (avoid_xn and n and e[n]):
                    continue
                out.append((j, e))
        return out

    def product(self, c: Element, e: tuple) -> dict:
        if self.side == "left":
            return mul_monomial(e, c)
        mono = Element(self.ring, {Monomial(0, e): Fraction(1)}, 1, _trusted=True)
        return multiply(c, mono)._terms

    def matrix(self, unknowns: list) -> tuple[dict, dict]:
        """Images of the unknowns as columns, keyed by ``(output, monomial)`` equations."""
        eqs: dict = {}
        images: dict[int, dict] = {}
        for u, (j, e) in enumerate(unknowns):
            img = {}
            for r, row in enumerate(self.coeffs):
                c = row.get(j)
                if c is None or not c._terms:
                    continue
                for m, a in self.product(c, e).items():
                    key = eqs.setdefault((r, m.exps), len(eqs))
                    img[key] = img.get(key, 0) + a
            images[u] = {q: a for q, a in img.items() if a}
        return images, eqs

    def kernel(self, unknowns: list) -> list[dict]:
        images, _ = self.matrix(unknowns)
        return nullspace(transpose(images).values(), len(unknowns))

    def assemble(self, unknowns: list, vec: dict) -> list[Element]:
        parts: list[dict] = [{} for _ in range(self.nunk)]
        for u, a in vec.items():
            j, e = unknowns[u]
            parts[j][Monomial(0, e)] = Fraction(a)
        return [Element(self.ring, p, 1, _trusted=True) for p in parts]


def _row_coeffs(b: ShiftedMatrix) -> list[dict]:
    return [{j: a for j, a in enumerate(row) if a._terms} for row in b.entries]


def _col_coeffs(b: ShiftedMatrix) -> list[dict]:
    return [{i: b.entries[i][j] for i in range(b.k) if b.entries[i][j]._terms} for j in range(b.l)]


def apply_right(b: ShiftedMatrix, z: Sequence[Element]) -> list[Element]:
    """``b z`` for a column vector z."""
    out = []
    for row in b.entries:
        acc = b.ring.zero()
        for a, zj in zip(row, z):
            if a._terms and zj._terms:
                acc = acc + multiply(a, zj)
        out.append(acc)
    return out


def apply_left(z: Sequence[Element], b: ShiftedMatrix) -> list[Element]:
    """``z b`` for a row vector z."""
    out = []
    for j in range(b.l):
        acc = b.ring.zero()
        for i, zi in enumerate(z):
            a = b.entries[i][j]
            if a._terms and zi._terms:
                acc = acc + multiply(zi, a)
        out.append(acc)
    return out


def matmul(a: Matrix, b: Matrix, ring: WeylAlgebra) -> Matrix:
    """Product of matrices over the algebra (entries multiplied in order)."""
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = ring.zero()
            for t in range(inner):
                if row[t]._terms and b[t][j]._terms:
                    acc = acc + multiply(row[t], b[t][j])
            new.append(acc)
        out.append(new)
    return out


def _normalize_ord(v: list[Element]) -> list[Element]:
    low = min((ord_x0(a) for a in v if a._terms), default=0)
    return [shift_x0(a, -low) if a._terms else a for a in v] if low else v


def kernel_bound(n: int, l: int, d: int) -> int:
    """``(2n+3) l d``."""
    return (2 * n + 3) * l * d


# kernels ---------------------------------------------------------------------


def graded_kernel(b: ShiftedMatrix, degree_cap: int | None = None, *, side: str = "right",
                  avoid_xn: bool | None = None) -> list[Element]:
    """A nonzero homogeneous z with ``b z = 0`` (or ``z b^T = 0`` for ``side="left"``).

    Components have degrees ``t + d'_j``; t grows from 0 until the
    degreewise kernel is nonzero or ``max_j deg z_j`` would pass the cap
    (default ``(2n+3) l d``). The result is divided by the largest X0 power
    dividing all components. When every entry avoids Xn the search is
    restricted to Xn-free components.
    """
    l = b.l
    if l == 0:
        raise ValueError("kernel of a matrix without columns")
    if degree_cap is None:
        degree_cap = kernel_bound(b.n, l, b.d)
    if avoid_xn is None:
        avoid_xn = b.avoids_xn()
    sys = _System(b.ring, _row_coeffs(b), l, side)
    top = max(b.col_shifts)
    for t in count():
        if t + top > degree_cap:
            break
        unk = sys.unknowns([t + s for s in b.col_shifts], avoid_xn=avoid_xn)
        ker = sys.kernel(unk)
        if ker:
            return _normalize_ord(sys.assemble(unk, ker[0]))
    if avoid_xn and b.ring.n:
        return graded_kernel(b, degree_cap, side=side, avoid_xn=False)
    raise ResourceLimitError(f"no kernel element of degree at most {degree_cap}", cap="degree",
                             value=degree_cap)


def check_kernel(b: ShiftedMatrix, z: Sequence[Element], side: str = "right") -> bool:
    if side == "right":
        return all(not r._terms for r in apply_right(b, z))
    return all(not r._terms for r in apply_right_left(b, z))


def apply_right_left(b: ShiftedMatrix, z: Sequence[Element]) -> list[Element]:
    """``sum_j z_j b_ij`` for every row i."""
    out = []
    for row in b.entries:
        acc = b.ring.zero()
        for a, zj in zip(row, z):
            if a._terms and zj._terms:
                acc = acc + multiply(zj, a)
        out.append(acc)
    return out


def _kernel_or_none(b: ShiftedMatrix, cap: int) -> list[Element] | None:
    try:
        return graded_kernel(b, cap)
    except ResourceLimitError:
        return None


def rank_right(columns: ShiftedMatrix, degree_cap: int | None = None) -> tuple[int, list[int]]:
    """Greedy maximal right-independent subfamily of the columns.

    A family is accepted when its matrix has no right kernel element up to
    the cap, default ``(2n+3)(r+1)d`` for a family of size r + 1.
    """
    chosen: list[int] = []
    d = columns.d
    for j in range(columns.l):
        if not any(a._terms for a in columns.column(j)):
            continue
        trial = chosen + [j]
        cap = degree_cap if degree_cap is not None else kernel_bound(columns.n, len(trial), d)
        if _kernel_or_none(columns.columns(trial), cap) is None:
            chosen = trial
    return len(chosen), chosen


# trapezoidal form ----------------------------------------------------------------


@dataclass
class TrapezoidalForm:
    """``e = sigma b[:, columns] z`` with a nonzero diagonal top block.

    ``sigma`` lists original row indices in their new order. ``z`` holds the
    kernel-built multipliers, ``z_gauss`` the ones from elimination (whose
    columns are right-proportional to those of ``z``).
    """

    sigma: list
    columns: list
    z: Matrix
    e: Matrix
    z_gauss: Matrix
    e_gauss: Matrix

    @property
    def l1(self) -> int:
        return len(self.columns)


def _ord_entry(a: Element) -> float:
    o = ord_x0(a)
    return float("inf") if o is None else o


def _pair_kernel(a: Element, c: Element, ring: WeylAlgebra) -> tuple[Element, Element]:
    """Nonzero homogeneous (p, q) with ``a p + c q = 0``."""
    m = ShiftedMatrix.from_rows([[a, c]], ring)
    p, q = graded_kernel(m)
    return p, q


def trapezoidal_form(b: ShiftedMatrix, degree_cap: int | None = None) -> TrapezoidalForm:
    """Column elimination to a diagonal top block, pivoting on least X0-order."""
    ring = b.ring
    k = b.k
    if k < b.l:
        raise ValueError("trapezoidal_form needs at least as many rows as columns")
    l1, cols = rank_right(b, degree_cap)
    e = [[b.entries[i][j] for j in cols] for i in range(k)]
    sigma = list(range(k))
    zg = [[ring.one() if r == c else ring.zero() for c in range(l1)] for r in range(l1)]

    def col_op(target: int, src_mul: list[tuple[int, Element]]):
        """column target <- sum_c column c * mult (right multiplication)."""
        for mat in (e, zg):
            for row in mat:
                acc = ring.zero()
                for c, mult in src_mul:
                    if row[c]._terms and mult._terms:
                        acc = acc + multiply(row[c], mult)
                row[target] = acc

    # forward elimination: lower triangular top block
    for top in range(l1):
        best = None
        for i in range(top, k):
            for j in range(top, l1):
                a = e[i][j]
                if a._terms:
                    key = (_ord_entry(a), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            raise ArithmeticError("independent columns became zero")
        _, i0, j0 = best
        e[top], e[i0] = e[i0], e[top]
        sigma[top], sigma[i0] = sigma[i0], sigma[top]
        for mat in (e, zg):
            for row in mat:
                row[top], row[j0] = row[j0], row[top]
        for j in range(top + 1, l1):
            if not e[top][j]._terms:
                continue
            p, q = _pair_kernel(e[top][top], e[top][j], ring)
            col_op(j, [(top, p), (j, q)])
    # back elimination: clear below the diagonal inside the top block
    for c in range(l1 - 2, -1, -1):
        others = [r for r in range(c + 1, l1) if e[r][c]._terms]
        if not others:
            continue
        rows = []
        for r in others:
            row = [ring.zero()] * (1 + len(others))
            row[0] = e[r][c]
            row[1 + others.index(r)] = e[r][r]
            rows.append(row)
        v = graded_kernel(ShiftedMatrix.from_rows(rows, ring))
        col_op(c, [(c, v[0])] + [(r, v[1 + t]) for t, r in enumerate(others)])
    e_gauss = [list(r) for r in e]

    # multipliers from kernels of the top rows with one row left out
    bp = ShiftedMatrix.from_rows([[b.entries[sigma[i]][j] for j in cols] for i in range(l1)], ring, l=l1)
    z_cols = []
    for r in range(l1):
        keep = [i for i in range(l1) if i != r]
        if not keep:
            z_cols.append([ring.one()])
            continue
        z_cols.append(graded_kernel(bp.rows(keep), degree_cap))
    z = [[z_cols[c][r] for c in range(l1)] for r in range(l1)]
    bsel = [[b.entries[sigma[i]][j] for j in cols] for i in range(k)]
    e_final = matmul(bsel, z, ring) if l1 else [[] for _ in range(k)]
    # undo column swaps on zg: columns of zg are indexed like e
    return TrapezoidalForm(sigma, cols, z, e_final, zg, e_gauss)


def is_trapezoidal(form: TrapezoidalForm) -> bool:
    """Nonzero diagonal, zero off-diagonal top block and the ord domination property."""
    e, l1 = form.e, form.l1
    for r in range(l1):
        for c in range(l1):
            if (r == c) != bool(e[r][c]._terms):
                return False
    for c in range(l1):
        oc = ord_x0(e[c][c])
        for row in e:
            if row[c]._terms and ord_x0(row[c]) < oc:
                return False
    return True


def proportional(u: Sequence[Element], v: Sequence[Element], ring: WeylAlgebra,
                 degree_cap: int | None = None) -> bool:
    """Whether ``u g' = v g`` for some nonzero homogeneous g', g."""
    m = ShiftedMatrix.from_rows([[a, -c] for a, c in zip(u, v)], ring)
    try:
        h = graded_kernel(m, degree_cap)
    except ResourceLimitError:
        return False
    return bool(h[0]._terms) and bool(h[1]._terms)


# solving Z b = u -----------------------------------------------------------------


@dataclass
class Unsolvable:
    """Proof that ``Z b = u`` has no solution: the one relevant degree is inconsistent."""

    certificate: list

    def __bool__(self):
        return False


@dataclass
class SolutionSet:
    """All solutions are ``particular + J``; generators of J are complete up to ``certified_degree``."""

    particular: list
    kernel_generators: list
    certified_degree: int
    nu: int = 0
    trace: list = field(default_factory=list)


def _rho(b: ShiftedMatrix, u: Sequence[Element]) -> int | None:
    rhos = set()
    for j, a in enumerate(u):
        if a._terms:
            ds = {sum(m.exps) for m in a._terms}
            if len(ds) != 1:
                raise ValueError("right-hand side entries must be homogeneous")
            rhos.add(ds.pop() + b.col_shifts[j])
    if len(rhos) > 1:
        raise ValueError("right-hand side degrees do not match the column shifts")
    return rhos.pop() if rhos else None


def default_solve_cap(b: ShiftedMatrix) -> int:
    return 4 * kernel_bound(b.n, b.l, b.d)


def solve_system(b: ShiftedMatrix, u: Sequence[Element], degree_cap: int | None = None) -> SolutionSet | Unsolvable:
    """Solve ``sum_i Z_i b_ij = u_j`` over the homogenized algebra.

    The particular solution lives in the single degree ``deg Z_i = rho - d_i``
    and is picked with the largest X0-order available (and Xn-free when the
    data are). Kernel generators are collected degree by degree: at each
    degree the left multiples of earlier generators are compared with the
    full kernel and the missing directions become new generators.
    """
    if len(u) != b.l:
        raise AmbientMismatch("right-hand side length differs from the column count")
    ring = b.ring
    if degree_cap is None:
        degree_cap = default_solve_cap(b)
    sys = _System(ring, _col_coeffs(b), b.k, "left")
    xn_free = b.avoids_xn() and _avoids_xn_vec(u)
    rho = _rho(b, u)
    nu = 0
    if rho is None:
        particular = [ring.zero() for _ in range(b.k)]
    else:
        degrees = [rho - di for di in b.row_shifts]
        if max(degrees, default=-1) > degree_cap:
            raise ResourceLimitError(f"particular solution degree {max(degrees)} exceeds cap {degree_cap}",
                                     cap="degree", value=max(degrees))
        found = _particular(sys, degrees, u, xn_free)
        if isinstance(found, Unsolvable):
            return found
        particular = found
        ou = min(ord_x0(a) for a in u if a._terms)
        oz = min((ord_x0(a) for a in particular if a._terms), default=ou)
        nu = max(0, ou - oz)
    gens, trace = _kernel_generators(sys, b, degree_cap, xn_free)
    return SolutionSet(particular, gens, degree_cap, nu, trace)


def _rhs_vector(u: Sequence[Element], eqs: dict) -> tuple[list, list]:
    rhs = {}
    for j, a in enumerate(u):
        for m, c in a._terms.items():
            key = eqs.setdefault((j, m.exps), len(eqs))
            rhs[key] = c
    return rhs


def _particular(sys: _System, degrees: list[int], u: Sequence[Element], xn_free: bool):
    if all(d < 0 for d in degrees):
        return Unsolvable([{"degrees": degrees, "reason": "every unknown would have negative degree"}])
    attempts = [True, False] if xn_free and sys.ring.n else [False]
    top = max(d for d in degrees if d >= 0)
    cert = []
    for avoid in attempts:
        for s in range(top, -1, -1):
            unk = sys.unknowns(degrees, min_x0=s, avoid_xn=avoid)
            images, eqs = sys.matrix(unk)
            rhs = _rhs_vector(u, eqs)
            rows = transpose(images)
            ids = sorted(set(rows) | set(rhs))
            x = solve([rows.get(q, {}) for q in ids], [rhs.get(q, 0) for q in ids], len(unk))
            if x is not None:
                return sys.assemble(unk, x)
            if s == 0:
                rank_a = Echelon()
                for q in ids:
                    rank_a.insert(rows.get(q, {}))
                cert.append({"degrees": degrees, "avoid_xn": avoid, "unknowns": len(unk),
                             "equations": len(ids), "rank": rank_a.dim,
                             "reason": "right-hand side outside the image"})
    return Unsolvable(cert)


def _flatten(v: Sequence[Element], index: dict) -> dict:
    out = {}
    for j, a in enumerate(v):
        for m, c in a._terms.items():
            out[index.setdefault((j, m.exps), len(index))] = c
    return out


def _kernel_generators(sys: _System, b: ShiftedMatrix, cap: int, xn_free: bool):
    """Generators of ``{Z : Z b = 0}`` with vector degree ``max_i deg Z_i`` up to cap."""
    ring = b.ring
    low = min(b.row_shifts, default=0)
    gens: list[tuple[int, list[Element]]] = []
    trace = []
    for t in range(low, low + cap + 1):
        degrees = [t - di for di in b.row_shifts]
        if all(d < 0 for d in degrees):
            continue
        index: dict = {}
        span = Echelon()
        for tg, g in gens:
            for e in exponent_vectors(ring, t - tg):
                span.insert(_flatten([Element(ring, mul_monomial(e, a), 1, _trusted=True) for a in g], index))
        found = nullity = 0
        for avoid in ([True, False] if xn_free and ring.n else [False]):
            unk = sys.unknowns(degrees, avoid_xn=avoid)
            ker = sys.kernel(unk)
            for vec in ker:
                z = sys.assemble(unk, vec)
                if span.insert(_flatten(z, index)):
                    gens.append((t, z))
                    found += 1
            nullity = len(ker)
        trace.append({"degree": t - low, "nullity": nullity, "span": span.dim, "new": found})
        if span.dim != nullity:
            raise ArithmeticError("kernel generators do not span the degreewise kernel")
    return [g for _, g in gens], trace


def kernel_span_dimension(generators: Sequence[Sequence[Element]], b: ShiftedMatrix, t: int) -> int:
    """F-dimension at level t (``deg Z_i = t - d_i``) of the left module spanned by ``generators``."""
    ring = b.ring
    index: dict = {}
    span = Echelon()
    for g in generators:
        lev = max(deg(a) + di for a, di in zip(g, b.row_shifts) if a._terms)
        if t < lev:
            continue
        for e in exponent_vectors(ring, t - lev):
            span.insert(_flatten([Element(ring, mul_monomial(e, a), 1, _trusted=True) for a in g], index))
    return span.dim


def kernel_nullity(b: ShiftedMatrix, t: int) -> int:
    """Dimension of ``{Z : Z b = 0, deg Z_i = t - d_i}`` (the oracle side)."""
    sys = _System(b.ring, _col_coeffs(b), b.k, "left")
    unk = sys.unknowns([t - di for di in b.row_shifts])
    return len(sys.kernel(unk))


# generic automorphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class Automorphism:
    """Linear change of variables fixing X0.

    ``matrix[m][c]`` is the coefficient of generator m in the image of
    generator c, generators ordered ``X1..Xn, D1..Dn``.
    """

    ring: WeylAlgebra
    matrix: tuple
    fixes_xn: bool = False

    def image(self, c: int) -> Element:
        n = self.ring.n
        terms = {}
        for m in range(2 * n):
            a = self.matrix[m][c]
            if a:
                e = [0] * (2 * n + 1)
                e[1 + m] = 1
                terms[Monomial(0, tuple(e))] = Fraction(a)
        return Element(self.ring, terms, 1, _trusted=True)

    def __call__(self, f: Element) -> Element:
        ring = self.ring
        if f.ring != ring:
            raise AmbientMismatch("automorphism applied outside its algebra")
        n = ring.n
        images = [self.image(c) for c in range(2 * n)]
        powers: dict = {}

        def power(c, k):
            key = (c, k)
            if key not in powers:
                powers[key] = images[c] ** k
            return powers[key]

        out = {}
        for m, a in f._terms.items():
            e0 = [0] * (2 * n + 1)
            e0[0] = m.exps[0]
            acc = Element(ring, {Monomial(0, tuple(e0)): a}, 1, _trusted=True)
            for c in range(2 * n):
                k = m.exps[1 + c]
                if k:
                    acc = multiply(acc, power(c, k))
            for mm, cc in acc._terms.items():
                key = Monomial(m.pos, mm.exps)
                s = out.get(key, 0) + cc
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Element(ring, out, f.rank, _trusted=True)

    def preserves_relations(self) -> bool:
        """Checks ``[a(D_v), a(X_w)] = delta_vw X0^2`` and commuting X's and D's."""
        ring = self.ring
        n = ring.n
        im = [self.image(c) for c in range(2 * n)]
        x0sq = ring.x(0) * ring.x(0)
        for a in range(2 * n):
            for c in range(2 * n):
                comm = multiply(im[a], im[c]) - multiply(im[c], im[a])
                if a >= n and c < n:
                    want = x0sq if a - n == c else ring.zero()
                elif a < n and c >= n:
                    want = -x0sq if c - n == a else ring.zero()
                else:
                    want = ring.zero()
                if comm != want:
                    return False
        return True


def deg_dn(f: Element) -> int | None:
    n = f.ring.n
    return max((m.exps[2 * n] for m in f._terms), default=None)


def _identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(r == c)) for c in range(2 * n)] for r in range(2 * n)]


def _matmul_q(a, b):
    return [[sum(a[r][t] * b[t][c] for t in range(len(b))) for c in range(len(b[0]))] for r in range(len(a))]


def _inverse_q(g):
    size = len(g)
    aug = [list(map(Fraction, row)) + [Fraction(int(r == c)) for c in range(size)] for r, row in enumerate(g)]
    for c in range(size):
        p = next((r for r in range(c, size) if aug[r][c]), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(size):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[size:] for row in aug]


def _sample(n: int, rng: random.Random, bound: int):
    """A relation-preserving map: per-variable 2x2 of determinant 1, then X -> GX, D -> G^-T D."""
    beta = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        a = 0
        while a == 0:
            a = rng.randint(-bound, bound)
        b_, c = rng.randint(-bound, bound), rng.randint(-bound, bound)
        e = Fraction(1 + b_ * c, a)
        beta[i][i], beta[n + i][i] = Fraction(a), Fraction(b_)
        beta[i][n + i], beta[n + i][n + i] = Fraction(c), e
    while True:
        g = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        gi = _inverse_q(g)
        if gi is not None:
            break
    git = [[gi[c][r] for c in range(n)] for r in range(n)]
    gamma = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for r in range(n):
        for c in range(n):
            gamma[r][c] = g[r][c]
            gamma[n + r][n + c] = git[r][c]
    return _matmul_q(gamma, beta)


def generic_automorphism(h: Element, seed: int = 0, *, retries: int = 8) -> Automorphism:
    """An automorphism a fixing X0 with ``deg_Dn a(h) = deg h``.

    Tries the identity first, then samples maps with integer data in
    ``[-B, B]``, B = 3 doubling on each failed attempt. When h does not
    involve Xn the identity is the only map of the Xn-fixing shape that can
    work (such maps never raise the Dn-degree), so ``fixes_xn`` reports
    whether that shape was achieved.
    """
    ring = h.ring
    if not ring.homogenized:
        raise AmbientMismatch("generic_automorphism works in the homogenized algebra")
    if not h._terms or h.rank != 1:
        raise ValueError("h must be a nonzero ring element")
    if ord_x0(h) != 0:
        raise ValueError("h must not be divisible by X0")
    n = ring.n
    eps = deg(h)
    ident = Automorphism(ring, tuple(map(tuple, _identity(n))), fixes_xn=True)
    if n == 0 or deg_dn(h) == eps:
        return ident
    rng = random.Random(seed)
    bound = 3
    for _ in range(retries):
        mat = _sample(n, rng, bound)
        alpha = Automorphism(ring, tuple(map(tuple, mat)), fixes_xn=False)
        if deg_dn(alpha(h)) == eps:
            return alpha
        bound *= 2
    raise ResourceLimitError(f"no suitable automorphism after {retries} attempts", cap="retries", value=retries)
